//! The shift operators and the conjugation procedure that extends a finite
//! isometry of the pro-Rado limit to an automorphism fragment.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultralab::cochain::distance;
use ultralab::dynamics::{conjugate_extend, shift_left, shift_level, shift_right, DiscreteIso};
use ultralab::rado::pro_rado::branch_u64;

fn main() -> ultralab::Result<()> {
    let (x, y) = (branch_u64(&[2])?, branch_u64(&[8])?);
    println!("δ(x,y) = {}", distance(&x, &y, 8)?);
    println!("δ(T_R x, T_R y) = {}", distance(&shift_right(&x), &shift_right(&y), 8)?);
    println!("T_L T_R x = x: {}", shift_left(&shift_right(&x)).prefix_to(8)? == x.prefix_to(8)?);

    let alpha = DiscreteIso::new(vec![(x.clone(), y.clone()), (y, x)], 8)?;
    println!("shift level: {:?}", shift_level(&alpha)?);
    let c = conjugate_extend(&alpha, 8, 4, 20, &mut ChaCha8Rng::seed_from_u64(0))?;
    println!("extends α: {:?}; {} sampled pairs, all preserved: {}", c.extends, c.samples.len(), c.pass);
    Ok(())
}
