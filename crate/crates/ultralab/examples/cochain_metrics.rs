//! Distances and relation values on the two-point cochain K2 and on the
//! pro-Rado limit.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultralab::cochain::{distance, is_strong_at, rel_value_lower, rel_value_upper, Branch, FiniteCochain};
use ultralab::rado::pro_rado::{random_branch, random_sibling};

fn main() -> ultralab::Result<()> {
    let k2 = Arc::new(FiniteCochain::k2_example());
    let a = Branch::new(k2.clone(), vec![0])?;
    let b = Branch::new(k2.clone(), vec![1])?;
    println!("K2: δ(a,b) = {}", distance(&a, &b, 4)?);
    println!("K2: lower value of rho(a,b) = {}", rel_value_lower(0, &[a.clone(), b.clone()], 4)?);
    let up = rel_value_upper(0, &[a, b], 4)?;
    println!("K2: upper value = {} (exact: {})", up.value, up.exact);
    println!("K2: strong at level 0? {:?}", is_strong_at(&*k2, 0, 4)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_branch(&mut rng, 10);
    for k in [0, 3, 7] {
        let y = random_sibling(&mut rng, &x, k, 10)?;
        println!("pro-Rado: sibling split at level {k}: δ = {}, lower edge value = {}",
            distance(&x, &y, 10)?, rel_value_lower(0, &[x.clone(), y.clone()], 10)?);
    }
    Ok(())
}
