//! A few rounds of the back-and-forth game on the pro-Rado limit, starting
//! from a one-pair partial isomorphism.

use ultralab::dynamics::{bf_extend, PartialIso};
use ultralab::rado::pro_rado::branch_u64;
use ultralab::rado::pro_rado;

fn main() -> ultralab::Result<()> {
    let depth = 4;
    let start = vec![(branch_u64(&[2])?, branch_u64(&[8])?)];
    let p = PartialIso::new(pro_rado(), pro_rado(), start, depth)?;
    let table = bf_extend(p, 4)?;
    for r in &table.log {
        println!("round {} {:?}: level {} vertex {}", r.round, r.mv, r.level, r.vertex);
    }
    // deeper coordinates are towers, so only their rank is shown
    let show = |x: &ultralab::rado::RadoBranch| -> ultralab::Result<String> {
        let p = x.prefix_to(depth)?;
        Ok(format!("{}, {}, .. rank {} at level {depth}", p[0], p[1], p[depth].rank()))
    };
    for (a, b) in table.iso.pairs() {
        println!("({}) -> ({})", show(a)?, show(b)?);
    }
    Ok(())
}
