//! Realizing a one-point extension of a finite piece of the pro-Rado limit
//! with prescribed distances and edge values.

use ultralab::rado::pro_rado::branch_u64;
use ultralab::rado::{realize, ExtensionSpec};
use ultralab::Level;

fn main() -> ultralab::Result<()> {
    let points = [branch_u64(&[2])?, branch_u64(&[8])?];
    let spec = ExtensionSpec {
        points: points.iter().map(|p| p.literal()).collect(),
        distances: vec![Level::Val(2), Level::Val(0)],
        // 2 and 8 are not adjacent, and the new point copies 2 at level 0
        relations: vec![Level::Zero, Level::Val(0)],
    };
    let r = realize(&spec, 6)?;
    println!("new point: {}, {}, .. rank {} at level 6", r.prefix[0], r.prefix[1], r.prefix[6].rank());
    for c in &r.checks {
        println!("  to point {}: δ = {}, edge value = {}", c.point, c.distance, c.relation);
    }
    Ok(())
}
