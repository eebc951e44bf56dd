//! Searching for a skew-homogeneous pair (φ, ψ) over Ω for a small
//! instance.

use ultralab::dynamics::{skew_hom_check, SkewInstance};
use ultralab::Budget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst: SkewInstance = serde_json::from_str(r#"{"iota":{"0":1,"1":2},"kappa":{"0":1,"1":3},"h":{"0":0,"1":0}}"#)?;
    let v = skew_hom_check(&inst, 64, &mut Budget::new(1_000_000))?;
    println!("found: {} after {} steps", v.found, v.steps);
    println!("φ (first 8 of {}): {:?}", v.phi.len(), &v.phi[..v.phi.len().min(8)]);
    println!("ψ: {:?}", v.psi);
    Ok(())
}
