//! The back-and-forth isomorphism ψ between the standard graph and the word
//! graph, built greedily.

use ultralab::rado::IsoTable;
use ultralab::Budget;

fn main() -> ultralab::Result<()> {
    let mut table = IsoTable::new(Budget::new(10_000_000));
    for _ in 0..16 {
        table.step()?;
    }
    for (n, w) in table.pairs() {
        println!("ψ({n}) = {w}");
    }
    Ok(())
}
