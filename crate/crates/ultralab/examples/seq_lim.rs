//! The counit ε on a surjective and a non-surjective cochain, and the
//! triangle identities on sampled branches.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultralab::cochain::FiniteCochain;
use ultralab::seqlim::{check_triangle_identities, epsilon_is_iso, random_branches, seq_quotient};

fn main() -> ultralab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, c) in [("k2", FiniteCochain::k2_example()), ("non-surjective", FiniteCochain::non_surjective_example())] {
        let c = Arc::new(c);
        let depth = 3;
        let q = seq_quotient(&c, 0, depth)?;
        println!("{name}: level-0 quotient has {} classes", q.classes.len());
        for v in epsilon_is_iso(&c, depth)? {
            println!("  ε_{} iso: {}", v.level, v.iso);
        }
        let samples = random_branches(&mut rng, &c, depth, 10)?;
        println!("  triangle identities: {}", check_triangle_identities(&c, &samples, depth)?.pass());
    }
    Ok(())
}
