use std::collections::BTreeSet;

use super::{FinStructure, Vertex, VertexMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyPart {
    /// row-major adjacency bits, first cell most significant
    Bits(u64),
    Tuples(Vec<Vec<u8>>),
}

/// Canonical form key: minimal relation encoding over all vertex orders,
/// prefixed by the universe size.
pub type CanonKey = (usize, Vec<KeyPart>);

const MAX_CANON: usize = 9;

fn encode(s: &FinStructure, tuples: &[Vec<Vec<usize>>], perm: &[usize]) -> Vec<KeyPart> {
    let n = s.size();
    tuples
        .iter()
        .enumerate()
        .map(|(rel, ts)| {
            let ar = s.signature().arity(rel);
            if ar <= 2 && n.pow(ar as u32) <= 64 {
                let cells = n.pow(ar as u32);
                let mut bits = 0u64;
                for t in ts {
                    let idx = t.iter().fold(0usize, |acc, &p| acc * n + perm[p]);
                    bits |= 1u64 << (cells - 1 - idx);
                }
                KeyPart::Bits(bits)
            } else {
                let mut list: Vec<Vec<u8>> =
                    ts.iter().map(|t| t.iter().map(|&p| perm[p] as u8).collect()).collect();
                list.sort_unstable();
                KeyPart::Tuples(list)
            }
        })
        .collect()
}

/// Minimal encoding under vertex permutations, and the structure relabelled
/// onto `0..n` by a minimizing permutation. Exhaustive, so limited to small
/// universes.
pub fn canonical_form(s: &FinStructure) -> Result<(CanonKey, FinStructure)> {
    let n = s.size();
    if n > MAX_CANON {
        return Err(Error::input(format!("canonical form limited to {MAX_CANON} vertices, got {n}")));
    }
    let tuples: Vec<Vec<Vec<usize>>> = (0..s.signature().len())
        .map(|rel| {
            s.relation(rel)
                .iter()
                .map(|t| t.iter().map(|v| s.position(*v).unwrap()).collect())
                .collect()
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_perm = perm.clone();
    let mut best = encode(s, &tuples, &perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let key = encode(s, &tuples, &perm);
            if key < best {
                best = key;
                best_perm = perm.clone();
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let map: VertexMap =
        s.universe().iter().enumerate().map(|(p, &v)| (v, best_perm[p] as Vertex)).collect();
    let relabelled = s.relabel(&map)?;
    Ok(((n, best), relabelled))
}

/// Distinct canonical keys of the induced substructures on all nonempty
/// vertex subsets.
pub(crate) fn substructure_keys(s: &FinStructure) -> Result<BTreeSet<CanonKey>> {
    let n = s.size();
    let mut keys = BTreeSet::new();
    for mask in 1u64..(1u64 << n) {
        let verts: Vec<Vertex> =
            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s.universe()[i]).collect();
        keys.insert(canonical_form(&s.induced(&verts))?.0);
    }
    Ok(keys)
}
