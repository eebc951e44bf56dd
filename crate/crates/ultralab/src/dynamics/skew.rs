//! Finite fragments of skew-homogeneity for `Ω: U_{i+1} -> U_i` on the
//! standard Rado levels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::rado::{free_witness, omega, witness, Hf};
use crate::structure::Vertex;

/// `ι, κ: A ↪ U_{i+1}` and `h: A -> U_i` with `Ω∘ι = h` and `Ω∘κ = ψ∘h`.
/// `A` is the substructure induced by `ι`. When `psi` is omitted, `ψ` is the
/// map `h(a) ↦ Ω(κ(a))`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkewInstance {
    #[serde(default)]
    pub level: usize,
    pub iota: BTreeMap<Vertex, Hf>,
    pub kappa: BTreeMap<Vertex, Hf>,
    pub h: BTreeMap<Vertex, Hf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<(Hf, Hf)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SkewVerdict {
    pub found: bool,
    pub bound: u64,
    /// The automorphism fragment of `U_{i+1}`, as `[u, φ(u)]`.
    pub phi: Vec<(Hf, Hf)>,
    /// The matching fragment of `U_i`.
    pub psi: Vec<(Hf, Hf)>,
    pub steps: u64,
}

#[derive(Default)]
struct Fragment {
    fwd: BTreeMap<Hf, Hf>,
    bwd: BTreeMap<Hf, Hf>,
}

impl Fragment {
    fn insert(&mut self, u: Hf, v: Hf) -> Result<()> {
        if let Some(w) = self.fwd.get(&u) {
            return if *w == v { Ok(()) } else { Err(Error::input(format!("{u} is sent to both {w} and {v}"))) };
        }
        if let Some(w) = self.bwd.get(&v) {
            return Err(Error::input(format!("{w} and {u} are both sent to {v}")));
        }
        for (x, y) in &self.fwd {
            if x.adjacent(&u) != y.adjacent(&v) {
                return Err(Error::input(format!("{u} ↦ {v} breaks adjacency with {x} ↦ {y}")));
            }
        }
        self.fwd.insert(u.clone(), v.clone());
        self.bwd.insert(v, u);
        Ok(())
    }

    fn pattern(map: &BTreeMap<Hf, Hf>, u: &Hf) -> (Vec<Hf>, Vec<Hf>) {
        let mut adj = Vec::new();
        let mut non = Vec::new();
        for (x, y) in map {
            if x.adjacent(u) {
                adj.push(y.clone());
            } else {
                non.push(y.clone());
            }
        }
        (adj, non)
    }
}

fn check_instance(inst: &SkewInstance) -> Result<(Fragment, Fragment)> {
    if inst.iota.keys().ne(inst.kappa.keys()) || inst.iota.keys().ne(inst.h.keys()) {
        return Err(Error::input("iota, kappa and h must have the same domain"));
    }
    let mut phi = Fragment::default();
    for (a, x) in &inst.iota {
        if omega(x) != inst.h[a] {
            return Err(Error::input(format!("Ω(ι({a})) = {} but h({a}) = {}", omega(x), inst.h[a])));
        }
        phi.insert(x.clone(), inst.kappa[a].clone())
            .map_err(|e| Error::input(format!("kappa is not an embedding of the structure induced by iota: {e}")))?;
    }
    let mut psi = Fragment::default();
    let given = match &inst.psi {
        Some(p) => p.clone(),
        None => inst.h.iter().map(|(a, v)| (v.clone(), omega(&inst.kappa[a]))).collect(),
    };
    for (u, v) in given {
        psi.insert(u, v).map_err(|e| Error::input(format!("psi is not a partial automorphism: {e}")))?;
    }
    for (a, k) in &inst.kappa {
        if psi.fwd.get(&inst.h[a]) != Some(&omega(k)) {
            return Err(Error::input(format!("the square fails at {a}: Ω(κ({a})) ≠ ψ(h({a}))")));
        }
    }
    Ok((phi, psi))
}

fn forth(phi: &mut Fragment, psi: &mut Fragment, u: &Hf) -> Result<()> {
    if phi.fwd.contains_key(u) {
        return Ok(());
    }
    let c = omega(u);
    if !psi.fwd.contains_key(&c) {
        let (adj, non) = Fragment::pattern(&psi.fwd, &c);
        let avoid: Vec<Hf> = psi.bwd.keys().cloned().collect();
        let d = free_witness(&adj, &non, &avoid)?;
        psi.insert(c.clone(), d)?;
    }
    let (adj, non) = Fragment::pattern(&phi.fwd, u);
    let avoid: Vec<Hf> = phi.bwd.keys().cloned().collect();
    let v = witness(&adj, &non, &psi.fwd[&c], &avoid)?;
    phi.insert(u.clone(), v)
}

/// Grows `φ ⊇ ι ↦ κ` and `ψ` by back-and-forth over the vertices below
/// `bound` on both sides, keeping `Ω∘φ = ψ∘Ω`. Every vertex `< bound` ends
/// up in the domain and in the range of `φ`.
pub fn skew_hom_check(inst: &SkewInstance, bound: u64, budget: &mut Budget) -> Result<SkewVerdict> {
    let (mut phi, mut psi) = check_instance(inst)?;
    for n in 0..bound {
        let u = Hf::from_u64(n);
        budget.tick("skew back-and-forth")?;
        forth(&mut phi, &mut psi, &u)?;
        budget.tick("skew back-and-forth")?;
        // back is forth for the inverse fragments
        std::mem::swap(&mut phi.fwd, &mut phi.bwd);
        std::mem::swap(&mut psi.fwd, &mut psi.bwd);
        let res = forth(&mut phi, &mut psi, &u);
        std::mem::swap(&mut phi.fwd, &mut phi.bwd);
        std::mem::swap(&mut psi.fwd, &mut psi.bwd);
        res?;
    }
    for (u, v) in &phi.fwd {
        if psi.fwd.get(&omega(u)) != Some(&omega(v)) {
            return Err(Error::Search(format!("fragment fails Ω∘φ = ψ∘Ω at {u}")));
        }
    }
    Ok(SkewVerdict {
        found: true,
        bound,
        phi: phi.fwd.into_iter().collect(),
        psi: psi.fwd.into_iter().collect(),
        steps: budget.used(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(iota: &[(u64, u64)], kappa: &[(u64, u64)]) -> SkewInstance {
        let m = |v: &[(u64, u64)]| v.iter().map(|&(a, x)| (a, Hf::from_u64(x))).collect::<BTreeMap<_, _>>();
        let iota = m(iota);
        let h = iota.iter().map(|(a, x)| (*a, omega(x))).collect();
        SkewInstance { level: 0, iota, kappa: m(kappa), h, psi: None }
    }

    #[test]
    fn equal_embeddings_give_identity() {
        let v = skew_hom_check(&inst(&[(0, 5), (1, 9)], &[(0, 5), (1, 9)]), 32, &mut Budget::new(10_000)).unwrap();
        assert!(v.phi.iter().all(|(u, w)| u == w));
        assert!(v.psi.iter().all(|(u, w)| u == w));
    }

    #[test]
    fn one_point_instance() {
        let v = skew_hom_check(&inst(&[(0, 3)], &[(0, 40)]), 64, &mut Budget::new(10_000)).unwrap();
        assert!(v.found);
        assert!(v.phi.contains(&(Hf::from_u64(3), Hf::from_u64(40))));
        for n in 0..64 {
            let x = Hf::from_u64(n);
            assert!(v.phi.iter().any(|(u, _)| *u == x));
            assert!(v.phi.iter().any(|(_, w)| *w == x));
        }
    }

    #[test]
    fn broken_square_is_an_input_error() {
        let mut i = inst(&[(0, 3)], &[(0, 40)]);
        i.h.insert(0, Hf::from_u64(6));
        assert!(matches!(skew_hom_check(&i, 8, &mut Budget::new(100)), Err(Error::Input(_))));
    }
}
