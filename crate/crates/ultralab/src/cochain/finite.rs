//! Cochains given by finitely many stored levels.

use serde::{Deserialize, Serialize};

use super::LevelSystem;
use crate::error::{Error, Result};
use crate::structure::{check_map, FinStructure, MorphismKind, Signature, Vertex, VertexMap};

/// How levels past the stored ones are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extender {
    /// Repeat the last stored level with identity bonds.
    RepeatLast,
}

/// Stored levels `A_0 .. A_d` with bonds `bonds[i]: A_{i+1} -> A_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CochainJson", into = "CochainJson")]
pub struct FiniteCochain {
    levels: Vec<FinStructure>,
    bonds: Vec<VertexMap>,
    extender: Option<Extender>,
}

#[derive(Serialize, Deserialize)]
struct CochainJson {
    levels: Vec<FinStructure>,
    bonds: Vec<Vec<(Vertex, Vertex)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extender: Option<Extender>,
}

impl TryFrom<CochainJson> for FiniteCochain {
    type Error = Error;
    fn try_from(j: CochainJson) -> Result<Self> {
        let bonds = j.bonds.into_iter().map(|b| b.into_iter().collect()).collect();
        FiniteCochain::new(j.levels, bonds, j.extender)
    }
}

impl From<FiniteCochain> for CochainJson {
    fn from(c: FiniteCochain) -> Self {
        CochainJson {
            levels: c.levels,
            bonds: c.bonds.into_iter().map(|b| b.into_iter().collect()).collect(),
            extender: c.extender,
        }
    }
}

impl FiniteCochain {
    pub fn new(levels: Vec<FinStructure>, bonds: Vec<VertexMap>, extender: Option<Extender>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::input("a cochain needs at least one level"));
        }
        if bonds.len() + 1 != levels.len() {
            return Err(Error::input(format!("{} levels need {} bonds, got {}", levels.len(), levels.len() - 1, bonds.len())));
        }
        let sig = levels[0].signature();
        if let Some(i) = levels.iter().position(|l| l.signature() != sig) {
            return Err(Error::input(format!("level {i} has a different signature")));
        }
        for (i, b) in bonds.iter().enumerate() {
            if !check_map(&levels[i + 1], &levels[i], b, MorphismKind::Hom)? {
                return Err(Error::input(format!("bond {}->{} is not a homomorphism", i + 1, i)));
            }
        }
        Ok(FiniteCochain { levels, bonds, extender })
    }

    /// One structure at every level, identity bonds.
    pub fn constant(s: FinStructure) -> Self {
        FiniteCochain { levels: vec![s], bonds: vec![], extender: Some(Extender::RepeatLast) }
    }

    /// `A_0` an edge `{0,1}` without loops, every deeper level the edgeless
    /// pair, identity bonds. The pair is at lower value 1/2 from the edge
    /// relation but at upper value 1, since the limit relation is empty.
    pub fn k2_example() -> Self {
        let mut edge = FinStructure::discrete(Signature::graph(), [0, 1]);
        edge.insert(0, vec![0, 1]).unwrap();
        edge.insert(0, vec![1, 0]).unwrap();
        let empty = FinStructure::discrete(Signature::graph(), [0, 1]);
        let id: VertexMap = [(0, 0), (1, 1)].into_iter().collect();
        FiniteCochain::new(vec![edge, empty], vec![id], Some(Extender::RepeatLast)).unwrap()
    }

    /// `A_0 = {0,1}` edgeless, every deeper level `{0}`: the only
    /// non-surjective bond is the first one.
    pub fn non_surjective_example() -> Self {
        let a0 = FinStructure::discrete(Signature::graph(), [0, 1]);
        let a1 = FinStructure::discrete(Signature::graph(), [0]);
        FiniteCochain::new(vec![a0, a1], vec![[(0, 0)].into_iter().collect()], Some(Extender::RepeatLast)).unwrap()
    }

    pub fn one_point() -> Self {
        FiniteCochain::constant(FinStructure::graph_with_loops(1, &[]).unwrap())
    }

    pub fn stored_levels(&self) -> &[FinStructure] {
        &self.levels
    }

    pub fn stored_bonds(&self) -> &[VertexMap] {
        &self.bonds
    }

    pub fn extender(&self) -> Option<Extender> {
        self.extender
    }

    pub fn level(&self, i: usize) -> Result<&FinStructure> {
        match (self.levels.get(i), self.extender) {
            (Some(l), _) => Ok(l),
            (None, Some(Extender::RepeatLast)) => Ok(self.levels.last().unwrap()),
            (None, None) => Err(Error::input(format!("level {i} is past the {} stored levels", self.levels.len()))),
        }
    }

    /// `bonds[i]` as a map, materialising identity bonds past the stored
    /// levels.
    pub fn bond_map(&self, i: usize) -> Result<VertexMap> {
        if let Some(b) = self.bonds.get(i) {
            return Ok(b.clone());
        }
        let top = self.level(i + 1)?;
        Ok(top.universe().iter().map(|&v| (v, v)).collect())
    }

    /// Composed bond `A_j -> A_i`.
    pub fn composed_bond(&self, i: usize, j: usize, v: Vertex) -> Result<Vertex> {
        let mut v = v;
        for k in (i..j).rev() {
            v = self.bond(k, &v)?;
        }
        Ok(v)
    }

    pub fn is_bond_surjective(&self, i: usize) -> Result<bool> {
        let b = self.bond_map(i)?;
        let image: std::collections::BTreeSet<_> = b.values().copied().collect();
        Ok(image.len() == self.level(i)?.size())
    }

    /// Truncates or extends the stored part to levels `0..=depth`.
    pub fn truncated(&self, depth: usize) -> Result<FiniteCochain> {
        let levels = (0..=depth).map(|i| self.level(i).cloned()).collect::<Result<Vec<_>>>()?;
        let bonds = (0..depth).map(|i| self.bond_map(i)).collect::<Result<Vec<_>>>()?;
        FiniteCochain::new(levels, bonds, self.extender)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("cochains serialize")
    }
}

impl LevelSystem for FiniteCochain {
    type V = Vertex;

    fn signature(&self) -> &Signature {
        self.levels[0].signature()
    }

    fn stored_depth(&self) -> Option<usize> {
        match self.extender {
            Some(_) => None,
            None => Some(self.levels.len() - 1),
        }
    }

    fn contains(&self, level: usize, v: &Vertex) -> Result<bool> {
        Ok(self.level(level)?.contains(*v))
    }

    fn bond(&self, level: usize, v: &Vertex) -> Result<Vertex> {
        if !self.level(level + 1)?.contains(*v) {
            return Err(Error::input(format!("{v} is not a vertex of level {}", level + 1)));
        }
        Ok(match self.bonds.get(level) {
            Some(b) => b[v],
            None => *v,
        })
    }

    fn extend(&self, level: usize, v: &Vertex) -> Result<Vertex> {
        let fiber = self.fiber(level, v)?.unwrap();
        fiber.first().copied().ok_or_else(|| {
            Error::input(format!("{v} at level {level} has no preimage: the bond {}->{level} is not surjective", level + 1))
        })
    }

    fn holds(&self, level: usize, rel: usize, tuple: &[Vertex]) -> Result<bool> {
        Ok(self.level(level)?.holds(rel, tuple))
    }

    fn level_vertices(&self, level: usize) -> Result<Option<Vec<Vertex>>> {
        Ok(Some(self.level(level)?.universe().to_vec()))
    }

    fn fiber(&self, level: usize, v: &Vertex) -> Result<Option<Vec<Vertex>>> {
        let top = self.level(level + 1)?;
        let mut out = Vec::new();
        for u in top.universe() {
            if self.bond(level, u)? == *v {
                out.push(*u);
            }
        }
        Ok(Some(out))
    }

    fn lifts_certified_from(&self) -> Option<usize> {
        self.extender.map(|_| self.levels.len() - 1)
    }

    fn canonical_preserves_from(&self) -> Option<usize> {
        self.lifts_certified_from()
    }

    fn describe(&self) -> String {
        format!("finite cochain with {} stored levels", self.levels.len())
    }
}

impl FiniteCochain {
    /// A random graph cochain with levels `0..=depth` of at most `max_size`
    /// vertices. With `surjective` every bond is onto; without it at least
    /// one bond misses a vertex.
    pub fn random<R: rand::Rng>(rng: &mut R, depth: usize, max_size: u64, surjective: bool) -> FiniteCochain {
        loop {
            let c = Self::random_once(rng, depth, max_size, surjective);
            let all_onto = (0..depth).all(|i| c.is_bond_surjective(i).unwrap());
            if all_onto == surjective {
                return c;
            }
        }
    }

    fn random_once<R: rand::Rng>(rng: &mut R, depth: usize, max_size: u64, surjective: bool) -> FiniteCochain {
        let sig = Signature::graph();
        let n0 = rng.gen_range(1..=max_size);
        let mut a0 = FinStructure::discrete(sig.clone(), 0..n0);
        for u in 0..n0 {
            for v in 0..n0 {
                if rng.gen_bool(0.5) {
                    a0.insert(0, vec![u, v]).unwrap();
                }
            }
        }
        let mut levels = vec![a0];
        let mut bonds = Vec::new();
        for _ in 0..depth {
            let below = levels.last().unwrap();
            let m = below.size() as u64;
            let n = if surjective { rng.gen_range(m..=max_size) } else { rng.gen_range(1..=max_size) };
            let bond: VertexMap = (0..n)
                .map(|v| (v, if surjective && v < m { v } else { rng.gen_range(0..m) }))
                .collect();
            let mut next = FinStructure::discrete(sig.clone(), 0..n);
            for u in 0..n {
                for v in 0..n {
                    if below.holds(0, &[bond[&u], bond[&v]]) && rng.gen_bool(0.6) {
                        next.insert(0, vec![u, v]).unwrap();
                    }
                }
            }
            levels.push(next);
            bonds.push(bond);
        }
        FiniteCochain::new(levels, bonds, None).expect("random bonds are homomorphisms")
    }
}
