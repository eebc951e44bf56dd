//! Finite relational structures, morphisms, canonical forms and classes.

mod canon;
mod class;
mod morphism;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canon::{canonical_form, CanonKey};
pub use class::{generate_class, Class, ClassKind, ClassPresentation};
pub use morphism::{
    check_map, compose, enumerate_maps, enumerate_morphisms, find_isomorphism, identity_map,
    is_morphism, search_maps, Morphism, MorphismKind, VertexMap,
};

pub type Vertex = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelSymbol {
    pub name: String,
    pub arity: usize,
}

/// A finite, purely relational signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<RelSymbol>", into = "Vec<RelSymbol>")]
pub struct Signature {
    relations: Vec<RelSymbol>,
}

impl Signature {
    pub fn new(relations: Vec<RelSymbol>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &relations {
            if r.arity == 0 {
                return Err(Error::input(format!("relation {} has arity 0", r.name)));
            }
            if r.name.is_empty() || !r.name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::input(format!("bad relation name {:?}", r.name)));
            }
            if !seen.insert(r.name.clone()) {
                return Err(Error::input(format!("duplicate relation name {}", r.name)));
            }
        }
        Ok(Signature { relations })
    }

    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Signature::new(
            pairs.iter().map(|(n, a)| RelSymbol { name: n.to_string(), arity: *a }).collect(),
        )
    }

    /// One binary relation `rho`.
    pub fn graph() -> Self {
        Signature { relations: vec![RelSymbol { name: "rho".into(), arity: 2 }] }
    }

    /// One binary relation `le`.
    pub fn order() -> Self {
        Signature { relations: vec![RelSymbol { name: "le".into(), arity: 2 }] }
    }

    pub fn relations(&self) -> &[RelSymbol] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.relations[rel].arity
    }

    pub fn name(&self, rel: usize) -> &str {
        &self.relations[rel].name
    }
}

impl TryFrom<Vec<RelSymbol>> for Signature {
    type Error = Error;
    fn try_from(v: Vec<RelSymbol>) -> Result<Self> {
        Signature::new(v)
    }
}

impl From<Signature> for Vec<RelSymbol> {
    fn from(s: Signature) -> Self {
        s.relations
    }
}

pub type Tuple = Vec<Vertex>;

/// A finite structure. The universe is kept sorted and every relation is a
/// set of tuples over it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StructureJson", into = "StructureJson")]
pub struct FinStructure {
    signature: Signature,
    universe: Vec<Vertex>,
    relations: Vec<BTreeSet<Tuple>>,
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    signature: Signature,
    universe: Vec<Vertex>,
    relations: BTreeMap<String, Vec<Tuple>>,
}

impl TryFrom<StructureJson> for FinStructure {
    type Error = Error;
    fn try_from(j: StructureJson) -> Result<Self> {
        FinStructure::new(j.signature, j.universe, j.relations)
    }
}

impl From<FinStructure> for StructureJson {
    fn from(s: FinStructure) -> Self {
        let relations = s
            .signature
            .relations
            .iter()
            .zip(&s.relations)
            .map(|(r, set)| (r.name.clone(), set.iter().cloned().collect()))
            .collect();
        StructureJson { signature: s.signature, universe: s.universe, relations }
    }
}

impl FinStructure {
    /// Builds a structure from named relation lists. Missing names mean empty
    /// relations; unknown names are an error.
    pub fn new(
        signature: Signature,
        universe: impl IntoIterator<Item = Vertex>,
        relations: BTreeMap<String, Vec<Tuple>>,
    ) -> Result<Self> {
        let mut sets = vec![BTreeSet::new(); signature.len()];
        for (name, tuples) in relations {
            let idx = signature
                .index_of(&name)
                .ok_or_else(|| Error::input(format!("relation {name} not in signature")))?;
            sets[idx].extend(tuples);
        }
        FinStructure::from_sets(signature, universe, sets)
    }

    pub fn from_sets(
        signature: Signature,
        universe: impl IntoIterator<Item = Vertex>,
        relations: Vec<BTreeSet<Tuple>>,
    ) -> Result<Self> {
        let mut universe: Vec<Vertex> = universe.into_iter().collect();
        universe.sort_unstable();
        universe.dedup();
        if relations.len() != signature.len() {
            return Err(Error::input("relation count does not match signature"));
        }
        for (i, set) in relations.iter().enumerate() {
            for t in set {
                if t.len() != signature.arity(i) {
                    return Err(Error::input(format!(
                        "tuple {t:?} has wrong arity for {}",
                        signature.name(i)
                    )));
                }
                if let Some(v) = t.iter().find(|v| universe.binary_search(v).is_err()) {
                    return Err(Error::input(format!(
                        "tuple {t:?} of {} uses {v} outside the universe",
                        signature.name(i)
                    )));
                }
            }
        }
        Ok(FinStructure { signature, universe, relations })
    }

    pub fn discrete(signature: Signature, universe: impl IntoIterator<Item = Vertex>) -> Self {
        let n = signature.len();
        FinStructure::from_sets(signature, universe, vec![BTreeSet::new(); n])
            .expect("empty relations are always valid")
    }

    /// Graph on `0..n` with the given undirected edges and every loop.
    pub fn graph_with_loops(n: u64, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut s = FinStructure::discrete(Signature::graph(), 0..n);
        for v in 0..n {
            s.insert(0, vec![v, v])?;
        }
        for &(a, b) in edges {
            s.insert(0, vec![a, b])?;
            s.insert(0, vec![b, a])?;
        }
        Ok(s)
    }

    /// The reflexive chain 0 <= 1 <= ... <= n-1.
    pub fn chain(n: u64) -> Self {
        let mut s = FinStructure::discrete(Signature::order(), 0..n);
        for i in 0..n {
            for j in i..n {
                s.relations[0].insert(vec![i, j]);
            }
        }
        s
    }

    pub fn insert(&mut self, rel: usize, tuple: Tuple) -> Result<()> {
        if tuple.len() != self.signature.arity(rel) {
            return Err(Error::input("tuple arity mismatch"));
        }
        if tuple.iter().any(|v| !self.contains(*v)) {
            return Err(Error::input(format!("tuple {tuple:?} leaves the universe")));
        }
        self.relations[rel].insert(tuple);
        Ok(())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &[Vertex] {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.universe.binary_search(&v).is_ok()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.universe.binary_search(&v).ok()
    }

    pub fn relation(&self, rel: usize) -> &BTreeSet<Tuple> {
        &self.relations[rel]
    }

    pub fn relation_named(&self, name: &str) -> Option<&BTreeSet<Tuple>> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn holds(&self, rel: usize, tuple: &[Vertex]) -> bool {
        self.relations[rel].contains(tuple)
    }

    /// Induced substructure on the given vertices (those outside the universe
    /// are ignored).
    pub fn induced(&self, vertices: &[Vertex]) -> FinStructure {
        let keep: BTreeSet<Vertex> = vertices.iter().copied().filter(|v| self.contains(*v)).collect();
        let relations = self
            .relations
            .iter()
            .map(|set| set.iter().filter(|t| t.iter().all(|v| keep.contains(v))).cloned().collect())
            .collect();
        FinStructure { signature: self.signature.clone(), universe: keep.into_iter().collect(), relations }
    }

    /// Image of the structure under an injective relabelling.
    pub fn relabel(&self, map: &VertexMap) -> Result<FinStructure> {
        let universe: Vec<Vertex> = self
            .universe
            .iter()
            .map(|v| map.get(v).copied().ok_or_else(|| Error::input(format!("relabel misses {v}"))))
            .collect::<Result<_>>()?;
        let distinct: BTreeSet<_> = universe.iter().collect();
        if distinct.len() != universe.len() {
            return Err(Error::input("relabelling is not injective"));
        }
        let relations = self
            .relations
            .iter()
            .map(|set| set.iter().map(|t| t.iter().map(|v| map[v]).collect()).collect())
            .collect();
        FinStructure::from_sets(self.signature.clone(), universe, relations)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("structures serialize")
    }
}

impl fmt::Display for FinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.universe.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")?;
        for (r, set) in self.signature.relations.iter().zip(&self.relations) {
            write!(f, " {}=[", r.name)?;
            for (i, t) in set.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                write!(f, "({})", parts.join(","))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_matches_documented_shape() {
        let s = FinStructure::graph_with_loops(2, &[(0, 1)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"signature":[{"name":"rho","arity":2}],"universe":[0,1],"relations":{"rho":[[0,0],[0,1],[1,0],[1,1]]}}"#
        );
        let back: FinStructure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_tuple_outside_universe() {
        let mut rels = BTreeMap::new();
        rels.insert("rho".to_string(), vec![vec![0, 5]]);
        assert!(FinStructure::new(Signature::graph(), [0, 1], rels).is_err());
    }

    #[test]
    fn rejects_duplicate_names_and_zero_arity() {
        assert!(Signature::from_pairs(&[("a", 1), ("a", 2)]).is_err());
        assert!(Signature::from_pairs(&[("a", 0)]).is_err());
    }

    #[test]
    fn induced_keeps_only_inner_tuples() {
        let s = FinStructure::graph_with_loops(3, &[(0, 1), (1, 2)]).unwrap();
        let t = s.induced(&[0, 2]);
        assert_eq!(t.universe(), &[0, 2]);
        assert_eq!(t.relation(0).len(), 2);
    }
}
