use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::canon::substructure_keys;
use super::{canonical_form, CanonKey, FinStructure, Signature, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// Graphs in which every vertex carries a loop.
    GraphsWithLoops,
    /// Reflexive linear orders.
    LinearOrders,
    Explicit(Vec<FinStructure>),
    /// All nonempty induced substructures of one finite structure.
    AgeOf(FinStructure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPresentation {
    pub kind: ClassKind,
    pub max_size: usize,
}

/// All members up to isomorphism with `1 <= size <= max_size`, ordered by
/// size and then canonical form.
pub fn generate_class(p: &ClassPresentation) -> Result<Vec<FinStructure>> {
    let class = Class::new(p.kind.clone())?;
    let mut out = Vec::new();
    for n in 1..=p.max_size {
        out.extend(class.members_of_size(n)?.iter().cloned());
    }
    Ok(out)
}

type Members = Arc<Vec<(CanonKey, FinStructure)>>;

/// A class of finite structures with members generated lazily per size.
#[derive(Debug)]
pub struct Class {
    kind: ClassKind,
    signature: Signature,
    cache: Mutex<BTreeMap<usize, Members>>,
}

impl Class {
    pub fn new(kind: ClassKind) -> Result<Self> {
        let signature = match &kind {
            ClassKind::GraphsWithLoops => Signature::graph(),
            ClassKind::LinearOrders => Signature::order(),
            ClassKind::AgeOf(g) => {
                if g.size() == 0 {
                    return Err(Error::input("age of the empty structure"));
                }
                g.signature().clone()
            }
            ClassKind::Explicit(list) => {
                let first = list.first().ok_or_else(|| Error::input("empty explicit class"))?;
                if list.iter().any(|s| s.signature() != first.signature()) {
                    return Err(Error::input("explicit class mixes signatures"));
                }
                if list.iter().any(|s| s.size() == 0) {
                    return Err(Error::input("the empty structure is not a class member"));
                }
                first.signature().clone()
            }
        };
        Ok(Class { kind, signature, cache: Mutex::new(BTreeMap::new()) })
    }

    pub fn graphs() -> Self {
        Class::new(ClassKind::GraphsWithLoops).unwrap()
    }

    pub fn linear_orders() -> Self {
        Class::new(ClassKind::LinearOrders).unwrap()
    }

    pub fn age_of(gamma: FinStructure) -> Result<Self> {
        Class::new(ClassKind::AgeOf(gamma))
    }

    pub fn kind(&self) -> &ClassKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ClassKind::GraphsWithLoops => "graphs",
            ClassKind::LinearOrders => "linorders",
            ClassKind::Explicit(_) => "explicit",
            ClassKind::AgeOf(_) => "age",
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Size of the largest member, for classes that are finite.
    pub fn largest_member(&self) -> Option<usize> {
        match &self.kind {
            ClassKind::AgeOf(g) => Some(g.size()),
            ClassKind::Explicit(list) => list.iter().map(|s| s.size()).max(),
            _ => None,
        }
    }

    /// Whether the class is closed under nonempty induced substructures.
    pub fn is_hereditary(&self) -> Result<bool> {
        match &self.kind {
            ClassKind::Explicit(list) => {
                for s in list {
                    for key in substructure_keys(s)? {
                        let members = self.keyed_members(key.0)?;
                        if !members.iter().any(|(k, _)| *k == key) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            _ => Ok(true),
        }
    }

    /// Members of exactly `n` vertices, one per isomorphism type.
    pub fn members_of_size(&self, n: usize) -> Result<Arc<Vec<FinStructure>>> {
        Ok(Arc::new(self.keyed_members(n)?.iter().map(|(_, s)| s.clone()).collect()))
    }

    fn keyed_members(&self, n: usize) -> Result<Members> {
        if let Some(m) = self.cache.lock().unwrap().get(&n) {
            return Ok(m.clone());
        }
        let built = Arc::new(self.build(n)?);
        self.cache.lock().unwrap().insert(n, built.clone());
        Ok(built)
    }

    fn build(&self, n: usize) -> Result<Vec<(CanonKey, FinStructure)>> {
        let mut found: BTreeMap<CanonKey, FinStructure> = BTreeMap::new();
        if n == 0 {
            return Ok(Vec::new());
        }
        match &self.kind {
            ClassKind::GraphsWithLoops => {
                let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
                    .flat_map(|i| (i + 1..n as Vertex).map(move |j| (i, j)))
                    .collect();
                if pairs.len() > 28 {
                    return Err(Error::input(format!("graph generation beyond 8 vertices ({n})")));
                }
                for mask in 0u64..(1u64 << pairs.len()) {
                    let edges: Vec<_> =
                        pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
                    let g = FinStructure::graph_with_loops(n as Vertex, &edges)?;
                    let (key, canon) = canonical_form(&g)?;
                    found.entry(key).or_insert(canon);
                }
            }
            ClassKind::LinearOrders => {
                let c = FinStructure::chain(n as Vertex);
                let (key, canon) = canonical_form(&c)?;
                found.insert(key, canon);
            }
            ClassKind::AgeOf(g) => {
                let m = g.size();
                for mask in 1u64..(1u64 << m) {
                    if mask.count_ones() as usize != n {
                        continue;
                    }
                    let verts: Vec<Vertex> =
                        (0..m).filter(|i| mask >> i & 1 == 1).map(|i| g.universe()[i]).collect();
                    let (key, canon) = canonical_form(&g.induced(&verts))?;
                    found.entry(key).or_insert(canon);
                }
            }
            ClassKind::Explicit(list) => {
                for s in list.iter().filter(|s| s.size() == n) {
                    let (key, canon) = canonical_form(s)?;
                    found.entry(key).or_insert(canon);
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    /// Membership up to isomorphism.
    pub fn contains(&self, s: &FinStructure) -> Result<bool> {
        if s.signature() != &self.signature || s.size() == 0 {
            return Ok(false);
        }
        match &self.kind {
            ClassKind::GraphsWithLoops => Ok(is_graph_with_loops(s)),
            ClassKind::LinearOrders => Ok(is_linear_order(s)),
            _ => {
                let key = canonical_form(s)?.0;
                Ok(self.keyed_members(s.size())?.iter().any(|(k, _)| *k == key))
            }
        }
    }
}

fn is_graph_with_loops(s: &FinStructure) -> bool {
    let rho = s.relation(0);
    s.universe().iter().all(|&v| rho.contains(&vec![v, v]))
        && rho.iter().all(|t| rho.contains(&vec![t[1], t[0]]))
}

fn is_linear_order(s: &FinStructure) -> bool {
    let le = s.relation(0);
    let u = s.universe();
    let holds = |a: Vertex, b: Vertex| le.contains(&vec![a, b]);
    for &a in u {
        if !holds(a, a) {
            return false;
        }
        for &b in u {
            if a != b && holds(a, b) == holds(b, a) {
                return false;
            }
            for &c in u {
                if holds(a, b) && holds(b, c) && !holds(a, c) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph_and_order_counts() {
        let g = generate_class(&ClassPresentation { kind: ClassKind::GraphsWithLoops, max_size: 2 }).unwrap();
        assert_eq!(g.len(), 3);
        let o = generate_class(&ClassPresentation { kind: ClassKind::LinearOrders, max_size: 2 }).unwrap();
        assert_eq!(o.len(), 2);
        // 1, 2, 4, 11 graphs on up to four vertices
        let g4 = generate_class(&ClassPresentation { kind: ClassKind::GraphsWithLoops, max_size: 4 }).unwrap();
        assert_eq!(g4.len(), 1 + 2 + 4 + 11);
    }

    #[test]
    fn membership_of_builtins() {
        let c = Class::graphs();
        assert!(c.contains(&FinStructure::graph_with_loops(3, &[(0, 2)]).unwrap()).unwrap());
        let no_loops = FinStructure::discrete(Signature::graph(), [0]);
        assert!(!c.contains(&no_loops).unwrap());
        assert!(Class::linear_orders().contains(&FinStructure::chain(4)).unwrap());
    }

    #[test]
    fn explicit_non_hereditary_detected() {
        let k2 = FinStructure::graph_with_loops(2, &[(0, 1)]).unwrap();
        let c = Class::new(ClassKind::Explicit(vec![k2.clone()])).unwrap();
        assert!(!c.is_hereditary().unwrap());
        let point = FinStructure::graph_with_loops(1, &[]).unwrap();
        let c = Class::new(ClassKind::Explicit(vec![k2, point])).unwrap();
        assert!(c.is_hereditary().unwrap());
    }
}
