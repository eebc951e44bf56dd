use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FinStructure, Vertex};
use crate::error::{Error, Result};

pub type VertexMap = BTreeMap<Vertex, Vertex>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphismKind {
    Hom,
    Embedding,
    Iso,
}

impl MorphismKind {
    fn injective(self) -> bool {
        !matches!(self, MorphismKind::Hom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: FinStructure,
    pub target: FinStructure,
    pub map: VertexMap,
}

impl Morphism {
    pub fn apply(&self, v: Vertex) -> Option<Vertex> {
        self.map.get(&v).copied()
    }
}

pub fn identity_map(s: &FinStructure) -> VertexMap {
    s.universe().iter().map(|&v| (v, v)).collect()
}

/// `g ∘ f`, defined where both steps are.
pub fn compose(f: &VertexMap, g: &VertexMap) -> VertexMap {
    f.iter().filter_map(|(a, b)| g.get(b).map(|c| (*a, *c))).collect()
}

pub fn is_morphism(f: &Morphism, kind: MorphismKind) -> Result<bool> {
    check_map(&f.source, &f.target, &f.map, kind)
}

/// Checks the laws of `kind` for `map: source -> target`.
///
/// A map that is not total on the source, or leaves the target universe, is a
/// validation error rather than a `false`.
pub fn check_map(
    source: &FinStructure,
    target: &FinStructure,
    map: &VertexMap,
    kind: MorphismKind,
) -> Result<bool> {
    if source.signature() != target.signature() {
        return Err(Error::input("source and target signatures differ"));
    }
    for v in source.universe() {
        match map.get(v) {
            None => return Err(Error::input(format!("map is not defined on {v}"))),
            Some(w) if !target.contains(*w) => {
                return Err(Error::input(format!("map sends {v} to {w} outside the target")))
            }
            _ => {}
        }
    }
    if map.keys().any(|k| !source.contains(*k)) {
        return Err(Error::input("map is defined outside the source universe"));
    }
    if kind.injective() {
        let mut seen: Vec<Vertex> = map.values().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != map.len() {
            return Ok(false);
        }
    }
    if kind == MorphismKind::Iso && source.size() != target.size() {
        return Ok(false);
    }
    let sig = source.signature();
    for rel in 0..sig.len() {
        for t in source.relation(rel) {
            let image: Vec<Vertex> = t.iter().map(|v| map[v]).collect();
            if !target.holds(rel, &image) {
                return Ok(false);
            }
        }
        if kind.injective() {
            // reflection: every target tuple over the image comes from a source tuple
            let back: BTreeMap<Vertex, Vertex> = map.iter().map(|(a, b)| (*b, *a)).collect();
            for t in target.relation(rel) {
                if let Some(pre) = t.iter().map(|w| back.get(w).copied()).collect::<Option<Vec<_>>>() {
                    if !source.holds(rel, &pre) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

struct Plan {
    /// per source position k: tuples (relation, positions) whose largest position is k
    checks: Vec<Vec<(usize, Vec<usize>)>>,
}

fn plan(source: &FinStructure) -> Plan {
    let mut checks = vec![Vec::new(); source.size()];
    for rel in 0..source.signature().len() {
        for t in source.relation(rel) {
            let pos: Vec<usize> = t.iter().map(|v| source.position(*v).unwrap()).collect();
            let k = *pos.iter().max().unwrap();
            checks[k].push((rel, pos));
        }
    }
    Plan { checks }
}

/// Depth-first search over maps `source -> target` of the given kind, in
/// lexicographic order of the image tuple (indexed by the sorted source
/// universe). `fixed` pins some images. `visit` receives each complete map
/// and returns `false` to stop the search.
pub fn search_maps(
    source: &FinStructure,
    target: &FinStructure,
    kind: MorphismKind,
    fixed: &VertexMap,
    mut visit: impl FnMut(&[Vertex]) -> bool,
) {
    if source.signature() != target.signature() {
        return;
    }
    if kind == MorphismKind::Iso && source.size() != target.size() {
        return;
    }
    if kind.injective() && source.size() > target.size() {
        return;
    }
    let plan = plan(source);
    let mut image: Vec<Vertex> = Vec::with_capacity(source.size());
    let mut used: Vec<bool> = vec![false; target.size()];
    let mut scratch = Scratch::default();
    search_rec(source, target, kind, fixed, &plan, &mut image, &mut used, &mut scratch, &mut visit);
}

/// Buffers reused by every consistency check of one search.
#[derive(Default)]
struct Scratch {
    img: Vec<Vertex>,
    pre: Vec<Vertex>,
    idx: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
fn search_rec(
    source: &FinStructure,
    target: &FinStructure,
    kind: MorphismKind,
    fixed: &VertexMap,
    plan: &Plan,
    image: &mut Vec<Vertex>,
    used: &mut Vec<bool>,
    scratch: &mut Scratch,
    visit: &mut impl FnMut(&[Vertex]) -> bool,
) -> bool {
    let k = image.len();
    if k == source.size() {
        return visit(image);
    }
    let pinned = fixed.get(&source.universe()[k]).copied();
    for (ti, &w) in target.universe().iter().enumerate() {
        if let Some(p) = pinned {
            if p != w {
                continue;
            }
        }
        if kind.injective() && used[ti] {
            continue;
        }
        image.push(w);
        if consistent(source, target, kind, plan, image, scratch) {
            used[ti] = true;
            let go_on = search_rec(source, target, kind, fixed, plan, image, used, scratch, visit);
            used[ti] = false;
            if !go_on {
                image.pop();
                return false;
            }
        }
        image.pop();
    }
    true
}

fn consistent(
    source: &FinStructure,
    target: &FinStructure,
    kind: MorphismKind,
    plan: &Plan,
    image: &[Vertex],
    scratch: &mut Scratch,
) -> bool {
    let k = image.len() - 1;
    let Scratch { img, pre, idx } = scratch;
    for (rel, pos) in &plan.checks[k] {
        img.clear();
        img.extend(pos.iter().map(|&p| image[p]));
        if !target.holds(*rel, img) {
            return false;
        }
    }
    if kind.injective() {
        // reflection, checked on every tuple over positions 0..=k that mentions k
        let sig = source.signature();
        let base = k + 1;
        for rel in 0..sig.len() {
            let ar = sig.arity(rel);
            let total = base.pow(ar as u32);
            idx.clear();
            idx.resize(ar, 0);
            for code in 0..total {
                let mut c = code;
                for slot in idx.iter_mut() {
                    *slot = c % base;
                    c /= base;
                }
                if !idx.contains(&k) {
                    continue;
                }
                img.clear();
                img.extend(idx.iter().map(|&p| image[p]));
                if target.holds(rel, img) {
                    pre.clear();
                    pre.extend(idx.iter().map(|&p| source.universe()[p]));
                    if !source.holds(rel, pre) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn to_map(source: &FinStructure, image: &[Vertex]) -> VertexMap {
    source.universe().iter().copied().zip(image.iter().copied()).collect()
}

/// All maps of the kind, in canonical order.
pub fn enumerate_maps(a: &FinStructure, b: &FinStructure, kind: MorphismKind) -> Vec<VertexMap> {
    let mut out = Vec::new();
    search_maps(a, b, kind, &VertexMap::new(), |img| {
        out.push(to_map(a, img));
        true
    });
    out
}

pub fn enumerate_morphisms(a: &FinStructure, b: &FinStructure, kind: MorphismKind) -> Vec<Morphism> {
    enumerate_maps(a, b, kind)
        .into_iter()
        .map(|map| Morphism { source: a.clone(), target: b.clone(), map })
        .collect()
}

/// The canonically least isomorphism, if any.
pub fn find_isomorphism(a: &FinStructure, b: &FinStructure) -> Option<Morphism> {
    let mut found = None;
    search_maps(a, b, MorphismKind::Iso, &VertexMap::new(), |img| {
        found = Some(to_map(a, img));
        false
    });
    found.map(|map| Morphism { source: a.clone(), target: b.clone(), map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{FinStructure, Signature};

    fn loops_only(n: u64) -> FinStructure {
        FinStructure::graph_with_loops(n, &[]).unwrap()
    }

    #[test]
    fn collapse_is_hom_not_embedding() {
        let a = loops_only(2);
        let b = loops_only(1);
        let map: VertexMap = [(0, 0), (1, 0)].into_iter().collect();
        assert!(check_map(&a, &b, &map, MorphismKind::Hom).unwrap());
        assert!(!check_map(&a, &b, &map, MorphismKind::Embedding).unwrap());
    }

    #[test]
    fn malformed_map_is_an_error() {
        let a = loops_only(2);
        let map: VertexMap = [(0, 0), (1, 9)].into_iter().collect();
        assert!(check_map(&a, &a, &map, MorphismKind::Hom).is_err());
        let partial: VertexMap = [(0, 0)].into_iter().collect();
        assert!(check_map(&a, &a, &partial, MorphismKind::Hom).is_err());
    }

    #[test]
    fn point_into_two_points_in_order() {
        let a = loops_only(1);
        let b = loops_only(2);
        let maps = enumerate_maps(&a, &b, MorphismKind::Hom);
        assert_eq!(maps, vec![[(0, 0)].into_iter().collect(), [(0, 1)].into_iter().collect()]);
    }

    #[test]
    fn k2_has_identity_and_swap() {
        let k2 = FinStructure::graph_with_loops(2, &[(0, 1)]).unwrap();
        let isos = enumerate_maps(&k2, &k2, MorphismKind::Iso);
        assert_eq!(isos.len(), 2);
        assert_eq!(isos[0], identity_map(&k2));
    }

    #[test]
    fn loopless_pair_does_not_embed_into_looped_k2() {
        let pair = FinStructure::discrete(Signature::graph(), [0, 1]);
        let k2 = FinStructure::graph_with_loops(2, &[(0, 1)]).unwrap();
        assert!(enumerate_maps(&pair, &k2, MorphismKind::Embedding).is_empty());
        assert_eq!(enumerate_maps(&pair, &k2, MorphismKind::Hom).len(), 4);
    }

    #[test]
    fn path_relabelings() {
        let p = FinStructure::graph_with_loops(3, &[(0, 1), (1, 2)]).unwrap();
        let q = FinStructure::graph_with_loops(3, &[(0, 2), (2, 1)]).unwrap();
        let iso = find_isomorphism(&p, &q).unwrap();
        assert_eq!(iso.map, [(0, 0), (1, 2), (2, 1)].into_iter().collect());
        let edgeless = loops_only(2);
        let k2 = FinStructure::graph_with_loops(2, &[(0, 1)]).unwrap();
        assert!(find_isomorphism(&edgeless, &k2).is_none());
    }
}
