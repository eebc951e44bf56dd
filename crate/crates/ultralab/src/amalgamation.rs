//! Bounded deciders for AP, JEP, AEP, HAP, V-valued AP and strict
//! (pushout) amalgamation over a class of finite structures.
//!
//! Amalgam candidates are class members `C` of growing size together with
//! every admissible pair of maps into `C`; the first hit in that order is the
//! witness. For hereditary classes a witness can always be cut down to the
//! substructure generated by the images, which gives a size past which the
//! search is complete and a negative answer becomes definitive.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{
    check_map, compose, search_maps, Class, FinStructure, MorphismKind, Vertex, VertexMap,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "AP")]
    Ap,
    #[serde(rename = "JEP")]
    Jep,
    #[serde(rename = "AEP")]
    Aep,
    #[serde(rename = "HAP")]
    Hap,
    #[serde(rename = "VVAP")]
    Vvap,
    #[serde(rename = "strict")]
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Yes,
    NoDefinitive,
    NoUpToBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Searched {
    #[serde(rename = "maxC")]
    pub max_c: usize,
    #[serde(rename = "maxT", skip_serializing_if = "Option::is_none", default)]
    pub max_t: Option<usize>,
}

/// Serialize vertex maps as lists of `[from, to]` pairs.
pub mod pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &VertexMap, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(Vertex, Vertex)> = m.iter().map(|(a, b)| (*a, *b)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<VertexMap, D::Error> {
        let v: Vec<(Vertex, Vertex)> = Vec::deserialize(d)?;
        let len = v.len();
        let m: VertexMap = v.into_iter().collect();
        if m.len() != len {
            return Err(serde::de::Error::custom("vertex map lists a source twice"));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMap(#[serde(with = "pairs")] pub VertexMap);

/// The completing diagram of a positive verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub structures: BTreeMap<String, FinStructure>,
    pub maps: BTreeMap<String, NamedMap>,
}

impl Witness {
    pub fn structure(&self, name: &str) -> &FinStructure {
        &self.structures[name]
    }

    pub fn map(&self, name: &str) -> &VertexMap {
        &self.maps[name].0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub outcome: Outcome,
    pub searched: Searched,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        self.outcome == Outcome::Yes
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    #[serde(rename = "A")]
    pub a: FinStructure,
    #[serde(rename = "B1")]
    pub b1: FinStructure,
    #[serde(rename = "B2")]
    pub b2: FinStructure,
    #[serde(with = "pairs")]
    pub f1: VertexMap,
    #[serde(with = "pairs")]
    pub f2: VertexMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AepInstance {
    #[serde(flatten)]
    pub span: Span,
    #[serde(rename = "T")]
    pub t: FinStructure,
    #[serde(with = "pairs")]
    pub h1: VertexMap,
    #[serde(with = "pairs")]
    pub h2: VertexMap,
}

/// Like a span, but `f2` need only be a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HapInstance {
    #[serde(flatten)]
    pub span: Span,
}

/// A span with homomorphisms of both legs into a fixed target `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VvapInstance {
    #[serde(flatten)]
    pub span: Span,
    #[serde(rename = "V")]
    pub v: FinStructure,
    #[serde(with = "pairs")]
    pub h1: VertexMap,
    #[serde(with = "pairs")]
    pub h2: VertexMap,
}

pub fn default_bound(b1: &FinStructure, b2: &FinStructure) -> usize {
    b1.size() + b2.size() + 2
}

fn require_member(class: &Class, s: &FinStructure, what: &str) -> Result<()> {
    if !class.contains(s)? {
        return Err(Error::input(format!("{what} is not a member of the {} class", class.name())));
    }
    Ok(())
}

fn require_map(src: &FinStructure, tgt: &FinStructure, m: &VertexMap, kind: MorphismKind, what: &str) -> Result<()> {
    if !check_map(src, tgt, m, kind)? {
        return Err(Error::input(format!("{what} is not a {kind:?}")));
    }
    Ok(())
}

fn check_span(class: &Class, span: &Span, f2_kind: MorphismKind) -> Result<()> {
    require_member(class, &span.a, "A")?;
    require_member(class, &span.b1, "B1")?;
    require_member(class, &span.b2, "B2")?;
    require_map(&span.a, &span.b1, &span.f1, MorphismKind::Embedding, "f1")?;
    require_map(&span.a, &span.b2, &span.f2, f2_kind, "f2")?;
    Ok(())
}

/// `pinned[f2(a)] = first(f1(a))`; `None` on a clash.
fn pin_through(a: &FinStructure, f1: &VertexMap, f2: &VertexMap, first: &VertexMap) -> Option<VertexMap> {
    let mut pinned = VertexMap::new();
    for v in a.universe() {
        let want = first[&f1[v]];
        match pinned.insert(f2[v], want) {
            Some(prev) if prev != want => return None,
            _ => {}
        }
    }
    Some(pinned)
}

fn to_map(s: &FinStructure, image: &[Vertex]) -> VertexMap {
    s.universe().iter().copied().zip(image.iter().copied()).collect()
}

fn complete(class: &Class, bound: usize, needed: usize) -> Result<bool> {
    if class.largest_member().is_some_and(|m| bound >= m) {
        return Ok(true);
    }
    Ok(bound >= needed && class.is_hereditary()?)
}

fn negative(property: Property, class: &Class, bound: usize, needed: usize, max_t: Option<usize>) -> Result<Verdict> {
    let outcome = if complete(class, bound, needed)? { Outcome::NoDefinitive } else { Outcome::NoUpToBound };
    Ok(Verdict { property, outcome, searched: Searched { max_c: bound, max_t }, witness: None })
}

/// Walks amalgam candidates `(C, g1, g2)` in canonical order: members by size
/// then canonical form, `g1: B1 -> C` of `kind1` lexicographically, then
/// `g2: B2 -> C` of `kind2` pinned by `g2 ∘ f2 = g1 ∘ f1`. `accept` may
/// return a finished witness.
#[allow(clippy::too_many_arguments)]
fn search_candidates(
    class: &Class,
    span: &Span,
    kind1: MorphismKind,
    kind2: MorphismKind,
    min_size: usize,
    bound: usize,
    mut accept: impl FnMut(&FinStructure, &VertexMap, &VertexMap) -> Result<Option<Witness>>,
) -> Result<Option<Witness>> {
    for n in min_size.max(1)..=bound {
        for c in class.members_of_size(n)?.iter() {
            let mut g1s = Vec::new();
            search_maps(&span.b1, c, kind1, &VertexMap::new(), |img| {
                g1s.push(to_map(&span.b1, img));
                true
            });
            for g1 in g1s {
                let Some(pinned) = pin_through(&span.a, &span.f1, &span.f2, &g1) else { continue };
                let mut result: Result<Option<Witness>> = Ok(None);
                search_maps(&span.b2, c, kind2, &pinned, |img| {
                    let g2 = to_map(&span.b2, img);
                    match accept(c, &g1, &g2) {
                        Ok(None) => true,
                        other => {
                            result = other;
                            false
                        }
                    }
                });
                if let Some(w) = result? {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

fn witness(structures: &[(&str, &FinStructure)], maps: &[(&str, &VertexMap)]) -> Witness {
    Witness {
        structures: structures.iter().map(|(n, s)| (n.to_string(), (*s).clone())).collect(),
        maps: maps.iter().map(|(n, m)| (n.to_string(), NamedMap((*m).clone()))).collect(),
    }
}

fn yes(property: Property, bound: usize, max_t: Option<usize>, w: Witness) -> Verdict {
    Verdict { property, outcome: Outcome::Yes, searched: Searched { max_c: bound, max_t }, witness: Some(w) }
}

/// Amalgamation: `C` with embeddings `kappa1`, `kappa2` and
/// `kappa1 ∘ f1 = kappa2 ∘ f2`.
pub fn check_ap(class: &Class, span: &Span, bound: usize) -> Result<Verdict> {
    check_span(class, span, MorphismKind::Embedding)?;
    let min = span.b1.size().max(span.b2.size());
    let found = search_candidates(class, span, MorphismKind::Embedding, MorphismKind::Embedding, min, bound, |c, g1, g2| {
        Ok(Some(witness(&[("C", c)], &[("kappa1", g1), ("kappa2", g2)])))
    })?;
    let needed = span.b1.size() + span.b2.size() - span.a.size();
    match found {
        Some(w) => Ok(yes(Property::Ap, bound, None, w)),
        None => negative(Property::Ap, class, bound, needed, None),
    }
}

/// Joint embedding: `C` with embeddings of both `a` and `b`.
pub fn check_jep(class: &Class, a: &FinStructure, b: &FinStructure, bound: usize) -> Result<Verdict> {
    require_member(class, a, "A")?;
    require_member(class, b, "B")?;
    for n in a.size().max(b.size())..=bound {
        for c in class.members_of_size(n)?.iter() {
            let mut e1 = None;
            search_maps(a, c, MorphismKind::Embedding, &VertexMap::new(), |img| {
                e1 = Some(to_map(a, img));
                false
            });
            let mut e2 = None;
            search_maps(b, c, MorphismKind::Embedding, &VertexMap::new(), |img| {
                e2 = Some(to_map(b, img));
                false
            });
            if let (Some(e1), Some(e2)) = (e1, e2) {
                return Ok(yes(Property::Jep, bound, None, witness(&[("C", c)], &[("e1", &e1), ("e2", &e2)])));
            }
        }
    }
    negative(Property::Jep, class, bound, a.size() + b.size(), None)
}

fn check_aep_instance(class: &Class, inst: &AepInstance) -> Result<()> {
    check_span(class, &inst.span, MorphismKind::Embedding)?;
    require_member(class, &inst.t, "T")?;
    require_map(&inst.span.b1, &inst.t, &inst.h1, MorphismKind::Hom, "h1")?;
    require_map(&inst.span.b2, &inst.t, &inst.h2, MorphismKind::Hom, "h2")?;
    if compose(&inst.span.f1, &inst.h1) != compose(&inst.span.f2, &inst.h2) {
        return Err(Error::input("h1 ∘ f1 differs from h2 ∘ f2"));
    }
    Ok(())
}

/// Pins `h` on the images of `g1`, `g2` so that `h ∘ gi = k ∘ hi`.
fn pin_h(g1: &VertexMap, g2: &VertexMap, h1: &VertexMap, h2: &VertexMap, k: &VertexMap) -> Option<VertexMap> {
    let mut pinned = VertexMap::new();
    for (g, h) in [(g1, h1), (g2, h2)] {
        for (b, c) in g {
            let want = k[&h[b]];
            match pinned.insert(*c, want) {
                Some(prev) if prev != want => return None,
                _ => {}
            }
        }
    }
    Some(pinned)
}

/// Amalgamated extension: `C` amalgamating the span, an extension
/// `k: T -> T'` and `h: C -> T'` with `h ∘ gi = k ∘ hi`. `T' = T` is tried
/// first against every candidate, then members of growing size.
pub fn check_aep(class: &Class, inst: &AepInstance, bound: usize) -> Result<Verdict> {
    check_aep_instance(class, inst)?;
    let span = &inst.span;
    let min = span.b1.size().max(span.b2.size());
    let try_targets = |targets: &[FinStructure]| {
        let extensions: Vec<(&FinStructure, Vec<VertexMap>)> = targets
            .iter()
            .map(|tp| (tp, crate::structure::enumerate_maps(&inst.t, tp, MorphismKind::Embedding)))
            .filter(|(_, ks)| !ks.is_empty())
            .collect();
        search_candidates(class, span, MorphismKind::Embedding, MorphismKind::Embedding, min, bound, |c, g1, g2| {
            for (tp, ks) in &extensions {
                for k in ks {
                    let Some(pinned) = pin_h(g1, g2, &inst.h1, &inst.h2, k) else { continue };
                    let mut h = None;
                    search_maps(c, tp, MorphismKind::Hom, &pinned, |img| {
                        h = Some(to_map(c, img));
                        false
                    });
                    if let Some(h) = h {
                        return Ok(Some(witness(
                            &[("C", c), ("T'", tp)],
                            &[("g1", g1), ("g2", g2), ("h", &h), ("k", k)],
                        )));
                    }
                }
            }
            Ok(None)
        })
    };
    let mut found = None;
    if inst.t.size() <= bound {
        found = try_targets(std::slice::from_ref(&inst.t))?;
    }
    let mut n = inst.t.size();
    while found.is_none() && n <= bound {
        found = try_targets(&class.members_of_size(n)?)?;
        n += 1;
    }
    let needed = (span.b1.size() + span.b2.size() - span.a.size()).max(inst.t.size());
    match found {
        Some(w) => Ok(yes(Property::Aep, bound, Some(bound), w)),
        None => negative(Property::Aep, class, bound, needed, Some(bound)),
    }
}

/// Homo-amalgamation: `g1: B1 -> C` a homomorphism, `g2: B2 -> C` an
/// embedding, `g1 ∘ f1 = g2 ∘ f2`, where `f2` is only a homomorphism.
pub fn check_hap(class: &Class, inst: &HapInstance, bound: usize) -> Result<Verdict> {
    let span = &inst.span;
    check_span(class, span, MorphismKind::Hom)?;
    let found = search_candidates(class, span, MorphismKind::Hom, MorphismKind::Embedding, span.b2.size(), bound, |c, g1, g2| {
        Ok(Some(witness(&[("C", c)], &[("g1", g1), ("g2", g2)])))
    })?;
    let image: std::collections::BTreeSet<_> = span.f2.values().collect();
    let needed = span.b1.size() + span.b2.size() - image.len();
    match found {
        Some(w) => Ok(yes(Property::Hap, bound, None, w)),
        None => negative(Property::Hap, class, bound, needed, None),
    }
}

/// V-valued amalgamation: an amalgam `C` and `h: C -> V` with `h ∘ gi = hi`.
pub fn check_vvap(class: &Class, inst: &VvapInstance, bound: usize) -> Result<Verdict> {
    let span = &inst.span;
    check_span(class, span, MorphismKind::Embedding)?;
    require_member(class, &inst.v, "V")?;
    require_map(&span.b1, &inst.v, &inst.h1, MorphismKind::Hom, "h1")?;
    require_map(&span.b2, &inst.v, &inst.h2, MorphismKind::Hom, "h2")?;
    if compose(&span.f1, &inst.h1) != compose(&span.f2, &inst.h2) {
        return Err(Error::input("h1 ∘ f1 differs from h2 ∘ f2"));
    }
    let id: VertexMap = inst.v.universe().iter().map(|&v| (v, v)).collect();
    let min = span.b1.size().max(span.b2.size());
    let found = search_candidates(class, span, MorphismKind::Embedding, MorphismKind::Embedding, min, bound, |c, g1, g2| {
        let Some(pinned) = pin_h(g1, g2, &inst.h1, &inst.h2, &id) else { return Ok(None) };
        let mut h = None;
        search_maps(c, &inst.v, MorphismKind::Hom, &pinned, |img| {
            h = Some(to_map(c, img));
            false
        });
        Ok(h.map(|h| witness(&[("C", c)], &[("g1", g1), ("g2", g2), ("h", &h)])))
    })?;
    let needed = span.b1.size() + span.b2.size() - span.a.size();
    match found {
        Some(w) => Ok(yes(Property::Vvap, bound, None, w)),
        None => negative(Property::Vvap, class, bound, needed, None),
    }
}

/// Number of `h: C -> X` with `h ∘ lambda = f`, `h ∘ nu = g`, capped at 2.
fn count_mediating(c: &FinStructure, x: &FinStructure, lambda: &VertexMap, nu: &VertexMap, f: &VertexMap, g: &VertexMap) -> usize {
    let id: VertexMap = x.universe().iter().map(|&v| (v, v)).collect();
    let Some(pinned) = pin_h(lambda, nu, f, g, &id) else { return 0 };
    let mut count = 0;
    search_maps(c, x, MorphismKind::Hom, &pinned, |_| {
        count += 1;
        count < 2
    });
    count
}

fn is_pushout(class: &Class, span: &Span, c: &FinStructure, lambda: &VertexMap, nu: &VertexMap, bound: usize) -> Result<bool> {
    for n in 1..=bound {
        for x in class.members_of_size(n)?.iter() {
            let mut fs = Vec::new();
            search_maps(&span.b1, x, MorphismKind::Hom, &VertexMap::new(), |img| {
                fs.push(to_map(&span.b1, img));
                true
            });
            for f in &fs {
                let Some(pinned) = pin_through(&span.a, &span.f1, &span.f2, f) else { continue };
                let mut ok = true;
                search_maps(&span.b2, x, MorphismKind::Hom, &pinned, |img| {
                    let g = to_map(&span.b2, img);
                    ok = count_mediating(c, x, lambda, nu, f, &g) == 1;
                    ok
                });
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Strict amalgamation: an amalgam `(C, lambda, nu)` that is a pushout
/// against every member `X` within the bound.
pub fn check_strict(class: &Class, span: &Span, bound: usize) -> Result<Verdict> {
    check_span(class, span, MorphismKind::Embedding)?;
    let min = span.b1.size().max(span.b2.size());
    let found = search_candidates(class, span, MorphismKind::Embedding, MorphismKind::Embedding, min, bound, |c, g1, g2| {
        if is_pushout(class, span, c, g1, g2, bound)? {
            Ok(Some(witness(&[("C", c)], &[("lambda", g1), ("nu", g2)])))
        } else {
            Ok(None)
        }
    })?;
    let needed = span.b1.size() + span.b2.size() - span.a.size();
    match found {
        Some(w) => Ok(yes(Property::Strict, bound, None, w)),
        None => negative(Property::Strict, class, bound, needed, None),
    }
}

/// All spans with `|B1|, |B2| <= max_b`, over class representatives and every
/// pair of embeddings.
pub fn spans(class: &Class, max_b: usize) -> Result<Vec<Span>> {
    let mut out = Vec::new();
    let mut reps = Vec::new();
    for n in 1..=max_b {
        reps.extend(class.members_of_size(n)?.iter().cloned());
    }
    for a in &reps {
        for b1 in reps.iter().filter(|b| b.size() >= a.size()) {
            let f1s = crate::structure::enumerate_maps(a, b1, MorphismKind::Embedding);
            if f1s.is_empty() {
                continue;
            }
            for b2 in reps.iter().filter(|b| b.size() >= a.size()) {
                let f2s = crate::structure::enumerate_maps(a, b2, MorphismKind::Embedding);
                for f1 in &f1s {
                    for f2 in &f2s {
                        out.push(Span { a: a.clone(), b1: b1.clone(), b2: b2.clone(), f1: f1.clone(), f2: f2.clone() });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All AEP instances over `spans(class, max_b)` and targets `T` with
/// `|T| <= max_t`.
pub fn aep_instances(class: &Class, max_b: usize, max_t: usize) -> Result<Vec<AepInstance>> {
    let mut targets = Vec::new();
    for n in 1..=max_t {
        targets.extend(class.members_of_size(n)?.iter().cloned());
    }
    let mut out = Vec::new();
    for span in spans(class, max_b)? {
        for t in &targets {
            for h1 in crate::structure::enumerate_maps(&span.b1, t, MorphismKind::Hom) {
                let Some(pinned) = pin_through(&span.a, &span.f1, &span.f2, &h1) else { continue };
                search_maps(&span.b2, t, MorphismKind::Hom, &pinned, |img| {
                    out.push(AepInstance {
                        span: span.clone(),
                        t: t.clone(),
                        h1: h1.clone(),
                        h2: to_map(&span.b2, img),
                    });
                    true
                });
            }
        }
    }
    Ok(out)
}

/// The structure Γ on `{1,2,3,4}`: unary `P = {2,4}`, `Q = {3,4}`, one
/// directed `rho` edge `(2,3)`, no loops.
pub fn gamma() -> FinStructure {
    let sig = crate::structure::Signature::from_pairs(&[("rho", 2), ("P", 1), ("Q", 1)]).unwrap();
    let mut rels = BTreeMap::new();
    rels.insert("rho".to_string(), vec![vec![2, 3]]);
    rels.insert("P".to_string(), vec![vec![2], vec![4]]);
    rels.insert("Q".to_string(), vec![vec![3], vec![4]]);
    FinStructure::new(sig, [1, 2, 3, 4], rels).unwrap()
}

/// The AEP instance over Age(Γ) with `A = ⟨1⟩`, `B1 = ⟨1,2⟩`, `B2 = ⟨1,3⟩`,
/// `T = ⟨4⟩` and the unique maps.
pub fn gamma_instance() -> AepInstance {
    let g = gamma();
    let a = g.induced(&[1]);
    let b1 = g.induced(&[1, 2]);
    let b2 = g.induced(&[1, 3]);
    let t = g.induced(&[4]);
    let id1: VertexMap = [(1, 1)].into_iter().collect();
    AepInstance {
        span: Span { a, b1, b2, f1: id1.clone(), f2: id1 },
        t,
        h1: [(1, 4), (2, 4)].into_iter().collect(),
        h2: [(1, 4), (3, 4)].into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> FinStructure {
        FinStructure::graph_with_loops(1, &[]).unwrap()
    }

    fn one_point_extensions() -> Span {
        let a = point();
        let e = FinStructure::graph_with_loops(2, &[(0, 1)]).unwrap();
        let f: VertexMap = [(0, 0)].into_iter().collect();
        Span { a, b1: e.clone(), b2: e, f1: f.clone(), f2: f }
    }

    #[test]
    fn graphs_amalgamate_two_extensions_of_a_point() {
        let v = check_ap(&Class::graphs(), &one_point_extensions(), 3).unwrap();
        assert!(v.is_yes());
        let w = v.witness.unwrap();
        let c = w.structure("C");
        assert!(c.size() <= 3);
    }

    #[test]
    fn gamma_fails_aep_definitively() {
        let class = Class::age_of(gamma()).unwrap();
        let v = check_aep(&class, &gamma_instance(), 4).unwrap();
        assert_eq!(v.outcome, Outcome::NoDefinitive);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"property":"AEP","outcome":"no-definitive","searched":{"maxC":4,"maxT":4},"witness":null}"#);
    }

    #[test]
    fn gamma_fails_aep_only_up_to_a_small_bound() {
        let class = Class::age_of(gamma()).unwrap();
        let v = check_aep(&class, &gamma_instance(), 2).unwrap();
        assert_eq!(v.outcome, Outcome::NoUpToBound);
    }

    #[test]
    fn ill_formed_aep_instance_is_an_input_error() {
        let class = Class::age_of(gamma()).unwrap();
        let mut inst = gamma_instance();
        inst.h2 = [(1, 4), (3, 4)].into_iter().collect();
        inst.h1 = [(1, 2), (2, 2)].into_iter().collect();
        assert!(check_aep(&class, &inst, 4).is_err());
    }

    #[test]
    fn jep_examples() {
        let v = check_jep(&Class::graphs(), &point(), &point(), 2).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.witness.unwrap().structure("C").size(), 1);
        let c1 = FinStructure::chain(1);
        let v = check_jep(&Class::linear_orders(), &c1, &c1, 2).unwrap();
        assert!(v.is_yes());
    }

    #[test]
    fn degenerate_span_amalgamates_in_a() {
        let a = FinStructure::graph_with_loops(2, &[(0, 1)]).unwrap();
        let id: VertexMap = [(0, 0), (1, 1)].into_iter().collect();
        let span = Span { a: a.clone(), b1: a.clone(), b2: a.clone(), f1: id.clone(), f2: id };
        let v = check_ap(&Class::graphs(), &span, 4).unwrap();
        assert_eq!(v.witness.unwrap().structure("C").size(), 2);
        let v = check_strict(&Class::graphs(), &span, 4).unwrap();
        assert!(v.is_yes());
    }

    #[test]
    fn hap_collapsing_edgeless_pair() {
        // A = edgeless pair, B1 = A, B2 = point, f2 collapses
        let a = FinStructure::graph_with_loops(2, &[]).unwrap();
        let f1: VertexMap = [(0, 0), (1, 1)].into_iter().collect();
        let f2: VertexMap = [(0, 0), (1, 0)].into_iter().collect();
        let span = Span { a: a.clone(), b1: a, b2: point(), f1, f2 };
        let v = check_hap(&Class::graphs(), &HapInstance { span }, 4).unwrap();
        assert!(v.is_yes());
    }

    #[test]
    fn vvap_constant_maps() {
        let span = one_point_extensions();
        let v = point();
        let h: VertexMap = [(0, 0), (1, 0)].into_iter().collect();
        let inst = VvapInstance { span, v, h1: h.clone(), h2: h };
        let verdict = check_vvap(&Class::graphs(), &inst, 4).unwrap();
        assert!(verdict.is_yes());
    }

    #[test]
    fn free_amalgam_is_a_pushout_for_graphs() {
        let v = check_strict(&Class::graphs(), &one_point_extensions(), 4).unwrap();
        assert!(v.is_yes());
    }
}
