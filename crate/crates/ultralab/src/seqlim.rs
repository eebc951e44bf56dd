//! The Seq/Lim adjunction at finite depth.
//!
//! `Seq` sends an ultrametric structure to the cochain of its quotients by
//! `≈_i` (agreement through level `i`); `Lim` sends a cochain to its branch
//! space. For a finite cochain `c`, `Seq(Lim c)` at level `i` has one class
//! per level-`i` vertex that lies under some level-`depth` vertex, named by
//! its prefix. The unit `η` sends a branch to its class sequence and the
//! counit `ε` sends a class to its projection.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{distance, reachable, rel_value_lower, Branch, FiniteCochain, LevelSystem};
use crate::error::{Error, Result};
use crate::level::Level;
use crate::structure::{check_map, FinStructure, MorphismKind, Vertex, VertexMap};

#[derive(Clone, Debug, Serialize)]
pub struct QuotientClass {
    pub name: String,
    /// The level-`i` vertex all members project to.
    pub vertex: Vertex,
    pub prefix: Vec<Vertex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientStructure {
    pub level: usize,
    pub classes: Vec<QuotientClass>,
    /// The quotient itself, on the class vertices.
    pub structure: FinStructure,
}

fn prefix_of(c: &FiniteCochain, i: usize, v: Vertex) -> Result<Vec<Vertex>> {
    let mut p = vec![v];
    for level in (0..i).rev() {
        let down = c.bond(level, p.last().unwrap())?;
        p.push(down);
    }
    p.reverse();
    Ok(p)
}

pub fn class_name(i: usize, prefix: &[Vertex]) -> String {
    let parts: Vec<String> = prefix.iter().map(|v| v.to_string()).collect();
    format!("q{i}:{}", parts.join(","))
}

/// The level-`i` quotient of `Lim c` computed at horizon `depth`.
///
/// A class tuple is related when some tuple of representatives has lower
/// relation value below `Val(i)`, i.e. is related at every level `<= i`;
/// the projections of representatives through level `i` are fixed by the
/// class, so this is evaluated on those prefixes.
pub fn seq_quotient(c: &FiniteCochain, i: usize, depth: usize) -> Result<QuotientStructure> {
    if i > depth {
        return Err(Error::input(format!("level {i} is past the horizon {depth}")));
    }
    let vertices = reachable(c, i, depth)?.expect("finite cochain");
    let mut classes = Vec::new();
    for &v in &vertices {
        let prefix = prefix_of(c, i, v)?;
        classes.push(QuotientClass { name: class_name(i, &prefix), vertex: v, prefix });
    }
    let sig = c.signature().clone();
    let mut s = FinStructure::discrete(sig.clone(), vertices.iter().copied());
    let verts: Vec<Vertex> = vertices.into_iter().collect();
    for rel in 0..sig.len() {
        crate::cochain::for_each_tuple(&verts, sig.arity(rel), &mut |t| {
            let prefixes = t.iter().map(|&v| prefix_of(c, i, v)).collect::<Result<Vec<_>>>()?;
            let mut related = true;
            for level in 0..=i {
                let proj: Vec<Vertex> = prefixes.iter().map(|p| p[level]).collect();
                if !c.holds(level, rel, &proj)? {
                    related = false;
                    break;
                }
            }
            if related {
                s.insert(rel, t.to_vec())?;
            }
            Ok(true)
        })?;
    }
    Ok(QuotientStructure { level: i, classes, structure: s })
}

/// `Seq(Lim c)` through `depth` as a cochain, with bonds
/// `[x]_{i+1} ↦ [x]_i`.
pub fn seq_cochain(c: &FiniteCochain, depth: usize) -> Result<FiniteCochain> {
    let quotients = (0..=depth).map(|i| seq_quotient(c, i, depth)).collect::<Result<Vec<_>>>()?;
    let mut bonds = Vec::new();
    for i in 0..depth {
        let b: VertexMap = quotients[i + 1]
            .structure
            .universe()
            .iter()
            .map(|&v| Ok((v, c.bond(i, &v)?)))
            .collect::<Result<_>>()?;
        bonds.push(b);
    }
    let levels = quotients.into_iter().map(|q| q.structure).collect();
    FiniteCochain::new(levels, bonds, None)
}

/// `ε_i([x]_i) = x_i`.
pub fn epsilon_apply(c: &FiniteCochain, i: usize, class: Vertex, depth: usize) -> Result<Vertex> {
    let q = seq_quotient(c, i, depth)?;
    if !q.structure.contains(class) {
        return Err(Error::input(format!("{class} is not a class of the level-{i} quotient")));
    }
    Ok(class)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonVerdict {
    pub level: usize,
    pub classes: usize,
    pub vertices: usize,
    pub embedding: bool,
    pub iso: bool,
}

/// Per level: is `ε_i` an embedding, and is it an isomorphism?
pub fn epsilon_is_iso(c: &FiniteCochain, depth: usize) -> Result<Vec<EpsilonVerdict>> {
    let mut out = Vec::new();
    for i in 0..=depth {
        let q = seq_quotient(c, i, depth)?;
        let target = c.level(i)?;
        let eps: VertexMap = q.structure.universe().iter().map(|&v| (v, v)).collect();
        let embedding = check_map(&q.structure, target, &eps, MorphismKind::Embedding)?;
        let iso = embedding && q.structure.size() == target.size();
        out.push(EpsilonVerdict { level: i, classes: q.structure.size(), vertices: target.size(), embedding, iso });
    }
    Ok(out)
}

/// `η(x) = ([x]_i)_i` as a branch of `Seq(Lim c)`.
pub fn eta_apply(seq: &Arc<FiniteCochain>, x: &Branch<FiniteCochain>, depth: usize) -> Result<Branch<FiniteCochain>> {
    Branch::new(seq.clone(), x.prefix_to(depth)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaReport {
    pub injective: bool,
    pub isometric: bool,
    pub relations_preserved: bool,
    pub surjective: bool,
    pub pairs_checked: usize,
}

impl EtaReport {
    pub fn pass(&self) -> bool {
        self.injective && self.isometric && self.relations_preserved && self.surjective
    }
}

/// Checks that `η` is injective and isometric on the samples, preserves
/// relation values on sampled pairs, and hits every class sequence that is
/// realized through `depth`.
pub fn eta_check(c: &Arc<FiniteCochain>, samples: &[Branch<FiniteCochain>], depth: usize) -> Result<EtaReport> {
    let seq = Arc::new(seq_cochain(c, depth)?);
    let images = samples.iter().map(|x| eta_apply(&seq, x, depth)).collect::<Result<Vec<_>>>()?;
    let mut injective = true;
    let mut isometric = true;
    let mut relations_preserved = true;
    let mut pairs = 0;
    for a in 0..samples.len() {
        for b in 0..samples.len() {
            pairs += 1;
            let (x, y) = (&samples[a], &samples[b]);
            let (ex, ey) = (&images[a], &images[b]);
            if x.prefix_to(depth)? != y.prefix_to(depth)? && ex.prefix_to(depth)? == ey.prefix_to(depth)? {
                injective = false;
            }
            if distance(x, y, depth)? != distance(ex, ey, depth)? {
                isometric = false;
            }
            for rel in 0..c.signature().len() {
                if c.signature().arity(rel) != 2 {
                    continue;
                }
                let before = rel_value_lower(rel, &[x.clone(), y.clone()], depth)?;
                let after = rel_value_lower(rel, &[ex.clone(), ey.clone()], depth)?;
                if before != after {
                    relations_preserved = false;
                }
            }
        }
    }
    let mut surjective = true;
    for v in seq.level(depth)?.universe() {
        let p = prefix_of(&seq, depth, *v)?;
        let x = Branch::new(c.clone(), p.clone())?;
        if eta_apply(&seq, &x, depth)?.prefix_to(depth)? != p {
            surjective = false;
        }
    }
    Ok(EtaReport { injective, isometric, relations_preserved, surjective, pairs_checked: pairs })
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    /// `Lim(ε) ∘ η = id` on each sample.
    pub lim_side: Vec<bool>,
    /// `ε_Seq ∘ Seq(η) = id` on each (level, class) reached by the samples.
    pub seq_side: Vec<(usize, Vertex, bool)>,
}

impl TriangleReport {
    pub fn pass(&self) -> bool {
        self.lim_side.iter().all(|&b| b) && self.seq_side.iter().all(|&(_, _, b)| b)
    }
}

/// Some branch through `depth` whose level-`i` coordinate is `v`, found
/// by walking least reachable preimages.
fn representative(c: &Arc<FiniteCochain>, i: usize, v: Vertex, depth: usize) -> Result<Branch<FiniteCochain>> {
    let mut p = prefix_of(c, i, v)?;
    for level in i..depth {
        let up = reachable(&**c, level + 1, depth)?.expect("finite cochain");
        let cur = *p.last().unwrap();
        let next = c
            .fiber(level, &cur)?
            .unwrap()
            .into_iter()
            .find(|u| up.contains(u))
            .ok_or_else(|| Error::input(format!("{cur} at level {level} does not reach depth {depth}")))?;
        p.push(next);
    }
    Branch::new(c.clone(), p)
}

/// Element-chases both triangle identities through `depth`.
pub fn check_triangle_identities(
    c: &Arc<FiniteCochain>,
    samples: &[Branch<FiniteCochain>],
    depth: usize,
) -> Result<TriangleReport> {
    let seq = Arc::new(seq_cochain(c, depth)?);
    let seq2 = Arc::new(seq_cochain(&seq, depth)?);
    let mut lim_side = Vec::new();
    for x in samples {
        let eta = eta_apply(&seq, x, depth)?;
        // Lim(ε): apply ε_i coordinatewise
        let back: Vec<Vertex> = (0..=depth)
            .map(|i| epsilon_apply(c, i, eta.at(i)?, depth))
            .collect::<Result<_>>()?;
        lim_side.push(back == x.prefix_to(depth)?);
    }
    let mut seen = BTreeSet::new();
    for x in samples {
        for i in 0..=depth {
            seen.insert((i, x.at(i)?));
        }
    }
    let mut seq_side = Vec::new();
    for (i, class) in seen {
        let rep = representative(c, i, class, depth)?;
        // Seq(η)[x]_i = [η x]_i, a class of Seq(Lim(Seq(Lim c)))
        let eta_rep = eta_apply(&seq, &rep, depth)?;
        let lifted = eta_apply(&seq2, &eta_rep, depth)?.at(i)?;
        let back = epsilon_apply(&seq, i, lifted, depth)?;
        seq_side.push((i, class, back == class));
    }
    Ok(TriangleReport { lim_side, seq_side })
}

/// A natural transformation between finite cochains: `h_i: A_i -> B_i` with
/// `h_i ∘ α_i = β_i ∘ h_{i+1}`.
#[derive(Clone, Debug)]
pub struct CochainMap {
    pub source: Arc<FiniteCochain>,
    pub target: Arc<FiniteCochain>,
    pub levels: Vec<VertexMap>,
}

impl CochainMap {
    pub fn new(source: Arc<FiniteCochain>, target: Arc<FiniteCochain>, levels: Vec<VertexMap>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::input("a cochain map needs at least one level"));
        }
        for (i, h) in levels.iter().enumerate() {
            if !check_map(source.level(i)?, target.level(i)?, h, MorphismKind::Hom)? {
                return Err(Error::input(format!("h_{i} is not a homomorphism")));
            }
        }
        for i in 0..levels.len() - 1 {
            for &v in source.level(i + 1)?.universe() {
                let left = levels[i][&source.bond(i, &v)?];
                let right = target.bond(i, &levels[i + 1][&v])?;
                if left != right {
                    return Err(Error::input(format!(
                        "naturality square {i}<-{} fails at {v}: {left} vs {right}",
                        i + 1
                    )));
                }
            }
        }
        Ok(CochainMap { source, target, levels })
    }

    pub fn identity(c: Arc<FiniteCochain>, depth: usize) -> Result<Self> {
        let levels = (0..=depth)
            .map(|i| Ok(c.level(i)?.universe().iter().map(|&v| (v, v)).collect()))
            .collect::<Result<Vec<_>>>()?;
        CochainMap::new(c.clone(), c, levels)
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_embedding(&self) -> Result<bool> {
        for (i, h) in self.levels.iter().enumerate() {
            if !check_map(self.source.level(i)?, self.target.level(i)?, h, MorphismKind::Embedding)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(x_i) ↦ (h_i(x_i))`, explicit through the depth of the map.
pub fn lim_map(m: &CochainMap, x: &Branch<FiniteCochain>) -> Result<Branch<FiniteCochain>> {
    if !Arc::ptr_eq(x.system(), &m.source) {
        return Err(Error::input("branch is not over the source cochain"));
    }
    let p = x.prefix_to(m.depth())?;
    let image = p.iter().enumerate().map(|(i, v)| m.levels[i][v]).collect();
    Branch::new(m.target.clone(), image)
}

/// The level map `[a]_i ↦ [h(a)]_i` induced by a branch map, read off the
/// samples. Fails with a witness pair if `h` is not 1-Lipschitz on the
/// samples or the level map is not well defined.
pub fn seq_of_map<F>(h: F, samples: &[Branch<FiniteCochain>], i: usize, depth: usize) -> Result<VertexMap>
where
    F: Fn(&Branch<FiniteCochain>) -> Result<Branch<FiniteCochain>>,
{
    let images = samples.iter().map(&h).collect::<Result<Vec<_>>>()?;
    for a in 0..samples.len() {
        for b in a + 1..samples.len() {
            let before = distance(&samples[a], &samples[b], depth)?;
            let after = distance(&images[a], &images[b], depth)?;
            if after > before {
                return Err(Error::input(format!(
                    "map is not 1-Lipschitz on samples {a} and {b}: {before} becomes {after}"
                )));
            }
        }
    }
    let mut map = VertexMap::new();
    for (a, (x, y)) in samples.iter().zip(&images).enumerate() {
        let (from, to) = (x.at(i)?, y.at(i)?);
        if let Some(prev) = map.insert(from, to) {
            if prev != to {
                return Err(Error::input(format!("level-{i} class {from} has two images ({prev}, {to}); see sample {a}")));
            }
        }
    }
    Ok(map)
}

/// Distances never grow under `lim_map`; for embeddings they are kept.
pub fn lipschitz_holds(m: &CochainMap, x: &Branch<FiniteCochain>, y: &Branch<FiniteCochain>) -> Result<bool> {
    let d = m.depth();
    let before = distance(x, y, d)?;
    let after = distance(&lim_map(m, x)?, &lim_map(m, y)?, d)?;
    Ok(after <= before && (after == before || !m.is_embedding()? || before == Level::Zero))
}

/// Random branches of a finite cochain: a uniformly chosen top vertex
/// projected down.
pub fn random_branches<R: rand::Rng>(rng: &mut R, c: &Arc<FiniteCochain>, depth: usize, n: usize) -> Result<Vec<Branch<FiniteCochain>>> {
    let top = c.level(depth)?.universe().to_vec();
    (0..n)
        .map(|_| {
            let v = top[rng.gen_range(0..top.len())];
            Branch::new(c.clone(), prefix_of(c, depth, v)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn non_surjective_example() {
        let c = FiniteCochain::non_surjective_example();
        let q = seq_quotient(&c, 0, 3).unwrap();
        assert_eq!(q.classes.len(), 1);
        assert_eq!(q.classes[0].name, "q0:0");
        let v = epsilon_is_iso(&c, 3).unwrap();
        assert!(v[0].embedding && !v[0].iso);
        assert!(v[1..].iter().all(|l| l.iso));
        assert!(epsilon_apply(&c, 0, 1, 3).is_err());
    }

    #[test]
    fn one_point_cochain() {
        let c = Arc::new(FiniteCochain::one_point());
        for i in 0..4 {
            assert_eq!(seq_quotient(&c, i, 4).unwrap().classes.len(), 1);
        }
        assert!(epsilon_is_iso(&c, 4).unwrap().iter().all(|l| l.iso));
        let x = Branch::new(c.clone(), vec![0]).unwrap();
        assert!(check_triangle_identities(&c, &[x.clone()], 4).unwrap().pass());
        assert!(eta_check(&c, &[x], 4).unwrap().pass());
    }

    #[test]
    fn random_cochains_match_surjectivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for surjective in [true, false] {
            for _ in 0..5 {
                let c = Arc::new(FiniteCochain::random(&mut rng, 4, 4, surjective));
                let all_iso = epsilon_is_iso(&c, 4).unwrap().iter().all(|l| l.iso && l.embedding);
                assert_eq!(all_iso, surjective);
                let samples = random_branches(&mut rng, &c, 4, 20).unwrap();
                assert!(check_triangle_identities(&c, &samples, 4).unwrap().pass());
                assert!(eta_check(&c, &samples, 4).unwrap().pass());
            }
        }
    }

    #[test]
    fn cochain_maps() {
        let c = Arc::new(FiniteCochain::k2_example().truncated(3).unwrap());
        let id = CochainMap::identity(c.clone(), 3).unwrap();
        let x = Branch::new(c.clone(), vec![0]).unwrap();
        let y = Branch::new(c.clone(), vec![1]).unwrap();
        assert_eq!(lim_map(&id, &x).unwrap().prefix_to(3).unwrap(), x.prefix_to(3).unwrap());
        assert!(lipschitz_holds(&id, &x, &y).unwrap());
        // collapse everything to 0 in a one-point-per-level target
        let pt = Arc::new(FiniteCochain::constant(FinStructure::graph_with_loops(1, &[]).unwrap()).truncated(3).unwrap());
        let collapse: Vec<VertexMap> = (0..=3).map(|_| [(0, 0), (1, 0)].into_iter().collect()).collect();
        let m = CochainMap::new(c.clone(), pt, collapse).unwrap();
        assert_eq!(distance(&lim_map(&m, &x).unwrap(), &lim_map(&m, &y).unwrap(), 3).unwrap(), Level::Zero);
        assert!(lipschitz_holds(&m, &x, &y).unwrap());
        let lvl = seq_of_map(|b| lim_map(&id, b), &[x, y], 1, 3).unwrap();
        assert_eq!(lvl, [(0, 0), (1, 1)].into_iter().collect());
    }

    #[test]
    fn naturality_violation_is_reported() {
        let c = Arc::new(FiniteCochain::non_surjective_example().truncated(2).unwrap());
        let bad = vec![
            [(0, 1), (1, 1)].into_iter().collect(),
            [(0, 0)].into_iter().collect(),
            [(0, 0)].into_iter().collect(),
        ];
        let e = CochainMap::new(c.clone(), c, bad).unwrap_err();
        assert!(e.to_string().contains("naturality square 0<-1"));
    }
}
