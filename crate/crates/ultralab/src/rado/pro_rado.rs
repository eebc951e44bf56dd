//! The pro-finite Rado graph: every level is the standard Rado graph on
//! hereditarily finite sets, every bond is `Ω`, canonical extension is `σ`.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hf::Hf;
use super::standard::{omega, section, small_preimages, witness, witness_recipe, SCAN_LIMIT};
use crate::cochain::{distance, rel_value_lower, Branch, LevelSystem};
use crate::error::{Error, Result};
use crate::level::Level;
use crate::structure::Signature;

#[derive(Debug)]
pub struct ProRado {
    signature: Signature,
}

/// The shared pro-Rado cochain. Branches compare cochains by identity, so
/// everything built from this handle is mutually comparable.
pub fn pro_rado() -> Arc<ProRado> {
    static P: OnceLock<Arc<ProRado>> = OnceLock::new();
    P.get_or_init(|| Arc::new(ProRado { signature: Signature::graph() })).clone()
}

impl LevelSystem for ProRado {
    type V = Hf;

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn stored_depth(&self) -> Option<usize> {
        None
    }

    fn contains(&self, _level: usize, _v: &Hf) -> Result<bool> {
        Ok(true)
    }

    fn bond(&self, _level: usize, v: &Hf) -> Result<Hf> {
        Ok(omega(v))
    }

    fn extend(&self, _level: usize, v: &Hf) -> Result<Hf> {
        Ok(section(v))
    }

    fn holds(&self, _level: usize, rel: usize, tuple: &[Hf]) -> Result<bool> {
        debug_assert_eq!(rel, 0);
        Ok(tuple[0].adjacent(&tuple[1]))
    }

    fn level_vertices(&self, _level: usize) -> Result<Option<Vec<Hf>>> {
        Ok(None)
    }

    fn fiber(&self, _level: usize, _v: &Hf) -> Result<Option<Vec<Hf>>> {
        Ok(None)
    }

    /// An edge `u ~ v` lifts to `σ(u) ~ w` with `w` a witness over `v`.
    fn lifts_certified_from(&self) -> Option<usize> {
        Some(0)
    }

    /// `σ` preserves membership and equality.
    fn canonical_preserves_from(&self) -> Option<usize> {
        Some(0)
    }

    fn some_related(&self, _level: usize, _rel: usize) -> Result<Option<Vec<Hf>>> {
        Ok(Some(vec![Hf::empty(), Hf::empty()]))
    }

    fn sample_vertices(&self, _level: usize, n: usize) -> Result<Vec<Hf>> {
        Ok((0..n as u64).map(Hf::from_u64).collect())
    }

    fn describe(&self) -> String {
        "pro-Rado cochain".to_string()
    }
}

pub type RadoBranch = Branch<ProRado>;

pub fn branch(prefix: Vec<Hf>) -> Result<RadoBranch> {
    Branch::new(pro_rado(), prefix)
}

pub fn branch_u64(prefix: &[u64]) -> Result<RadoBranch> {
    branch(prefix.iter().map(|&n| Hf::from_u64(n)).collect())
}

/// Preimages `x ~ y` of an edge `u ~ v`: the certificate behind
/// [`ProRado::lifts_certified_from`].
pub fn lift_edge(u: &Hf, v: &Hf) -> Result<(Hf, Hf)> {
    if !u.adjacent(v) {
        return Err(Error::input(format!("{u} and {v} are not adjacent")));
    }
    let x = section(u);
    if u == v {
        return Ok((x.clone(), x));
    }
    let y = witness(std::slice::from_ref(&x), &[], v, &[])?;
    Ok((x, y))
}

/// A random element of the fiber over `c`, different from `not`.
pub fn random_preimage<R: Rng>(rng: &mut R, c: &Hf, not: Option<&Hf>) -> Hf {
    if let Some(cv) = c.to_u64() {
        let pre: Vec<u64> = small_preimages(cv, 64)
            .iter()
            .copied()
            .filter(|p| not.and_then(|n| n.to_u64()) != Some(*p))
            .collect();
        if !pre.is_empty() && rng.gen_bool(0.8) {
            return Hf::from_u64(pre[rng.gen_range(0..pre.len())]);
        }
    }
    let avoid: Vec<Hf> = not.into_iter().cloned().collect();
    let x = section(c);
    if Some(&x) != not && rng.gen_bool(0.5) {
        return x;
    }
    witness_recipe(&[], &[], c, &avoid)
}

/// Levels below this get random preimages in [`random_branch`]; above it
/// both samplers follow `σ`. Random preimages of large vertices rebuild
/// every node below them, so random choices deep in the tree are slow.
const RANDOM_LEVELS: usize = 4;

fn extend_by_section(prefix: &mut Vec<Hf>, depth: usize) {
    while prefix.len() <= depth {
        let next = section(prefix.last().unwrap());
        prefix.push(next);
    }
}

/// A random branch explicit through `depth`: a random small vertex at level
/// 0, random preimages up to level 3, then `σ`. Projecting a random top
/// coordinate down instead collapses to `0` within a few levels.
pub fn random_branch<R: Rng>(rng: &mut R, depth: usize) -> RadoBranch {
    let mut prefix = vec![Hf::from_u64(rng.gen_range(0..16))];
    while prefix.len() < RANDOM_LEVELS.min(depth + 1) {
        let next = random_preimage(rng, prefix.last().unwrap(), None);
        prefix.push(next);
    }
    extend_by_section(&mut prefix, depth);
    branch(prefix).expect("preimages are compatible")
}

/// A random branch agreeing with `base` exactly below level `k`, explicit
/// through `depth`: a random vertex at `k`, then `σ`.
pub fn random_sibling<R: Rng>(rng: &mut R, base: &RadoBranch, k: usize, depth: usize) -> Result<RadoBranch> {
    let base_prefix = base.prefix_to(depth.max(k))?;
    let mut prefix: Vec<Hf> = base_prefix[..k].to_vec();
    let first = if k == 0 {
        let mut v = Hf::from_u64(rng.gen_range(0..64));
        while v == base_prefix[0] {
            v = Hf::from_u64(rng.gen_range(0..64));
        }
        v
    } else {
        random_preimage(rng, &prefix[k - 1], Some(&base_prefix[k]))
    };
    prefix.push(first);
    extend_by_section(&mut prefix, depth);
    branch(prefix)
}

/// A one-point extension problem: a new point with prescribed distances and
/// adjacency values to each given point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub points: Vec<crate::cochain::BranchLiteral<Hf>>,
    /// `distances[j]` is the prescribed `δ(new, points[j])`.
    pub distances: Vec<Level>,
    /// `relations[j]` is the prescribed lower value of `rho(new, points[j])`:
    /// `zero` for adjacent at every level, `Val(r)` for first non-adjacent at
    /// level `r`.
    pub relations: Vec<Level>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub depth: usize,
    pub prefix: Vec<Hf>,
    pub checks: Vec<RealizationCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationCheck {
    pub point: usize,
    pub distance: Level,
    pub relation: Level,
}

fn consistency(spec: &ExtensionSpec, depth: usize, points: &[RadoBranch]) -> Result<()> {
    let n = spec.points.len();
    if spec.distances.len() != n || spec.relations.len() != n {
        return Err(Error::input("one distance and one relation value per point are required"));
    }
    for (j, d) in spec.distances.iter().enumerate() {
        match d {
            Level::Zero => return Err(Error::input(format!("distance to point {j} is zero: the new point must be new"))),
            Level::Val(i) if *i as usize >= depth => {
                return Err(Error::input(format!("distance 2^-{i} to point {j} is not below the depth {depth}")))
            }
            _ => {}
        }
        if let Level::Val(r) = spec.relations[j] {
            if r as usize >= depth {
                return Err(Error::input(format!("relation level {r} for point {j} is not below the depth {depth}")));
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            let djk = distance(&points[j], &points[k], depth)?;
            // δ(p_j, p_k) <= max(δ(new, p_j), δ(new, p_k)), and symmetric forms
            if djk > spec.distances[j].max(spec.distances[k])
                || spec.distances[j] > djk.max(spec.distances[k])
            {
                return Err(Error::input(format!("prescribed distances to points {j} and {k} are not ultrametric")));
            }
        }
    }
    Ok(())
}

fn adjacency_wanted(target: Level, level: usize) -> Option<bool> {
    match target {
        Level::Zero => Some(true),
        Level::Val(r) if level < r as usize => Some(true),
        Level::Val(r) if level == r as usize => Some(false),
        _ => None,
    }
}

/// Realizes a one-point extension inside the pro-Rado limit through
/// `depth`.
///
/// Below `K` (the deepest prescribed agreement) the new point is forced to
/// follow the point it agrees with longest; from `K` on each coordinate is a
/// witness over the previous one, adjacent or not to the given points'
/// coordinates as prescribed. The result is re-validated against every
/// prescription.
pub fn realize(spec: &ExtensionSpec, depth: usize) -> Result<Realization> {
    let points = spec
        .points
        .iter()
        .map(|lit| Branch::from_literal(pro_rado(), lit.clone()))
        .collect::<Result<Vec<_>>>()?;
    consistency(spec, depth, &points)?;
    let coords = points.iter().map(|p| p.prefix_to(depth)).collect::<Result<Vec<_>>>()?;
    let agree: Vec<usize> = spec.distances.iter().map(|d| d.index().unwrap() as usize).collect();
    let (k, lead) = agree.iter().enumerate().map(|(j, &d)| (d, j)).max().unwrap_or((0, 0));
    let mut prefix: Vec<Hf> = (0..k).map(|i| coords[lead][i].clone()).collect();
    for (j, c) in coords.iter().enumerate() {
        for (i, v) in prefix.iter().enumerate() {
            if (i < agree[j]) != (*v == c[i]) {
                return Err(Error::input(format!("distance to point {j} contradicts the forced coordinate at level {i}")));
            }
            if let Some(want) = adjacency_wanted(spec.relations[j], i) {
                if v.adjacent(&c[i]) != want {
                    return Err(Error::input(format!("relation to point {j} contradicts the forced coordinate at level {i}")));
                }
            }
        }
    }
    for level in k..=depth {
        let mut adj = Vec::new();
        let mut non = Vec::new();
        let mut avoid = Vec::new();
        for (j, c) in coords.iter().enumerate() {
            match adjacency_wanted(spec.relations[j], level) {
                Some(true) => adj.push(c[level].clone()),
                Some(false) => non.push(c[level].clone()),
                None => {}
            }
            if agree[j] == level {
                avoid.push(c[level].clone());
            }
        }
        adj.sort();
        adj.dedup();
        non.sort();
        non.dedup();
        let x = if level == 0 {
            free_witness(&adj, &non, &avoid)?
        } else {
            witness(&adj, &non, &prefix[level - 1], &avoid)
                .map_err(|e| Error::input(format!("prescription cannot be met at level {level}: {e}")))?
        };
        prefix.push(x);
    }
    let new = branch(prefix.clone())?;
    let mut checks = Vec::new();
    for (j, p) in points.iter().enumerate() {
        let d = distance(&new, p, depth)?;
        let r = rel_value_lower(0, &[new.clone(), p.clone()], depth)?;
        if d != spec.distances[j] || r != spec.relations[j] {
            return Err(Error::Search(format!("realization failed re-validation at point {j}")));
        }
        checks.push(RealizationCheck { point: j, distance: d, relation: r });
    }
    Ok(Realization { depth, prefix, checks })
}

/// Least vertex outside `avoid` adjacent to all of `a` and none of `b`, with
/// no constraint on its image.
pub fn free_witness(a: &[Hf], b: &[Hf], avoid: &[Hf]) -> Result<Hf> {
    if let Some(x) = a.iter().find(|x| b.contains(x)) {
        return Err(Error::input(format!("{x} is required both adjacent and non-adjacent")));
    }
    let ok = |x: &Hf| {
        !a.contains(x) && !b.contains(x) && !avoid.contains(x) && a.iter().all(|v| x.adjacent(v)) && b.iter().all(|v| !x.adjacent(v))
    };
    for n in 0..SCAN_LIMIT {
        let x = Hf::from_u64(n);
        if ok(&x) {
            return Ok(x);
        }
    }
    let top = a.iter().chain(b).chain(avoid).max().cloned().unwrap_or_else(Hf::empty);
    let x = Hf::from_members(a.iter().cloned().chain([Hf::singleton(top)]));
    debug_assert!(ok(&x));
    Ok(x)
}
