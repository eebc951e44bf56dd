//! ω-cochains, branches of their limits and the dyadic ultrametric.
//!
//! A cochain is anything implementing [`LevelSystem`]: levels `A_i`, bonds
//! `A_{i+1} -> A_i` and a canonical way to pick a preimage. A [`Branch`] is a
//! known prefix `x_0 .. x_k` plus that canonical continuation. Every metric
//! operation takes an explicit depth.

mod finite;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::{Agreement, Level};
use crate::structure::Signature;

pub use finite::{Extender, FiniteCochain};

pub trait LevelSystem: Send + Sync {
    type V: Clone + Ord + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + Serialize + DeserializeOwned;

    fn signature(&self) -> &Signature;

    /// Last available level, `None` when levels go on forever.
    fn stored_depth(&self) -> Option<usize>;

    fn contains(&self, level: usize, v: &Self::V) -> Result<bool>;

    /// The bond `A_{level+1} -> A_level`.
    fn bond(&self, level: usize, v: &Self::V) -> Result<Self::V>;

    /// Canonical preimage of `v ∈ A_level` in `A_{level+1}`.
    fn extend(&self, level: usize, v: &Self::V) -> Result<Self::V>;

    fn holds(&self, level: usize, rel: usize, tuple: &[Self::V]) -> Result<bool>;

    /// All of `A_level`, or `None` if it is infinite.
    fn level_vertices(&self, level: usize) -> Result<Option<Vec<Self::V>>>;

    /// Preimages of `v ∈ A_level` in `A_{level+1}`, or `None` if infinite.
    fn fiber(&self, level: usize, v: &Self::V) -> Result<Option<Vec<Self::V>>>;

    /// A level `L` such that every related tuple at a level `>= L` has a
    /// related tuple of preimages one level up.
    fn lifts_certified_from(&self) -> Option<usize>;

    /// A level `L` from which canonical extension maps related tuples to
    /// related tuples.
    fn canonical_preserves_from(&self) -> Option<usize>;

    /// Some related tuple at `level`, if any.
    fn some_related(&self, level: usize, rel: usize) -> Result<Option<Vec<Self::V>>> {
        let Some(vs) = self.level_vertices(level)? else {
            return Err(Error::Search(format!("{} cannot enumerate level {level}", self.describe())));
        };
        let mut found = None;
        for_each_tuple(&vs, self.signature().arity(rel), &mut |t| {
            if found.is_none() && self.holds(level, rel, t)? {
                found = Some(t.to_vec());
            }
            Ok(found.is_none())
        })?;
        Ok(found)
    }

    /// The first `n` vertices of `A_level` in canonical order.
    fn sample_vertices(&self, level: usize, n: usize) -> Result<Vec<Self::V>> {
        match self.level_vertices(level)? {
            Some(mut v) => {
                v.truncate(n);
                Ok(v)
            }
            None => Err(Error::Search(format!("{} has no vertex sampler", self.describe()))),
        }
    }

    fn describe(&self) -> String;
}

/// Calls `visit` on every tuple over `vs` of length `arity` in lexicographic
/// order until it returns `false`.
pub fn for_each_tuple<V: Clone>(vs: &[V], arity: usize, visit: &mut dyn FnMut(&[V]) -> Result<bool>) -> Result<bool> {
    fn go<V: Clone>(vs: &[V], arity: usize, cur: &mut Vec<V>, visit: &mut dyn FnMut(&[V]) -> Result<bool>) -> Result<bool> {
        if cur.len() == arity {
            return visit(cur);
        }
        for v in vs {
            cur.push(v.clone());
            let go_on = go(vs, arity, cur, visit)?;
            cur.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
    go(vs, arity, &mut Vec::with_capacity(arity), visit)
}

/// Calls `visit` on every element of the product of `sets`.
fn for_each_product<V: Clone>(sets: &[Vec<V>], visit: &mut dyn FnMut(&[V]) -> Result<bool>) -> Result<bool> {
    fn go<V: Clone>(sets: &[Vec<V>], cur: &mut Vec<V>, visit: &mut dyn FnMut(&[V]) -> Result<bool>) -> Result<bool> {
        if cur.len() == sets.len() {
            return visit(cur);
        }
        for v in &sets[cur.len()] {
            cur.push(v.clone());
            let go_on = go(sets, cur, visit)?;
            cur.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
    go(sets, &mut Vec::with_capacity(sets.len()), visit)
}

pub fn resolve_rel(sig: &Signature, name: &str) -> Result<usize> {
    sig.index_of(name).ok_or_else(|| Error::input(format!("unknown relation {name}")))
}

/// A point of the limit: an explicit prefix and the canonical continuation.
pub struct Branch<S: LevelSystem> {
    system: Arc<S>,
    prefix: Vec<S::V>,
}

impl<S: LevelSystem> Clone for Branch<S> {
    fn clone(&self) -> Self {
        Branch { system: self.system.clone(), prefix: self.prefix.clone() }
    }
}

impl<S: LevelSystem> fmt::Debug for Branch<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Branch").field("prefix", &self.prefix).finish()
    }
}

impl<S: LevelSystem> PartialEq for Branch<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.system, &other.system) && self.prefix == other.prefix
    }
}

/// JSON form of a branch: `{"prefix":[0,3,7]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchLiteral<V> {
    pub prefix: Vec<V>,
}

impl<S: LevelSystem> Branch<S> {
    pub fn new(system: Arc<S>, prefix: Vec<S::V>) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::input("a branch needs at least its level-0 vertex"));
        }
        for (i, v) in prefix.iter().enumerate() {
            if !system.contains(i, v)? {
                return Err(Error::input(format!("{v} is not a vertex of level {i}")));
            }
        }
        for i in 0..prefix.len() - 1 {
            let down = system.bond(i, &prefix[i + 1])?;
            if down != prefix[i] {
                return Err(Error::input(format!(
                    "prefix is not compatible at level {i}: bond sends {} to {down}, not {}",
                    prefix[i + 1],
                    prefix[i]
                )));
            }
        }
        Ok(Branch { system, prefix })
    }

    pub fn from_literal(system: Arc<S>, lit: BranchLiteral<S::V>) -> Result<Self> {
        Branch::new(system, lit.prefix)
    }

    pub fn literal(&self) -> BranchLiteral<S::V> {
        BranchLiteral { prefix: self.prefix.clone() }
    }

    pub fn system(&self) -> &Arc<S> {
        &self.system
    }

    pub fn same_system(&self, other: &Branch<S>) -> bool {
        Arc::ptr_eq(&self.system, &other.system)
    }

    /// The explicitly known coordinates.
    pub fn prefix(&self) -> &[S::V] {
        &self.prefix
    }

    /// Coordinate `k`, extending canonically past the prefix.
    pub fn at(&self, k: usize) -> Result<S::V> {
        if let Some(v) = self.prefix.get(k) {
            return Ok(v.clone());
        }
        let mut v = self.prefix.last().unwrap().clone();
        for level in self.prefix.len() - 1..k {
            v = self.system.extend(level, &v)?;
        }
        Ok(v)
    }

    /// Coordinates `0..=depth`.
    pub fn prefix_to(&self, depth: usize) -> Result<Vec<S::V>> {
        let mut out: Vec<S::V> = self.prefix.iter().take(depth + 1).cloned().collect();
        while out.len() <= depth {
            let level = out.len() - 1;
            let next = self.system.extend(level, out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    /// Makes coordinates `0..=depth` explicit.
    pub fn deepen(&mut self, depth: usize) -> Result<()> {
        if self.prefix.len() <= depth {
            self.prefix = self.prefix_to(depth)?;
        }
        Ok(())
    }

    /// The same point with only the first `len` coordinates explicit.
    pub fn truncated(&self, len: usize) -> Branch<S> {
        let len = len.clamp(1, self.prefix.len());
        Branch { system: self.system.clone(), prefix: self.prefix[..len].to_vec() }
    }
}

fn same_system<S: LevelSystem>(branches: &[&Branch<S>]) -> Result<()> {
    if branches.windows(2).any(|w| !w[0].same_system(w[1])) {
        return Err(Error::input("branches come from different cochains"));
    }
    Ok(())
}

/// Least disagreement index below `depth`, or exhaustion.
pub fn agreement_level<S: LevelSystem>(x: &Branch<S>, y: &Branch<S>, depth: usize) -> Result<Agreement> {
    same_system(&[x, y])?;
    let (px, py) = (x.prefix_to(depth)?, y.prefix_to(depth)?);
    Ok(match (0..depth).find(|&i| px[i] != py[i]) {
        Some(i) => Agreement::Differ(i as u32),
        None => Agreement::Exhausted(depth as u32),
    })
}

/// `2^-Δ(x,y)`, with `Zero` standing for agreement through `depth`.
pub fn distance<S: LevelSystem>(x: &Branch<S>, y: &Branch<S>, depth: usize) -> Result<Level> {
    Ok(agreement_level(x, y, depth)?.distance())
}

/// Coordinates `0..=depth` of each branch, transposed into level tuples.
fn level_tuples<S: LevelSystem>(tuple: &[Branch<S>], depth: usize) -> Result<Vec<Vec<S::V>>> {
    let refs: Vec<&Branch<S>> = tuple.iter().collect();
    same_system(&refs)?;
    let prefixes = tuple.iter().map(|b| b.prefix_to(depth)).collect::<Result<Vec<_>>>()?;
    Ok((0..=depth).map(|i| prefixes.iter().map(|p| p[i].clone()).collect()).collect())
}

fn check_arity<S: LevelSystem>(rel: usize, tuple: &[Branch<S>]) -> Result<Arc<S>> {
    let sys = tuple.first().ok_or_else(|| Error::input("empty tuple"))?.system.clone();
    if rel >= sys.signature().len() {
        return Err(Error::input(format!("relation index {rel} out of range")));
    }
    let arity = sys.signature().arity(rel);
    if tuple.len() != arity {
        return Err(Error::input(format!("{} has arity {arity}, got {} branches", sys.signature().name(rel), tuple.len())));
    }
    Ok(sys)
}

/// The first level `<= depth` at which the projections leave the relation,
/// as `Val(level)`; `Zero` if there is none.
pub fn rel_value_lower<S: LevelSystem>(rel: usize, tuple: &[Branch<S>], depth: usize) -> Result<Level> {
    let sys = check_arity(rel, tuple)?;
    for (i, t) in level_tuples(tuple, depth)?.iter().enumerate() {
        if !sys.holds(i, rel, t)? {
            return Ok(Level::Val(i as u32));
        }
    }
    Ok(Level::Zero)
}

/// Whether a related `tuple` at `level` starts a chain of related tuples of
/// preimages up to `depth`.
fn lifts_through<S: LevelSystem>(
    sys: &S,
    rel: usize,
    level: usize,
    tuple: &[S::V],
    depth: usize,
    dead: &mut HashSet<(usize, Vec<S::V>)>,
) -> Result<bool> {
    if level >= depth || sys.lifts_certified_from().is_some_and(|l| l <= level) {
        return Ok(true);
    }
    if dead.contains(&(level, tuple.to_vec())) {
        return Ok(false);
    }
    let mut fibers = Vec::with_capacity(tuple.len());
    for v in tuple {
        match sys.fiber(level, v)? {
            Some(f) => fibers.push(f),
            None => {
                return Err(Error::Search(format!(
                    "cannot decide lifts over the infinite fibers of {} at level {level}",
                    sys.describe()
                )))
            }
        }
    }
    let mut found = false;
    for_each_product(&fibers, &mut |t| {
        if sys.holds(level + 1, rel, t)? && lifts_through(sys, rel, level + 1, t, depth, dead)? {
            found = true;
        }
        Ok(!found)
    })?;
    if !found {
        dead.insert((level, tuple.to_vec()));
    }
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperValue {
    pub value: Level,
    /// True when the value cannot change at any deeper horizon.
    pub exact: bool,
}

/// Distance from the tuple to the tuples related at every level `<= depth`.
///
/// The value is `Val(k)` for the largest `k` such that some related tuple
/// agrees with the given one below level `k`. Failing to find one is final
/// (relatedness at a deeper horizon implies it at a shallower one); finding
/// one is final only once the system certifies lifts from `depth` on.
pub fn rel_value_upper<S: LevelSystem>(rel: usize, tuple: &[Branch<S>], depth: usize) -> Result<UpperValue> {
    let sys = check_arity(rel, tuple)?;
    let levels = level_tuples(tuple, depth)?;
    let mut first_fail = None;
    for (i, t) in levels.iter().enumerate() {
        if !sys.holds(i, rel, t)? {
            first_fail = Some(i);
            break;
        }
    }
    let certified = sys.lifts_certified_from().is_some_and(|l| l <= depth);
    let Some(m) = first_fail else {
        let canonical_tail = tuple.iter().all(|b| b.prefix.len() <= depth + 1);
        let exact = canonical_tail && sys.canonical_preserves_from().is_some_and(|l| l <= depth);
        return Ok(UpperValue { value: Level::Zero, exact });
    };
    let mut dead = HashSet::new();
    for k in (1..=m).rev() {
        if lifts_through(&*sys, rel, k - 1, &levels[k - 1], depth, &mut dead)? {
            return Ok(UpperValue { value: Level::Val(k as u32), exact: certified });
        }
    }
    // k = 0: any related tuple at all; the value is 1 either way
    Ok(UpperValue { value: Level::Val(0), exact: true })
}

/// Level-`i` vertices that are images of level-`depth` vertices, or `None`
/// when some level on the way is infinite.
pub fn reachable<S: LevelSystem>(sys: &S, i: usize, depth: usize) -> Result<Option<BTreeSet<S::V>>> {
    let Some(top) = sys.level_vertices(depth.max(i))? else { return Ok(None) };
    let mut cur: BTreeSet<S::V> = top.into_iter().collect();
    for level in (i..depth).rev() {
        cur = cur.iter().map(|v| sys.bond(level, v)).collect::<Result<_>>()?;
    }
    Ok(Some(cur))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Strongness<V> {
    /// Every related tuple at the level lifts to one related through the
    /// horizon. `certified` means the system guarantees lifts forever;
    /// `sampled` means only the first vertices of an infinite level were
    /// examined.
    StrongUpTo { horizon: usize, certified: bool, sampled: bool },
    Counterexample { relation: String, tuple: Vec<V>, level: usize },
}

/// Vertices examined at an infinite level.
pub const STRONG_SAMPLE: usize = 16;

/// Whether `α_i^∞` is strong, checked up to `depth`: every related tuple of
/// level-`i` vertices in the image must lift to one related at every level
/// through `depth`.
pub fn is_strong_at<S: LevelSystem>(sys: &S, i: usize, depth: usize) -> Result<Strongness<S::V>> {
    if i >= depth {
        return Err(Error::input(format!("level {i} must be below the depth {depth}")));
    }
    let certified = sys.lifts_certified_from().is_some_and(|l| l <= i);
    let (vertices, sampled) = match reachable(sys, i, depth)? {
        Some(r) => (r.into_iter().collect::<Vec<_>>(), false),
        None if certified => {
            return Ok(Strongness::StrongUpTo { horizon: depth, certified: true, sampled: false });
        }
        None => (sys.sample_vertices(i, STRONG_SAMPLE)?, true),
    };
    let certified = sys.lifts_certified_from().is_some_and(|l| l <= depth);
    for rel in 0..sys.signature().len() {
        let mut bad = None;
        let mut dead = HashSet::new();
        for_each_tuple(&vertices, sys.signature().arity(rel), &mut |t| {
            if sys.holds(i, rel, t)? && !lifts_through(sys, rel, i, t, depth, &mut dead)? {
                bad = Some(t.to_vec());
            }
            Ok(bad.is_none())
        })?;
        if let Some(tuple) = bad {
            return Ok(Strongness::Counterexample { relation: sys.signature().name(rel).to_string(), tuple, level: i });
        }
    }
    Ok(Strongness::StrongUpTo { horizon: depth, certified, sampled })
}

/// The limit of a sequence that is Cauchy within `depth`: at each level up
/// to `depth` its last two terms must already agree.
pub fn limit_of_cauchy<S: LevelSystem>(seq: &[Branch<S>], depth: usize) -> Result<Branch<S>> {
    let last = seq.last().ok_or_else(|| Error::input("empty sequence"))?;
    let refs: Vec<&Branch<S>> = seq.iter().collect();
    same_system(&refs)?;
    let tail = last.prefix_to(depth)?;
    if seq.len() >= 2 {
        let before = seq[seq.len() - 2].prefix_to(depth)?;
        if let Some(m) = (0..=depth).find(|&m| before[m] != tail[m]) {
            return Err(Error::input(format!("sequence is not Cauchy within depth {depth}: level {m} does not stabilise")));
        }
    }
    Branch::new(last.system.clone(), tail)
}

/// Number of `≈_i` classes in the sample, i.e. distinct level-`i`
/// coordinates.
pub fn quotient_sizes<S: LevelSystem>(sample: &[Branch<S>], i: usize) -> Result<usize> {
    let coords = sample.iter().map(|b| b.at(i)).collect::<Result<BTreeSet<_>>>()?;
    Ok(coords.len())
}

/// Graphviz view of the tree `T` to `depth`: nodes `i:a`, an arrow from
/// `(i,a)` to `(i+1,b)` when the bond sends `b` to `a`. Finite levels are
/// drawn in full, infinite ones only along the given branches.
pub fn tree_dot<S: LevelSystem>(sys: &S, branches: &[Branch<S>], depth: usize) -> Result<String> {
    let mut nodes: Vec<BTreeSet<S::V>> = Vec::with_capacity(depth + 1);
    for level in 0..=depth {
        let mut set: BTreeSet<S::V> = match sys.level_vertices(level)? {
            Some(v) => v.into_iter().collect(),
            None => BTreeSet::new(),
        };
        for b in branches {
            set.insert(b.at(level)?);
        }
        nodes.push(set);
    }
    let mut out = String::from("digraph T {\n");
    for (level, set) in nodes.iter().enumerate() {
        for v in set {
            out.push_str(&format!("  \"{level}:{v}\";\n"));
        }
    }
    for level in 0..depth {
        for v in &nodes[level + 1] {
            let down = sys.bond(level, v)?;
            out.push_str(&format!("  \"{level}:{down}\" -> \"{}:{v}\";\n", level + 1));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
