//! Back-and-forth on limits, the shift operators of the pro-Rado limit and
//! the conjugation that turns homogeneity into metric homogeneity.
//!
//! Only binary relations are handled; both pro-Rado and the lexicographic
//! rationals qualify.

mod shift;
mod skew;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cochain::{distance, rel_value_lower, Branch, BranchLiteral, LevelSystem};
use crate::error::{Error, Result};
use crate::linorder::{place_between, LexPoint, LexQ};
use crate::linorder::lex_point_at;
use crate::rado::{free_witness, witness, Hf, ProRado};

pub use shift::{
    conjugate_extend, shift_left, shift_level, shift_right, shift_left_n, shift_right_n, Conjugation, DiscreteIso,
    PairCheck, ShiftLevel,
};
pub use skew::{skew_hom_check, SkewInstance, SkewVerdict};

/// Prescribed relations between a new vertex and an existing one at the
/// same level: `to[r]` is `r(new, other)`, `from[r]` is `r(other, new)`.
#[derive(Clone, Debug)]
pub struct Want<V> {
    pub other: V,
    pub to: Vec<bool>,
    pub from: Vec<bool>,
}

/// A limit on which the back-and-forth game can be played.
pub trait GameSpace: LevelSystem {
    /// The `n`-th vertex of `level` in the scheduling enumeration.
    fn vertex_at(&self, level: usize, n: u64) -> Self::V;

    /// The canonical vertex at `level` over `parent`, different from every
    /// `avoid` and related to each `other` as prescribed.
    fn respond(&self, level: usize, parent: Option<&Self::V>, wants: &[Want<Self::V>], avoid: &[Self::V]) -> Result<Self::V>;
}

impl GameSpace for ProRado {
    fn vertex_at(&self, _level: usize, n: u64) -> Hf {
        Hf::from_u64(n)
    }

    fn respond(&self, level: usize, parent: Option<&Hf>, wants: &[Want<Hf>], avoid: &[Hf]) -> Result<Hf> {
        let mut adj = Vec::new();
        let mut non = Vec::new();
        for w in wants {
            if w.to[0] != w.from[0] {
                return Err(Error::input("adjacency is symmetric"));
            }
            if w.to[0] {
                adj.push(w.other.clone());
            } else {
                non.push(w.other.clone());
            }
        }
        match parent {
            None => free_witness(&adj, &non, avoid),
            Some(c) => witness(&adj, &non, c, avoid).map_err(|e| Error::Search(format!("no response at level {level}: {e}"))),
        }
    }
}

impl GameSpace for LexQ {
    fn vertex_at(&self, level: usize, n: u64) -> LexPoint {
        lex_point_at(level + 1, n)
    }

    fn respond(&self, level: usize, parent: Option<&LexPoint>, wants: &[Want<LexPoint>], _avoid: &[LexPoint]) -> Result<LexPoint> {
        let head: &[_] = parent.map(|p| p.0.as_slice()).unwrap_or(&[]);
        let mut lo = None;
        let mut hi = None;
        for w in wants {
            let (prefix, last) = w.other.0.split_at(level);
            if prefix != head {
                continue;
            }
            let last = &last[0];
            match (w.to[0], w.from[0]) {
                (true, false) => hi = Some(hi.map_or(last, |h| if last < h { last } else { h })),
                (false, true) => lo = Some(lo.map_or(last, |l| if last > l { last } else { l })),
                _ => return Err(Error::Search(format!("a new point cannot be both above and below {}", w.other))),
            }
        }
        let mut v = head.to_vec();
        v.push(place_between(lo, hi)?);
        Ok(LexPoint(v))
    }
}

/// Finitely many pairs `a_j ↦ b_j` of branches, checked to be a metric
/// isomorphism through `depth`: equal distances and equal lower relation
/// values on all corresponding pairs, including `j = k`.
pub struct PartialIso<S: LevelSystem> {
    left: Arc<S>,
    right: Arc<S>,
    pairs: Vec<(Branch<S>, Branch<S>)>,
    depth: usize,
}

impl<S: LevelSystem> Clone for PartialIso<S> {
    fn clone(&self) -> Self {
        PartialIso { left: self.left.clone(), right: self.right.clone(), pairs: self.pairs.clone(), depth: self.depth }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairLiteral<V> {
    pub from: BranchLiteral<V>,
    pub to: BranchLiteral<V>,
}

fn check_binary(sig: &crate::structure::Signature) -> Result<()> {
    if (0..sig.len()).any(|r| sig.arity(r) != 2) {
        return Err(Error::input("the game is implemented for binary relations only"));
    }
    Ok(())
}

impl<S: LevelSystem> PartialIso<S> {
    pub fn empty(left: Arc<S>, right: Arc<S>, depth: usize) -> Result<Self> {
        check_binary(left.signature())?;
        Ok(PartialIso { left, right, pairs: Vec::new(), depth })
    }

    pub fn new(left: Arc<S>, right: Arc<S>, pairs: Vec<(Branch<S>, Branch<S>)>, depth: usize) -> Result<Self> {
        let mut p = PartialIso::empty(left, right, depth)?;
        for (a, b) in pairs {
            p.push(a, b)?;
        }
        Ok(p)
    }

    pub fn from_literals(left: Arc<S>, right: Arc<S>, lits: Vec<PairLiteral<S::V>>, depth: usize) -> Result<Self> {
        let pairs = lits
            .into_iter()
            .map(|l| Ok((Branch::from_literal(left.clone(), l.from)?, Branch::from_literal(right.clone(), l.to)?)))
            .collect::<Result<Vec<_>>>()?;
        PartialIso::new(left, right, pairs, depth)
    }

    pub fn literals(&self) -> Result<Vec<PairLiteral<S::V>>> {
        self.pairs
            .iter()
            .map(|(a, b)| {
                Ok(PairLiteral {
                    from: BranchLiteral { prefix: a.prefix_to(self.depth)? },
                    to: BranchLiteral { prefix: b.prefix_to(self.depth)? },
                })
            })
            .collect()
    }

    pub fn pairs(&self) -> &[(Branch<S>, Branch<S>)] {
        &self.pairs
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Adds a pair after checking it against every existing pair.
    pub fn push(&mut self, a: Branch<S>, b: Branch<S>) -> Result<()> {
        if !Arc::ptr_eq(a.system(), &self.left) || !Arc::ptr_eq(b.system(), &self.right) {
            return Err(Error::input("pair is not between the two limits of the table"));
        }
        let d = self.depth;
        for (j, (x, y)) in self.pairs.iter().chain(std::iter::once(&(a.clone(), b.clone()))).enumerate() {
            let (da, db) = (distance(&a, x, d)?, distance(&b, y, d)?);
            if da != db {
                return Err(Error::input(format!("not an isometry: distance {da} to pair {j} becomes {db}")));
            }
            for rel in 0..self.left.signature().len() {
                for (s, t, u, v) in [(&a, x, &b, y), (x, &a, y, &b)] {
                    let before = rel_value_lower(rel, &[s.clone(), t.clone()], d)?;
                    let after = rel_value_lower(rel, &[u.clone(), v.clone()], d)?;
                    if before != after {
                        return Err(Error::input(format!(
                            "relation {} with pair {j} has value {before} but its image has {after}",
                            self.left.signature().name(rel)
                        )));
                    }
                }
            }
        }
        self.pairs.push((a, b));
        Ok(())
    }

    /// Re-checks every invariant from scratch.
    pub fn validate(&self) -> Result<()> {
        PartialIso::new(self.left.clone(), self.right.clone(), self.pairs.clone(), self.depth).map(|_| ())
    }

    fn find(&self, x: &Branch<S>, forward: bool) -> Result<Option<Branch<S>>> {
        let px = x.prefix_to(self.depth)?;
        for (a, b) in &self.pairs {
            let (from, to) = if forward { (a, b) } else { (b, a) };
            if from.prefix_to(self.depth)? == px {
                return Ok(Some(to.clone()));
            }
        }
        Ok(None)
    }

    pub fn image(&self, x: &Branch<S>) -> Result<Option<Branch<S>>> {
        self.find(x, true)
    }

    pub fn preimage(&self, y: &Branch<S>) -> Result<Option<Branch<S>>> {
        self.find(y, false)
    }
}

/// Player 2: a point on `target`'s side matching `x` against `sources`,
/// level by level. Where `x` meets a source coordinate the answer is forced;
/// elsewhere it is a fresh vertex with the same relations.
fn respond<S: GameSpace>(
    target: &Arc<S>,
    sources: &[Branch<S>],
    targets: &[Branch<S>],
    x: &Branch<S>,
    depth: usize,
) -> Result<Branch<S>> {
    let src = sources.iter().map(|b| b.prefix_to(depth)).collect::<Result<Vec<_>>>()?;
    let tgt = targets.iter().map(|b| b.prefix_to(depth)).collect::<Result<Vec<_>>>()?;
    let xs = x.prefix_to(depth)?;
    let source_sys = x.system();
    let nrel = target.signature().len();
    let mut prefix: Vec<S::V> = Vec::with_capacity(depth + 1);
    for i in 0..=depth {
        if let Some(j) = (0..src.len()).find(|&j| src[j][i] == xs[i]) {
            prefix.push(tgt[j][i].clone());
            continue;
        }
        let mut wants: Vec<Want<S::V>> = Vec::new();
        for j in 0..src.len() {
            if wants.iter().any(|w| w.other == tgt[j][i]) {
                continue;
            }
            let mut to = Vec::with_capacity(nrel);
            let mut from = Vec::with_capacity(nrel);
            for rel in 0..nrel {
                to.push(source_sys.holds(i, rel, &[xs[i].clone(), src[j][i].clone()])?);
                from.push(source_sys.holds(i, rel, &[src[j][i].clone(), xs[i].clone()])?);
            }
            wants.push(Want { other: tgt[j][i].clone(), to, from });
        }
        let avoid: Vec<S::V> = wants.iter().map(|w| w.other.clone()).collect();
        let v = target.respond(i, prefix.last(), &wants, &avoid)?;
        prefix.push(v);
    }
    Branch::new(target.clone(), prefix)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Forth,
    Back,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundRecord<V> {
    pub round: usize,
    #[serde(rename = "move")]
    pub mv: Move,
    /// Index into the enumeration χ (or ξ), absent for requested points.
    pub index: Option<u64>,
    pub level: usize,
    pub vertex: V,
}

/// A partial isomorphism grown by the game, with the scheduler cursors.
pub struct AutoTable<S: GameSpace> {
    pub iso: PartialIso<S>,
    /// Every enumeration index below the cursor is hit on that side.
    pub next_forth: u64,
    pub next_back: u64,
    pub log: Vec<RoundRecord<S::V>>,
}

/// `χ(k)`: Cantor unpairing of `k` into `(level, n)`, levels past `depth`
/// skipped.
pub fn schedule_entry<S: GameSpace>(sys: &S, k: u64, depth: usize) -> Option<(usize, S::V)> {
    let (level, n) = crate::linorder::unpair(k);
    (level as usize <= depth).then(|| (level as usize, sys.vertex_at(level as usize, n)))
}

/// The canonical branch through `v ∈ A_level`.
pub fn branch_through<S: LevelSystem>(sys: &Arc<S>, level: usize, v: S::V) -> Result<Branch<S>> {
    let mut prefix = vec![v];
    for l in (0..level).rev() {
        let down = sys.bond(l, prefix.last().unwrap())?;
        prefix.push(down);
    }
    prefix.reverse();
    Branch::new(sys.clone(), prefix)
}

impl<S: GameSpace> AutoTable<S> {
    pub fn new(iso: PartialIso<S>) -> Self {
        AutoTable { iso, next_forth: 0, next_back: 0, log: Vec::new() }
    }

    fn hit(&self, forward: bool, level: usize, v: &S::V) -> Result<bool> {
        for (a, b) in self.iso.pairs() {
            let p = if forward { a } else { b };
            if p.at(level)? == *v {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Least enumeration entry not yet hit on one side.
    fn next_unhit(&mut self, forward: bool) -> Result<(u64, usize, S::V)> {
        let depth = self.iso.depth;
        let sys = if forward { self.iso.left.clone() } else { self.iso.right.clone() };
        let mut k = if forward { self.next_forth } else { self.next_back };
        loop {
            if let Some((level, v)) = schedule_entry(&*sys, k, depth) {
                if !self.hit(forward, level, &v)? {
                    if forward {
                        self.next_forth = k;
                    } else {
                        self.next_back = k;
                    }
                    return Ok((k, level, v));
                }
            }
            k += 1;
        }
    }

    /// Adds `x` to the domain (or range, for `Back`) with player 2's answer,
    /// returning the partner. Points already present are looked up.
    pub fn play(&mut self, mv: Move, x: &Branch<S>) -> Result<Branch<S>> {
        self.play_logged(mv, x, None)
    }

    fn play_logged(&mut self, mv: Move, x: &Branch<S>, index: Option<(u64, usize, S::V)>) -> Result<Branch<S>> {
        let depth = self.iso.depth;
        let known = match mv {
            Move::Forth => self.iso.image(x)?,
            Move::Back => self.iso.preimage(x)?,
        };
        if let Some(y) = known {
            return Ok(y);
        }
        let (lefts, rights): (Vec<_>, Vec<_>) = self.iso.pairs().iter().cloned().unzip();
        let y = match mv {
            Move::Forth => respond(&self.iso.right, &lefts, &rights, x, depth)?,
            Move::Back => respond(&self.iso.left, &rights, &lefts, x, depth)?,
        };
        let x = Branch::new(x.system().clone(), x.prefix_to(depth)?)?;
        match mv {
            Move::Forth => self.iso.push(x, y.clone())?,
            Move::Back => self.iso.push(y.clone(), x)?,
        }
        let (idx, level, vertex) = match index {
            Some((k, l, v)) => (Some(k), l, v),
            None => (None, depth, y.at(depth)?),
        };
        self.log.push(RoundRecord { round: self.log.len(), mv, index: idx, level, vertex });
        Ok(y)
    }

    /// One scheduled round: the least unhit density point on the moving
    /// side and player 2's answer.
    pub fn round(&mut self, mv: Move) -> Result<()> {
        let forward = mv == Move::Forth;
        let (k, level, v) = self.next_unhit(forward)?;
        let sys = if forward { self.iso.left.clone() } else { self.iso.right.clone() };
        let x = branch_through(&sys, level, v.clone())?;
        self.play_logged(mv, &x, Some((k, level, v)))?;
        Ok(())
    }

    /// Whether the first `n` enumeration entries on each side are hit.
    pub fn scheduler_complete(&self, n: u64) -> Result<bool> {
        let depth = self.iso.depth;
        for forward in [true, false] {
            let sys = if forward { &self.iso.left } else { &self.iso.right };
            let mut seen = 0;
            let mut k = 0;
            while seen < n {
                if let Some((level, v)) = schedule_entry(&**sys, k, depth) {
                    if !self.hit(forward, level, &v)? {
                        return Ok(false);
                    }
                    seen += 1;
                }
                k += 1;
            }
        }
        Ok(true)
    }
}

/// Plays `rounds` alternating rounds (forth first) and re-validates the
/// table after each.
pub fn bf_extend<S: GameSpace>(p: PartialIso<S>, rounds: usize) -> Result<AutoTable<S>> {
    p.validate()?;
    let mut t = AutoTable::new(p);
    for r in 0..rounds {
        t.round(if r % 2 == 0 { Move::Forth } else { Move::Back })?;
        t.iso.validate()?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::Level;
    use crate::linorder::{lex_branch, lex_q, rat};
    use crate::rado::pro_rado::branch_u64;
    use crate::rado::standard::small_preimages;
    use crate::rado::pro_rado;

    #[test]
    fn empty_start_one_round() {
        let p = PartialIso::empty(pro_rado(), pro_rado(), 6).unwrap();
        let t = bf_extend(p, 1).unwrap();
        assert_eq!(t.iso.len(), 1);
        let (a, b) = &t.iso.pairs()[0];
        // χ(0) is vertex 0 at level 0; the least answer is the same branch
        assert_eq!(a.prefix_to(6).unwrap(), b.prefix_to(6).unwrap());
    }

    #[test]
    fn identity_pair_extends() {
        let x = branch_u64(&[1, 7]).unwrap();
        let p = PartialIso::new(pro_rado(), pro_rado(), vec![(x.clone(), x)], 6).unwrap();
        let t = bf_extend(p, 6).unwrap();
        assert_eq!(t.iso.len(), 7);
        assert!(t.scheduler_complete(3).unwrap());
    }

    #[test]
    fn non_isometric_pairs_are_rejected() {
        // a level-1 vertex over 0 with two small preimages
        let p = *small_preimages(0, 64).iter().find(|&&p| small_preimages(p, 2).len() == 2).unwrap();
        let q = small_preimages(p, 2);
        let other = *small_preimages(0, 64).iter().find(|&&r| r != p).unwrap();
        let x = branch_u64(&[0, p]).unwrap();
        let y = branch_u64(&[0, other]).unwrap();
        assert_eq!(distance(&x, &y, 6).unwrap(), Level::Val(1));
        let u = branch_u64(&[0, p, q[0]]).unwrap();
        let v = branch_u64(&[0, p, q[1]]).unwrap();
        assert_eq!(distance(&u, &v, 6).unwrap(), Level::Val(2));
        assert!(PartialIso::new(pro_rado(), pro_rado(), vec![(x, u), (y, v)], 6).is_err());
    }

    #[test]
    fn lex_order_game_stays_monotone() {
        let a = lex_branch(&[rat(0, 1)]).unwrap();
        let b = lex_branch(&[rat(5, 1), rat(1, 2)]).unwrap();
        let p = PartialIso::new(lex_q(), lex_q(), vec![(a, b)], 3).unwrap();
        let t = bf_extend(p, 12).unwrap();
        let pairs = t.iso.pairs();
        for (x, y) in pairs {
            for (u, v) in pairs {
                let before = x.prefix_to(3).unwrap().last().unwrap().cmp(u.prefix_to(3).unwrap().last().unwrap());
                let after = y.prefix_to(3).unwrap().last().unwrap().cmp(v.prefix_to(3).unwrap().last().unwrap());
                assert_eq!(before, after);
            }
        }
        assert!(t.scheduler_complete(6).unwrap());
    }
}
