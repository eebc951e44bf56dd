//! `T_L`, `T_R` on the pro-Rado limit and the shift conjugation.

use rand::Rng;
use serde::Serialize;

use super::{bf_extend, Move, PairLiteral, PartialIso};
use crate::cochain::{agreement_level, distance, rel_value_lower, Branch};
use crate::error::{Error, Result};
use crate::level::{Agreement, Level};
use crate::rado::pro_rado::{random_branch, random_sibling};
use crate::rado::{omega, pro_rado, Hf, RadoBranch};

/// `(x_0, x_1, …) ↦ (x_1, x_2, …)`.
pub fn shift_left(x: &RadoBranch) -> RadoBranch {
    let p = x.prefix_to(x.prefix().len()).expect("pro-Rado extends");
    Branch::new(pro_rado(), p[1..].to_vec()).expect("tails of branches are branches")
}

/// `(x_0, …) ↦ (Ω(x_0), x_0, …)`.
pub fn shift_right(x: &RadoBranch) -> RadoBranch {
    let mut p = Vec::with_capacity(x.prefix().len() + 1);
    p.push(omega(&x.prefix()[0]));
    p.extend_from_slice(x.prefix());
    Branch::new(pro_rado(), p).expect("Ω is the bond")
}

pub fn shift_left_n(x: &RadoBranch, n: usize) -> RadoBranch {
    (0..n).fold(x.clone(), |b, _| shift_left(&b))
}

pub fn shift_right_n(x: &RadoBranch, n: usize) -> RadoBranch {
    (0..n).fold(x.clone(), |b, _| shift_right(&b))
}

/// An isomorphism `α: A -> B` of finite induced subgraphs of the limit,
/// adjacency read through `depth` (related at every level `<= depth`).
#[derive(Clone)]
pub struct DiscreteIso {
    pub pairs: Vec<(RadoBranch, RadoBranch)>,
    pub depth: usize,
}

fn related(x: &RadoBranch, y: &RadoBranch, depth: usize) -> Result<bool> {
    Ok(rel_value_lower(0, &[x.clone(), y.clone()], depth)? == Level::Zero)
}

impl DiscreteIso {
    pub fn new(pairs: Vec<(RadoBranch, RadoBranch)>, depth: usize) -> Result<Self> {
        for (j, (a, b)) in pairs.iter().enumerate() {
            for (k, (c, d)) in pairs.iter().enumerate().take(j) {
                if distance(a, c, depth)? == Level::Zero || distance(b, d, depth)? == Level::Zero {
                    return Err(Error::input(format!(
                        "points {k} and {j} cannot be told apart within depth {depth}; more depth is needed"
                    )));
                }
                if related(a, c, depth)? != related(b, d, depth)? {
                    return Err(Error::input(format!("adjacency of points {k} and {j} is not preserved")));
                }
            }
        }
        Ok(DiscreteIso { pairs, depth })
    }

    pub fn from_literals(lits: Vec<PairLiteral<Hf>>, depth: usize) -> Result<Self> {
        let pairs = lits
            .into_iter()
            .map(|l| Ok((Branch::from_literal(pro_rado(), l.from)?, Branch::from_literal(pro_rado(), l.to)?)))
            .collect::<Result<Vec<_>>>()?;
        DiscreteIso::new(pairs, depth)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftLevel {
    pub l: usize,
    /// Least level at which every non-adjacent pair has separated.
    pub m: usize,
    /// Least level at which the projection is injective on `A ∪ B`.
    pub n: usize,
}

/// `l = max(m, n)` from the prefixes, with `m` taken over the non-adjacent
/// pairs of both `A` and `B`.
pub fn shift_level(alpha: &DiscreteIso) -> Result<ShiftLevel> {
    let d = alpha.depth;
    let (a, b): (Vec<_>, Vec<_>) = alpha.pairs.iter().cloned().unzip();
    let mut m = 0;
    for side in [&a, &b] {
        for x in side.iter() {
            for y in side.iter() {
                if let Level::Val(f) = rel_value_lower(0, &[x.clone(), y.clone()], d)? {
                    m = m.max(f as usize);
                }
            }
        }
    }
    let all: Vec<&RadoBranch> = a.iter().chain(&b).collect();
    let mut n = 0;
    for (i, x) in all.iter().enumerate() {
        for y in &all[..i] {
            match agreement_level(x, y, d)? {
                Agreement::Differ(k) => n = n.max(k as usize),
                // the same point on both sides
                Agreement::Exhausted(_) => {}
            }
        }
    }
    Ok(ShiftLevel { l: m.max(n), m, n })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    /// The sample pair agrees exactly below this level.
    pub level: usize,
    pub before: Level,
    pub after: Level,
    pub adjacent_before: bool,
    pub adjacent_after: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conjugation {
    pub shift: ShiftLevel,
    pub depth: usize,
    /// Depth at which the extension `h` is played.
    pub inner_depth: usize,
    pub rounds: usize,
    /// `h̃(a) = α(a)` through `depth`, per point of `A`.
    pub extends: Vec<bool>,
    pub samples: Vec<PairCheck>,
    pub pass: bool,
}

/// Builds `h̃ = T_R^l ∘ h ∘ T_L^l` where `h` is a back-and-forth extension of
/// `T_L^l ∘ α ∘ T_R^l`, then certifies that `h̃` extends `α` and keeps the
/// distance and adjacency of `samples` random pairs lying closer than
/// `2^-l`.
pub fn conjugate_extend<R: Rng>(
    alpha: &DiscreteIso,
    depth: usize,
    rounds: usize,
    samples: usize,
    rng: &mut R,
) -> Result<Conjugation> {
    let shift = shift_level(alpha)?;
    let l = shift.l;
    if l + 2 > depth {
        return Err(Error::input(format!("shift level {l} leaves no room below depth {depth}; more depth is needed")));
    }
    let inner = depth - l;
    let beta: Vec<_> = alpha.pairs.iter().map(|(a, b)| (shift_left_n(a, l), shift_left_n(b, l))).collect();
    let beta = PartialIso::new(pro_rado(), pro_rado(), beta, inner)
        .map_err(|e| Error::Search(format!("conjugated map is not a metric isomorphism: {e}")))?;
    let mut h = bf_extend(beta, rounds)?;
    let mut apply = |x: &RadoBranch| -> Result<RadoBranch> {
        let y = h.play(Move::Forth, &shift_left_n(x, l))?;
        Ok(shift_right_n(&y.truncated(inner + 1), l))
    };
    let mut extends = Vec::new();
    for (a, b) in &alpha.pairs {
        extends.push(apply(a)?.prefix_to(depth)? == b.prefix_to(depth)?);
    }
    let mut checks = Vec::new();
    let anchors: Vec<RadoBranch> = alpha.pairs.iter().map(|(a, _)| a.clone()).collect();
    for s in 0..samples {
        // half of the pairs are taken near the points of A
        let u = if s % 2 == 0 && !anchors.is_empty() {
            let a = &anchors[rng.gen_range(0..anchors.len())];
            let near = rng.gen_range(l + 1..depth);
            random_sibling(rng, a, near, depth)?
        } else {
            random_branch(rng, depth)
        };
        let k = rng.gen_range(l + 1..depth);
        let v = random_sibling(rng, &u, k, depth)?;
        let (hu, hv) = (apply(&u)?, apply(&v)?);
        let before = distance(&u, &v, depth)?;
        let after = distance(&hu, &hv, depth)?;
        let adjacent_before = related(&u, &v, depth)?;
        let adjacent_after = related(&hu, &hv, depth)?;
        checks.push(PairCheck {
            level: k,
            before,
            after,
            adjacent_before,
            adjacent_after,
            pass: before == after && adjacent_before == adjacent_after,
        });
    }
    let pass = extends.iter().all(|&e| e) && checks.iter().all(|c| c.pass);
    Ok(Conjugation { shift, depth, inner_depth: inner, rounds, extends, samples: checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rado::pro_rado::branch_u64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shifts_are_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_branch(&mut rng, 8);
            assert_eq!(shift_left(&shift_right(&x)).prefix_to(8).unwrap(), x.prefix_to(8).unwrap());
            assert_eq!(shift_right(&shift_left(&x)).prefix_to(8).unwrap(), x.prefix_to(8).unwrap());
        }
    }

    #[test]
    fn distance_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_branch(&mut rng, 10);
        let y = random_sibling(&mut rng, &x, 3, 10).unwrap();
        assert_eq!(distance(&x, &y, 10).unwrap(), Level::Val(3));
        assert_eq!(distance(&shift_right(&x), &shift_right(&y), 10).unwrap(), Level::Val(4));
        assert_eq!(distance(&shift_left(&x), &shift_left(&y), 10).unwrap(), Level::Val(2));
    }

    #[test]
    fn shift_level_examples() {
        let x = branch_u64(&[5]).unwrap();
        let single = DiscreteIso::new(vec![(x.clone(), x.clone())], 8).unwrap();
        assert_eq!(shift_level(&single).unwrap().l, 0);
        // 2 and 8 are distinct and non-adjacent at level 0
        let (a, b) = (branch_u64(&[2]).unwrap(), branch_u64(&[8]).unwrap());
        assert!(!a.prefix()[0].adjacent(&b.prefix()[0]));
        let swap = DiscreteIso::new(vec![(a.clone(), b.clone()), (b.clone(), a.clone())], 8).unwrap();
        assert_eq!(shift_level(&swap).unwrap().l, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_branch(&mut rng, 8);
        let v = random_sibling(&mut rng, &u, 3, 8).unwrap();
        let deep = DiscreteIso::new(vec![(u.clone(), u), (v.clone(), v)], 8).unwrap();
        assert!(shift_level(&deep).unwrap().l >= 3);
    }

    #[test]
    fn conjugation_of_a_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (a, b) = (branch_u64(&[2]).unwrap(), branch_u64(&[8]).unwrap());
        let swap = DiscreteIso::new(vec![(a.clone(), b.clone()), (b, a)], 10).unwrap();
        let c = conjugate_extend(&swap, 10, 4, 50, &mut rng).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn identity_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_branch(&mut rng, 10);
        let id = DiscreteIso::new(vec![(x.clone(), x)], 10).unwrap();
        let c = conjugate_extend(&id, 10, 2, 20, &mut rng).unwrap();
        assert!(c.pass);
    }
}
