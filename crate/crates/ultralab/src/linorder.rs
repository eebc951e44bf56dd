//! The lexicographic model of the ordered ultrametric limit: level `n` is
//! `ℚ^{n+1}` ordered lexicographically, the bond drops the last coordinate
//! and the canonical extension appends 0.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cochain::{rel_value_lower, Branch, LevelSystem};
use crate::error::{Error, Result};
use crate::level::Level;
use crate::structure::Signature;

pub type Rational = BigRational;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| Error::input(format!("bad rational {s:?}")))?;
    let d: BigInt = den.parse().map_err(|_| Error::input(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A point of `ℚ^n_lex`, written `"1/2,0"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexPoint(pub Vec<Rational>);

impl LexPoint {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for LexPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::input("empty tuple"));
        }
        s.split(',').map(parse_rational).collect::<Result<_>>().map(LexPoint)
    }
}

impl Serialize for LexPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LexPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn lex_compare(a: &[Rational], b: &[Rational]) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::input(format!("cannot compare tuples of lengths {} and {}", a.len(), b.len())));
    }
    Ok(a.cmp(b))
}

/// Drops the last coordinate.
pub fn project(a: &[Rational]) -> Result<Vec<Rational>> {
    match a.split_last() {
        Some((_, rest)) => Ok(rest.to_vec()),
        None => Err(Error::input("cannot project the empty tuple")),
    }
}

/// The rational of least denominator strictly between `lo` and `hi`
/// (either side may be open-ended), least numerator on ties.
pub fn simplest_between(lo: Option<&Rational>, hi: Option<&Rational>) -> Result<Rational> {
    match (lo, hi) {
        (None, None) => Ok(Rational::zero()),
        (Some(a), None) => Ok(Rational::from_integer(a.floor().to_integer() + 1)),
        (None, Some(b)) => Ok(Rational::from_integer(b.ceil().to_integer() - 1)),
        (Some(a), Some(b)) => dense_witness(a, b),
    }
}

/// The rational of least denominator in the open interval `(a, b)`.
pub fn dense_witness(a: &Rational, b: &Rational) -> Result<Rational> {
    if a >= b {
        return Err(Error::input(format!("{a} is not below {b}")));
    }
    Ok(simplest(a, b))
}

// continued-fraction descent: x = fl + 1/y with y in the reciprocal interval
fn simplest(a: &Rational, b: &Rational) -> Rational {
    let fl = a.floor();
    let next = &fl + Rational::one();
    if &next < b {
        return next;
    }
    let lo = (b - &fl).recip();
    if a == &fl {
        return fl + Rational::from_integer(lo.floor().to_integer() + 1).recip();
    }
    let hi = (a - &fl).recip();
    fl + simplest(&lo, &hi).recip()
}

/// Stern's diatomic sequence.
fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n.is_odd() {
            b += a;
        } else {
            a += b;
        }
        n /= 2;
    }
    b
}

/// The `k`-th rational in the order 0, 1, -1, 1/2, -1/2, 2, -2, ... (the
/// Calkin–Wilf sequence with signs interleaved).
pub fn rational_at(k: u64) -> Rational {
    if k == 0 {
        return Rational::zero();
    }
    let n = (k - 1) / 2 + 1;
    let q = rat(fusc(n) as i64, fusc(n + 1) as i64);
    if k % 2 == 1 {
        q
    } else {
        -q
    }
}

/// Cantor unpairing.
pub fn unpair(k: u64) -> (u64, u64) {
    let w = (((8 * k as u128 + 1) as f64).sqrt() as u64 - 1) / 2;
    let mut w = w;
    while (w + 1) * (w + 2) / 2 <= k {
        w += 1;
    }
    while w * (w + 1) / 2 > k {
        w -= 1;
    }
    let y = k - w * (w + 1) / 2;
    (w - y, y)
}

/// The `k`-th point of `ℚ^len`, by iterated unpairing.
pub fn lex_point_at(len: usize, mut k: u64) -> LexPoint {
    let mut coords = Vec::with_capacity(len);
    for _ in 1..len {
        let (a, rest) = unpair(k);
        coords.push(rational_at(a));
        k = rest;
    }
    coords.push(rational_at(k));
    LexPoint(coords)
}

#[derive(Debug)]
pub struct LexQ {
    signature: Signature,
}

pub fn lex_q() -> Arc<LexQ> {
    static L: OnceLock<Arc<LexQ>> = OnceLock::new();
    L.get_or_init(|| Arc::new(LexQ { signature: Signature::from_pairs(&[("le", 2)]).unwrap() })).clone()
}

impl LexQ {
    fn check(&self, level: usize, v: &LexPoint) -> Result<()> {
        if v.len() != level + 1 {
            return Err(Error::input(format!("{v} has length {}, level {level} needs {}", v.len(), level + 1)));
        }
        Ok(())
    }
}

impl LevelSystem for LexQ {
    type V = LexPoint;

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn stored_depth(&self) -> Option<usize> {
        None
    }

    fn contains(&self, level: usize, v: &LexPoint) -> Result<bool> {
        Ok(v.len() == level + 1)
    }

    fn bond(&self, level: usize, v: &LexPoint) -> Result<LexPoint> {
        self.check(level + 1, v)?;
        project(&v.0).map(LexPoint)
    }

    fn extend(&self, level: usize, v: &LexPoint) -> Result<LexPoint> {
        self.check(level, v)?;
        let mut w = v.0.clone();
        w.push(Rational::zero());
        Ok(LexPoint(w))
    }

    fn holds(&self, level: usize, _rel: usize, tuple: &[LexPoint]) -> Result<bool> {
        self.check(level, &tuple[0])?;
        self.check(level, &tuple[1])?;
        Ok(lex_compare(&tuple[0].0, &tuple[1].0)? != Ordering::Greater)
    }

    fn level_vertices(&self, _level: usize) -> Result<Option<Vec<LexPoint>>> {
        Ok(None)
    }

    fn fiber(&self, _level: usize, _v: &LexPoint) -> Result<Option<Vec<LexPoint>>> {
        Ok(None)
    }

    /// `a <= b` lifts to `a·0 <= b·0`.
    fn lifts_certified_from(&self) -> Option<usize> {
        Some(0)
    }

    fn canonical_preserves_from(&self) -> Option<usize> {
        Some(0)
    }

    fn some_related(&self, level: usize, _rel: usize) -> Result<Option<Vec<LexPoint>>> {
        let z = LexPoint(vec![Rational::zero(); level + 1]);
        Ok(Some(vec![z.clone(), z]))
    }

    fn sample_vertices(&self, level: usize, n: usize) -> Result<Vec<LexPoint>> {
        Ok((0..n as u64).map(|k| lex_point_at(level + 1, k)).collect())
    }

    fn describe(&self) -> String {
        "lexicographic rationals".to_string()
    }
}

pub type LexBranch = Branch<LexQ>;

/// The branch whose level-`i` coordinate is the first `i+1` entries of
/// `coords`, continued by zeros.
pub fn lex_branch(coords: &[Rational]) -> Result<LexBranch> {
    if coords.is_empty() {
        return Err(Error::input("a lexicographic branch needs at least one coordinate"));
    }
    let prefix = (1..=coords.len()).map(|n| LexPoint(coords[..n].to_vec())).collect();
    Branch::new(lex_q(), prefix)
}

/// The coordinates of `x` through `depth` as one tuple.
pub fn coordinates(x: &LexBranch, depth: usize) -> Result<Vec<Rational>> {
    Ok(x.at(depth)?.0)
}

/// Value of `x <= y`: `Zero` when `x <=_lex y` within `depth` (or equal
/// through it), otherwise the distance `Val(Δ)`.
pub fn order_value(x: &LexBranch, y: &LexBranch, depth: usize) -> Result<Level> {
    let (a, b) = (coordinates(x, depth)?, coordinates(y, depth)?);
    match (0..=depth).find(|&i| a[i] != b[i]) {
        Some(i) if a[i] > b[i] => Ok(Level::Val(i as u32)),
        _ => Ok(Level::Zero),
    }
}

/// The same value read as the lower relation value of `le` in the cochain.
pub fn order_value_lower(x: &LexBranch, y: &LexBranch, depth: usize) -> Result<Level> {
    rel_value_lower(0, &[x.clone(), y.clone()], depth)
}

/// Least last coordinate placing a new point strictly between the given
/// neighbours: used for back-and-forth responses.
pub fn place_between(lo: Option<&Rational>, hi: Option<&Rational>) -> Result<Rational> {
    if let (Some(a), Some(b)) = (lo, hi) {
        if a >= b {
            return Err(Error::Search(format!("no room between {a} and {b}")));
        }
    }
    simplest_between(lo, hi)
}
