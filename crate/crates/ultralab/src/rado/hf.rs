//! Hereditarily finite sets, identified with natural numbers by the
//! Ackermann coding `x = Σ_{p ∈ x} 2^p`. Values past `u64` are kept as
//! shared member lists, so towers like `2^(2^(2^7))` stay cheap.
//!
//! Nodes are hash-consed: equal sets are the same allocation, so equality is
//! a pointer test and comparisons only descend where two sets differ.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use rustc_hash::FxHashMap as HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Hf(Arc<Node>);

struct Node {
    /// Ascending.
    members: Box<[Hf]>,
    hash: u64,
    small: Option<u64>,
    rank: usize,
}

fn small_table() -> &'static [Hf] {
    static TABLE: OnceLock<Vec<Hf>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<Hf> = Vec::with_capacity(64);
        for n in 0u64..64 {
            let members: Vec<Hf> = (0..6).filter(|b| n >> b & 1 == 1).map(|b| t[b as usize].clone()).collect();
            t.push(Hf::from_sorted(members));
        }
        t
    })
}

fn interned() -> &'static Mutex<HashMap<Vec<usize>, Hf>> {
    static T: OnceLock<Mutex<HashMap<Vec<usize>, Hf>>> = OnceLock::new();
    T.get_or_init(Default::default)
}

impl Hf {
    fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// The unique node with these (sorted, distinct, interned) members.
    fn from_sorted(members: Vec<Hf>) -> Hf {
        let key: Vec<usize> = members.iter().map(Hf::addr).collect();
        let mut table = interned().lock().unwrap();
        if let Some(x) = table.get(&key) {
            return x.clone();
        }
        let x = Hf::build(members);
        table.insert(key, x.clone());
        x
    }

    fn build(members: Vec<Hf>) -> Hf {
        let mut h = DefaultHasher::new();
        members.len().hash(&mut h);
        let mut small = Some(0u64);
        for m in &members {
            m.0.hash.hash(&mut h);
            small = match (small, m.to_u64()) {
                (Some(acc), Some(p)) if p < 64 => Some(acc | 1 << p),
                _ => None,
            };
        }
        // the largest member has the largest rank
        let rank = members.last().map_or(0, |m| m.0.rank + 1);
        Hf(Arc::new(Node { members: members.into_boxed_slice(), hash: h.finish(), small, rank }))
    }

    pub fn empty() -> Hf {
        small_table()[0].clone()
    }

    pub fn from_u64(n: u64) -> Hf {
        if n < 64 {
            return small_table()[n as usize].clone();
        }
        let t = small_table();
        Hf::from_sorted((0..64).filter(|b| n >> b & 1 == 1).map(|b| t[b].clone()).collect())
    }

    pub fn from_members(members: impl IntoIterator<Item = Hf>) -> Hf {
        let mut v: Vec<Hf> = members.into_iter().collect();
        v.sort();
        v.dedup();
        if v.iter().all(|m| m.to_u64().is_some_and(|p| p < 64)) {
            let n = v.iter().fold(0u64, |acc, m| acc | 1 << m.to_u64().unwrap());
            return Hf::from_u64(n);
        }
        Hf::from_sorted(v)
    }

    pub fn singleton(x: Hf) -> Hf {
        Hf::from_members([x])
    }

    pub fn members(&self) -> &[Hf] {
        &self.0.members
    }

    pub fn len(&self) -> usize {
        self.0.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.members.is_empty()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.small
    }

    pub fn max_member(&self) -> Option<&Hf> {
        self.0.members.last()
    }

    pub fn contains(&self, x: &Hf) -> bool {
        // a member is strictly below the set, so small sets only hold small members
        if let (Some(s), Some(v)) = (self.to_u64(), x.to_u64()) {
            return v < 64 && s >> v & 1 == 1;
        }
        self.0.members.binary_search(x).is_ok()
    }

    /// `x ~ y` iff `x = y`, `x ∈ y` or `y ∈ x`.
    pub fn adjacent(&self, other: &Hf) -> bool {
        self == other || self.contains(other) || other.contains(self)
    }

    /// Nesting depth (`rank(∅) = 0`).
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// Rough size measure: total nodes reachable, counted with repetition
    /// up to `cap`.
    pub fn weight(&self, cap: usize) -> usize {
        fn go(x: &Hf, budget: &mut usize) {
            if *budget == 0 {
                return;
            }
            *budget -= 1;
            if x.to_u64().is_some() {
                return;
            }
            for m in x.members() {
                go(m, budget);
            }
        }
        let mut budget = cap;
        go(self, &mut budget);
        cap - budget
    }
}

impl PartialEq for Hf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Hf {}

impl Hash for Hf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl Ord for Hf {
    /// Numeric order of the coded naturals.
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match (self.to_u64(), other.to_u64()) {
            (Some(a), Some(b)) => return a.cmp(&b),
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            _ => {}
        }
        // a higher rank means a strictly larger number
        match self.0.rank.cmp(&other.0.rank) {
            Ordering::Equal => {}
            o => return o,
        }
        // equal members are the same node, so only one chain of unequal
        // members is ever descended
        let (a, b) = (self.members(), other.members());
        let mut o = a.len().cmp(&b.len());
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                d => {
                    o = d;
                    break;
                }
            }
        }
        o
    }
}

impl PartialOrd for Hf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Hf {
    /// Decimal below `2^64`, otherwise a sum of distinct powers of two in
    /// ascending order, e.g. `2^7+2^(2^7)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.to_u64() {
            return write!(f, "{n}");
        }
        for (i, m) in self.members().iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match m.to_u64() {
                Some(p) => write!(f, "2^{p}")?,
                None => write!(f, "2^({m})")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::input(format!("bad vertex at offset {}: {what}", self.pos))
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse().map_err(|_| self.err("expected a number below 2^64"))
    }

    /// Members of the set denoted by a `+`-separated sum.
    fn sum(&mut self) -> Result<Vec<Hf>> {
        let mut members = Vec::new();
        loop {
            if self.s[self.pos..].starts_with(b"2^") {
                self.pos += 2;
                let exp = if self.s.get(self.pos) == Some(&b'(') {
                    self.pos += 1;
                    let inner = Hf::from_members(self.sum()?);
                    if self.s.get(self.pos) != Some(&b')') {
                        return Err(self.err("expected ')'"));
                    }
                    self.pos += 1;
                    inner
                } else {
                    Hf::from_u64(self.number()?)
                };
                members.push(exp);
            } else {
                let n = self.number()?;
                members.extend(Hf::from_u64(n).members().iter().cloned());
            }
            if self.s.get(self.pos) == Some(&b'+') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let mut sorted = members.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != members.len() {
            return Err(self.err("powers of two in a sum must be distinct"));
        }
        Ok(members)
    }
}

impl FromStr for Hf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Hf> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::input("empty vertex"));
        }
        let mut p = Parser { s: compact.as_bytes(), pos: 0 };
        let members = p.sum()?;
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Hf::from_members(members))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HfJson {
    Small(u64),
    Large(String),
}

impl Serialize for Hf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_u64() {
            Some(n) => HfJson::Small(n),
            None => HfJson::Large(self.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match HfJson::deserialize(d)? {
            HfJson::Small(n) => Ok(Hf::from_u64(n)),
            HfJson::Large(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_round_trip() {
        for n in [0u64, 1, 2, 7, 63, 64, 1000, u64::MAX] {
            let x = Hf::from_u64(n);
            assert_eq!(x.to_u64(), Some(n));
            let members: Vec<u64> = x.members().iter().map(|m| m.to_u64().unwrap()).collect();
            let expect: Vec<u64> = (0..64).filter(|b| n >> b & 1 == 1).collect();
            assert_eq!(members, expect);
        }
    }

    #[test]
    fn order_matches_numeric_order_on_u64() {
        let xs = [0u64, 1, 5, 6, 64, 65, 1 << 40, u64::MAX];
        for a in xs {
            for b in xs {
                assert_eq!(Hf::from_u64(a).cmp(&Hf::from_u64(b)), a.cmp(&b));
            }
        }
    }

    #[test]
    fn large_values_print_and_parse() {
        let big = Hf::singleton(Hf::from_u64(64));
        assert_eq!(big.to_u64(), None);
        assert_eq!(big.to_string(), "2^64");
        let x = Hf::from_members([Hf::from_u64(7), Hf::from_u64(64), big.clone()]);
        let s = x.to_string();
        assert_eq!(s, "2^7+2^64+2^(2^64)");
        assert_eq!(s.parse::<Hf>().unwrap(), x);
        assert!(big > Hf::from_u64(u64::MAX));
        assert!(x > big);
        assert_eq!("5+2^3".parse::<Hf>().unwrap(), Hf::from_u64(13));
        assert!("1+1".parse::<Hf>().is_err());
        assert!("2^(".parse::<Hf>().is_err());
    }

    #[test]
    fn adjacency_is_membership() {
        let n = |v| Hf::from_u64(v);
        assert!(n(0).adjacent(&n(1)));
        assert!(!n(0).adjacent(&n(2)));
        assert!(n(5).adjacent(&n(5)));
        assert!(n(2).adjacent(&n(4)));
        let t = Hf::singleton(n(100));
        assert!(t.adjacent(&n(100)));
        assert!(!t.adjacent(&n(99)));
    }

    #[test]
    fn json_form() {
        let big = Hf::singleton(Hf::from_u64(64));
        assert_eq!(serde_json::to_string(&Hf::from_u64(9)).unwrap(), "9");
        assert_eq!(serde_json::to_string(&big).unwrap(), "\"2^64\"");
        let back: Hf = serde_json::from_str("\"2^64\"").unwrap();
        assert_eq!(back, big);
    }
}
