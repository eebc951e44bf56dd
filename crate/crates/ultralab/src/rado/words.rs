//! The word graph on `{0,1}*`: shortlex index `#`, the sequence `φ`, the
//! edge rule and the homomorphism `Ω(w) = φ(|w|)` onto the standard graph.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::standard::std_edge;
use crate::error::{Budget, Error, Result};

/// A finite word over `{0,1}`, ordered shortlex (which is the `#` order).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<bool>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word with shortlex index `i`.
    pub fn from_index(i: u64) -> Word {
        let len = 63 - (i + 1).leading_zeros() as usize;
        let value = i + 1 - (1u64 << len);
        Word((0..len).map(|k| value >> (len - 1 - k) & 1 == 1).collect())
    }

    /// `#(w)` if it fits in a `u64`.
    pub fn index_u64(&self) -> Option<u64> {
        if self.len() >= 63 {
            return None;
        }
        let value = self.0.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        Some((1u64 << self.len()) - 1 + value)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Bits as `0`/`1`; the empty word is `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "e" || s == "ε" || s.is_empty() {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::input(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `#(w) = 2^|w| - 1 + value(w)`, reading the first letter as most
/// significant.
pub fn word_index(w: &Word) -> BigUint {
    let mut value = BigUint::from(0u32);
    for &b in &w.0 {
        value <<= 1;
        if b {
            value += 1u32;
        }
    }
    (BigUint::one() << w.len()) - 1u32 + value
}

/// `φ(n) = n - t(t+1)/2` for the largest `t` with `t(t+1)/2 <= n`.
pub fn phi(n: u64) -> u64 {
    let mut t = (((8.0 * n as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while tri(t + 1) <= n {
        t += 1;
    }
    while tri(t) > n {
        t -= 1;
    }
    n - tri(t)
}

fn tri(t: u64) -> u64 {
    t * (t + 1) / 2
}

/// Letter `i`, padded with zeros.
pub fn word_bit(w: &Word, i: u64) -> bool {
    usize::try_from(i).ok().and_then(|i| w.0.get(i).copied()).unwrap_or(false)
}

fn bit_at_index_of(w: &Word, v: &Word) -> bool {
    match v.index_u64() {
        Some(i) => word_bit(w, i),
        None => false,
    }
}

/// For `#v <= #w`: `v = w`, or `(φ|v|, φ|w|)` is a standard edge and
/// `w_{#v} = 1`. Symmetric.
pub fn word_edge(v: &Word, w: &Word) -> bool {
    let (lo, hi) = if v <= w { (v, w) } else { (w, v) };
    lo == hi || (std_edge(phi(lo.len() as u64), phi(hi.len() as u64)) && bit_at_index_of(hi, lo))
}

pub fn omega_word(w: &Word) -> u64 {
    phi(w.len() as u64)
}

fn check_problem(a: &[Word], b: &[Word], c: u64) -> Result<()> {
    if let Some(x) = a.iter().find(|x| b.contains(x)) {
        return Err(Error::input(format!("word {x} is required both adjacent and non-adjacent")));
    }
    if let Some(x) = a.iter().find(|x| !std_edge(c, omega_word(x))) {
        return Err(Error::input(format!("target {c} is not adjacent to Ω({x}) = {}", omega_word(x))));
    }
    Ok(())
}

/// Longest word the recipe will build.
pub const MAX_RECIPE_LEN: u64 = 1 << 20;

/// The closing-argument recipe: the least `n` above every `#`-index in
/// `A ∪ B` with `φ(n) = c`, and the word of length `n` with ones exactly at
/// the indices of `A`.
pub fn witness_recipe(a: &[Word], b: &[Word], c: u64) -> Result<Word> {
    check_problem(a, b, c)?;
    let mut floor = 0u64;
    for v in a.iter().chain(b) {
        let i = v.index_u64().filter(|&i| i < MAX_RECIPE_LEN).ok_or_else(|| {
            Error::Limit(format!("recipe word for index #{v} would exceed length {MAX_RECIPE_LEN}"))
        })?;
        floor = floor.max(i + 1);
    }
    let mut t = c;
    while tri(t) + c < floor {
        t += 1;
    }
    let n = tri(t) + c;
    let mut bits = vec![false; n as usize];
    for v in a {
        bits[v.index_u64().unwrap() as usize] = true;
    }
    Ok(Word(bits))
}

/// The shortlex-least word `u` outside `exclude` with
/// `word_edge(u, v) == want` for every `(v, want)` in `constraints` and, if
/// given, `Ω(u) = target`.
///
/// Lengths are tried in order. At length `L`, a constraint word `v` with
/// `#v < L` and `|v| < L` pins the letter `u_{#v}`, and a shorter word with
/// `#v >= L` can never be adjacent; the remaining letters are enumerated in
/// lexicographic order and every candidate is checked directly.
pub fn least_word(
    constraints: &[(Word, bool)],
    target: Option<u64>,
    exclude: &dyn Fn(&Word) -> bool,
    max_len: usize,
    budget: &mut Budget,
) -> Result<Word> {
    'lengths: for len in 0..=max_len {
        budget.tick("least word search")?;
        let om = phi(len as u64);
        if target.is_some_and(|c| c != om) {
            continue;
        }
        let mut forced: Vec<Option<bool>> = vec![None; len];
        for (v, want) in constraints {
            if v.len() >= len {
                continue;
            }
            let related = std_edge(phi(v.len() as u64), om);
            let idx = v.index_u64().filter(|&i| (i as usize) < len);
            match (want, related, idx) {
                (true, false, _) | (true, true, None) => continue 'lengths,
                (true, true, Some(i)) => {
                    if forced[i as usize] == Some(false) {
                        continue 'lengths;
                    }
                    forced[i as usize] = Some(true);
                }
                (false, true, Some(i)) => {
                    if forced[i as usize] == Some(true) {
                        continue 'lengths;
                    }
                    forced[i as usize] = Some(false);
                }
                (false, _, _) => {}
            }
        }
        let free: Vec<usize> = (0..len).filter(|&i| forced[i].is_none()).collect();
        let mut bits: Vec<bool> = forced.iter().map(|f| f.unwrap_or(false)).collect();
        let mut counter = vec![false; free.len()];
        loop {
            budget.tick("least word search")?;
            for (k, &p) in free.iter().enumerate() {
                bits[p] = counter[k];
            }
            let u = Word(bits.clone());
            if !exclude(&u) && constraints.iter().all(|(v, want)| word_edge(&u, v) == *want) {
                return Ok(u);
            }
            // next assignment of the free letters, leftmost most significant
            match counter.iter().rposition(|b| !b) {
                Some(k) => {
                    counter[k] = true;
                    for b in &mut counter[k + 1..] {
                        *b = false;
                    }
                }
                None => break,
            }
        }
    }
    Err(Error::Search(format!("no word of length <= {max_len} meets the constraints")))
}

/// The shortlex-least word outside `A ∪ B` with `Ω(u) = c`, adjacent to all
/// of `A` and none of `B`.
pub fn least_witness(a: &[Word], b: &[Word], c: u64, budget: &mut Budget) -> Result<Word> {
    check_problem(a, b, c)?;
    let recipe = witness_recipe(a, b, c)?;
    let constraints: Vec<(Word, bool)> =
        a.iter().map(|v| (v.clone(), true)).chain(b.iter().map(|v| (v.clone(), false))).collect();
    least_word(&constraints, Some(c), &|u| a.contains(u) || b.contains(u), recipe.len(), budget)
}
