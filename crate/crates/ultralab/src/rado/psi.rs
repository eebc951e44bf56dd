//! A canonical isomorphism `ψ` from the standard graph to the word graph,
//! built by greedy back-and-forth: even steps send the least unmatched
//! number to the shortlex-least fitting word, odd steps send the least
//! unmatched word to the least fitting number.

use std::collections::HashMap;

use serde::Serialize;

use super::standard::std_edge;
use super::words::{least_word, word_edge, Word};
use crate::error::{Budget, Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct IsoTable {
    pairs: Vec<(u64, Word)>,
    #[serde(skip)]
    fwd: HashMap<u64, Word>,
    #[serde(skip)]
    bwd: HashMap<Word, u64>,
    #[serde(skip)]
    budget: Budget,
}

/// Longest word considered in a forth step.
const MAX_WORD_LEN: usize = 4096;

impl IsoTable {
    pub fn new(budget: Budget) -> Self {
        IsoTable { pairs: Vec::new(), fwd: HashMap::new(), bwd: HashMap::new(), budget }
    }

    /// Matched pairs in construction order.
    pub fn pairs(&self) -> &[(u64, Word)] {
        &self.pairs
    }

    pub fn steps(&self) -> usize {
        self.pairs.len()
    }

    pub fn step(&mut self) -> Result<(u64, Word)> {
        let (n, w) = if self.pairs.len() % 2 == 0 {
            let n = (0..).find(|n| !self.fwd.contains_key(n)).unwrap();
            (n, self.find_word(n)?)
        } else {
            let w = (0..).map(Word::from_index).find(|w| !self.bwd.contains_key(w)).unwrap();
            (self.find_std(&w)?, w)
        };
        self.insert(n, w.clone())?;
        Ok((n, w))
    }

    fn insert(&mut self, n: u64, w: Word) -> Result<()> {
        for (m, v) in &self.pairs {
            if std_edge(n, *m) != word_edge(&w, v) {
                return Err(Error::Search(format!("pair ({n}, {w}) breaks the adjacency pattern at ({m}, {v})")));
            }
        }
        self.fwd.insert(n, w.clone());
        self.bwd.insert(w.clone(), n);
        self.pairs.push((n, w));
        Ok(())
    }

    fn find_word(&mut self, n: u64) -> Result<Word> {
        let constraints: Vec<(Word, bool)> = self.pairs.iter().map(|(m, v)| (v.clone(), std_edge(n, *m))).collect();
        let bwd = &self.bwd;
        least_word(&constraints, None, &|u| bwd.contains_key(u), MAX_WORD_LEN, &mut self.budget)
    }

    /// Least unmatched `x` with `std_edge(x, m) == word_edge(w, ψ(m))` for
    /// every matched `m`. Small `x` are tried directly; above every matched
    /// vertex the pattern fixes the bits of `x` at matched positions, and the
    /// least such `x` is found by carrying.
    fn find_std(&mut self, w: &Word) -> Result<u64> {
        let req: Vec<(u64, bool)> = self.pairs.iter().map(|(m, v)| (*m, word_edge(w, v))).collect();
        let fits = |x: u64| !self.fwd.contains_key(&x) && req.iter().all(|&(m, a)| std_edge(x, m) == a);
        const DIRECT: u64 = 130;
        for x in 0..DIRECT {
            self.budget.tick("std search")?;
            if fits(x) {
                return Ok(x);
            }
        }
        let mut mask = 0u64;
        let mut base = 0u64;
        let mut top = 0u64;
        for &(m, a) in &req {
            if a {
                if m >= 64 {
                    return Err(Error::Limit(format!("a vertex adjacent to {m} needs more than 64 bits")));
                }
                base |= 1 << m;
                top = top.max(m + 1);
            }
            if m < 64 {
                mask |= 1 << m;
            }
        }
        let overflow = || Error::Limit("standard vertex exceeds 64 bits".to_string());
        let mut x = DIRECT.max(top);
        loop {
            self.budget.tick("std search")?;
            let diff = (x & mask) ^ base;
            if diff == 0 {
                if fits(x) {
                    return Ok(x);
                }
                x = x.checked_add(1).ok_or_else(overflow)?;
                continue;
            }
            let p = 63 - diff.leading_zeros();
            let low = (1u64 << p) - 1;
            x = if base >> p & 1 == 1 {
                (x >> p | 1) << p | (base & low)
            } else {
                ((x >> p).checked_add(1).ok_or_else(overflow)?).checked_shl(p).ok_or_else(overflow)?
            };
        }
    }

    /// Runs the construction until `n` is matched.
    pub fn psi(&mut self, n: u64) -> Result<Word> {
        while !self.fwd.contains_key(&n) {
            self.step()?;
        }
        Ok(self.fwd[&n].clone())
    }

    pub fn psi_inv(&mut self, w: &Word) -> Result<u64> {
        while !self.bwd.contains_key(w) {
            self.step()?;
        }
        Ok(self.bwd[w])
    }
}
