//! The standard Rado graph on ℕ (edge iff one endpoint is a binary digit
//! position of the other, loops everywhere) and an explicit universal
//! surjective endomorphism `Ω` of it, with a section `σ` and a witness recipe.
//!
//! Read a vertex as the hereditarily finite set of its digit positions. With
//! `m = max x` and `D = {Ω(p) : p ∈ x}`:
//!
//! * `Ω(∅) = ∅`, `Ω({p}) = Ω(p)`;
//! * if `|x|` is even and `Ω(m)` is adjacent to every element of `D`,
//!   then `Ω(x) = Ω(m)`;
//! * otherwise `Ω(x) = D`.
//!
//! Every output is adjacent to every `Ω(p)` with `p ∈ x` (either by
//! membership in `D` or by the adjacency test), so `Ω` is a homomorphism.
//!
//! Sections. Each vertex `c` gets five distinct preimages `P(c)`, the first
//! of which is the canonical section `σ(c)`; write `j* = max c`:
//!
//! * `P(∅) = 0, 1, 2, 3, 4`;
//! * for `c = {j}` with `q = P(j)`: the 3-sets `{q0,q1,q2}`, `{q0,q1,q3}`,
//!   `{q0,q1,q4}`, `{q0,q2,q3}`, `{q0,q2,q4}`;
//! * for `|c|` odd and at least 3: `{σ(j) : j ≠ j*} ∪ {P(j*)_k}`, k = 0..4;
//! * for `|c|` even: `{σ(j) : j ∈ c} ∪ {P(j*)_k}` for k = 1..4, and
//!   `{σ(j) : j ∈ c} ∪ {P(min c)_1}`.
//!
//! All of these have odd size at least 3 and their members map onto `c`, so
//! `Ω` sends them to `c`. Nesting depth grows by at most 3 per application
//! (a plain `{s, {s}, {{s}}}` rule would triple it), and `σ(c)` contains
//! `σ(j)` for every `j ∈ c`, so `σ` preserves adjacency.
//!
//! Universality: given finite disjoint `A`, `B` and `c` adjacent to every
//! `Ω(a)`, let `t = σ(c)` and walk the tower `t, {t}, {{t}}, …` (all mapped
//! to `c`) past `max A`. Adding one or two tower elements to `A` gives a set
//! `x` of even size whose top maps to `c`, which is adjacent to all of
//! `D = Ω(A) ∪ {c}`; hence `Ω(x) = c` and `A ⊆ x`. Walking on until `x`
//! avoids `B` terminates: once `t` passes every vertex in sight, `x` is too
//! large to touch `B`.

use rustc_hash::FxHashMap as HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::hf::Hf;
use crate::error::{Error, Result};

/// Vertices below this bound are tried in order before the recipe.
pub const SCAN_LIMIT: u64 = 4096;

pub fn std_edge(n: u64, m: u64) -> bool {
    let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
    lo == hi || (lo < 64 && hi >> lo & 1 == 1)
}

fn low_table() -> &'static [u64; 64] {
    static T: OnceLock<[u64; 64]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [0u64; 64];
        for n in 0..64 {
            t[n as usize] = omega_bits(n, &t);
        }
        t
    })
}

fn omega_bits(n: u64, table: &[u64; 64]) -> u64 {
    let count = n.count_ones();
    if count == 0 {
        return 0;
    }
    let top = 63 - n.leading_zeros() as u64;
    let om = table[top as usize];
    if count == 1 {
        return om;
    }
    let mut d = 0u64;
    let mut all_adjacent = true;
    for p in (0..64).filter(|p| n >> p & 1 == 1) {
        let v = table[p as usize];
        all_adjacent &= std_edge(om, v);
        d |= 1 << v;
    }
    if count % 2 == 0 && all_adjacent {
        om
    } else {
        d
    }
}

/// `Ω` on machine-size vertices. `Ω(n) ≤ n`, so this never overflows.
pub fn omega_std(n: u64) -> u64 {
    omega_bits(n, low_table())
}

fn scan_table() -> &'static [(Hf, u64)] {
    static T: OnceLock<Vec<(Hf, u64)>> = OnceLock::new();
    T.get_or_init(|| (0..SCAN_LIMIT).map(|n| (Hf::from_u64(n), omega_std(n))).collect())
}

fn omega_memo() -> &'static Mutex<HashMap<Hf, Hf>> {
    static M: OnceLock<Mutex<HashMap<Hf, Hf>>> = OnceLock::new();
    M.get_or_init(Default::default)
}

pub fn omega(x: &Hf) -> Hf {
    if let Some(n) = x.to_u64() {
        return Hf::from_u64(omega_std(n));
    }
    if let Some(v) = omega_memo().lock().unwrap().get(x) {
        return v.clone();
    }
    let members = x.members();
    let result = if members.len() == 1 {
        omega(&members[0])
    } else {
        let d: Vec<Hf> = members.iter().map(omega).collect();
        let om = d.last().unwrap().clone();
        if members.len() % 2 == 0 && d.iter().all(|e| om.adjacent(e)) {
            om
        } else {
            Hf::from_members(d)
        }
    };
    omega_memo().lock().unwrap().insert(x.clone(), result.clone());
    result
}

fn preimage_memo() -> &'static Mutex<HashMap<Hf, Arc<[Hf; 5]>>> {
    static M: OnceLock<Mutex<HashMap<Hf, Arc<[Hf; 5]>>>> = OnceLock::new();
    M.get_or_init(Default::default)
}

/// Five distinct preimages of `c`, the first being `σ(c)`.
pub fn preimages(c: &Hf) -> Arc<[Hf; 5]> {
    if let Some(v) = preimage_memo().lock().unwrap().get(c) {
        return v.clone();
    }
    let members = c.members();
    let set = |v: Vec<Hf>| Hf::from_members(v);
    let result: [Hf; 5] = if members.is_empty() {
        std::array::from_fn(|k| Hf::from_u64(k as u64))
    } else if members.len() == 1 {
        let q = preimages(&members[0]);
        let pick = |a: usize, b: usize, d: usize| set(vec![q[a].clone(), q[b].clone(), q[d].clone()]);
        [pick(0, 1, 2), pick(0, 1, 3), pick(0, 1, 4), pick(0, 2, 3), pick(0, 2, 4)]
    } else {
        let sections: Vec<Hf> = members.iter().map(section).collect();
        let top = preimages(members.last().unwrap());
        if members.len() % 2 == 1 {
            let rest = &sections[..sections.len() - 1];
            std::array::from_fn(|k| set(rest.iter().cloned().chain([top[k].clone()]).collect()))
        } else {
            let low = preimages(&members[0]);
            let with = |extra: &Hf| set(sections.iter().cloned().chain([extra.clone()]).collect());
            [with(&top[1]), with(&top[2]), with(&top[3]), with(&top[4]), with(&low[1])]
        }
    };
    let result = Arc::new(result);
    preimage_memo().lock().unwrap().insert(c.clone(), result.clone());
    result
}

/// The canonical section `σ`, with `Ω(σ(c)) = c`.
pub fn section(c: &Hf) -> Hf {
    preimages(c)[0].clone()
}

pub fn section_std(c: u64) -> Hf {
    section(&Hf::from_u64(c))
}

/// Checks the extension problem: `A`, `B` disjoint and `c ~ Ω(a)` for all
/// `a ∈ A`.
pub fn check_witness_problem(a: &[Hf], b: &[Hf], c: &Hf) -> Result<()> {
    if let Some(x) = a.iter().find(|x| b.contains(x)) {
        return Err(Error::input(format!("vertex {x} is required both adjacent and non-adjacent")));
    }
    if let Some(x) = a.iter().find(|x| !c.adjacent(&omega(x))) {
        return Err(Error::input(format!("target {c} is not adjacent to Ω({x}) = {}", omega(x))));
    }
    Ok(())
}

fn is_witness(x: &Hf, a: &[Hf], b: &[Hf], avoid: &[Hf]) -> bool {
    !a.contains(x)
        && !b.contains(x)
        && !avoid.contains(x)
        && a.iter().all(|v| x.adjacent(v))
        && b.iter().all(|v| !x.adjacent(v))
}

/// A vertex `x ∉ A ∪ B ∪ avoid` with `Ω(x) = c`, adjacent to all of `A` and
/// to none of `B`. Vertices below [`SCAN_LIMIT`] are tried first in numeric
/// order when `c` is small; otherwise the tower recipe is used.
pub fn witness(a: &[Hf], b: &[Hf], c: &Hf, avoid: &[Hf]) -> Result<Hf> {
    check_witness_problem(a, b, c)?;
    if let Some(cv) = c.to_u64() {
        for (x, om) in scan_table() {
            if *om == cv && is_witness(x, a, b, avoid) {
                return Ok(x.clone());
            }
        }
    }
    let x = witness_recipe(a, b, c, avoid);
    debug_assert!(omega(&x) == *c && is_witness(&x, a, b, avoid));
    Ok(x)
}

/// The tower recipe alone (no scan). Caller guarantees the problem is valid.
pub fn witness_recipe(a: &[Hf], b: &[Hf], c: &Hf, avoid: &[Hf]) -> Hf {
    let mut members: Vec<Hf> = a.to_vec();
    members.sort();
    members.dedup();
    let mut t = section(c);
    if let Some(top) = members.last() {
        while t <= *top {
            t = Hf::singleton(t);
        }
    }
    // t above A makes it the top member; climbing past B and avoid as well
    // always works, but the first candidate usually already does
    loop {
        let mut x = members.clone();
        x.push(t.clone());
        if x.len() % 2 == 1 {
            x.push(Hf::singleton(t.clone()));
        }
        let x = Hf::from_members(x);
        if is_witness(&x, a, b, avoid) {
            return x;
        }
        t = Hf::singleton(t);
    }
}

/// Least `n < limit` with `Ω(n) = c`, from a lazily built fiber index.
pub fn small_preimages(c: u64, limit: usize) -> &'static [u64] {
    static FIBERS: OnceLock<HashMap<u64, Vec<u64>>> = OnceLock::new();
    const N: u64 = 1 << 16;
    let fibers = FIBERS.get_or_init(|| {
        let mut m: HashMap<u64, Vec<u64>> = HashMap::default();
        for n in 0..N {
            m.entry(omega_std(n)).or_default().push(n);
        }
        m
    });
    match fibers.get(&c) {
        Some(v) => &v[..v.len().min(limit)],
        None => &[],
    }
}
