//! One pass/fail line per acceptance criterion. Every expected value is
//! recomputed here from first principles (bit tests, prefix comparison,
//! integer cross-multiplication) rather than read back from the library.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ultralab::amalgamation::{
    aep_instances, check_aep, check_strict, default_bound, gamma, gamma_instance, spans, Outcome,
};
use ultralab::cochain::{
    distance, is_strong_at, rel_value_lower, rel_value_upper, Branch, FiniteCochain, LevelSystem, Strongness,
};
use ultralab::dynamics::{conjugate_extend, shift_left, shift_level, shift_right, DiscreteIso};
use ultralab::linorder::{lex_branch, lex_compare, order_value, project, rat, Rational};
use ultralab::rado::pro_rado::{branch, random_branch, random_preimage, random_sibling};
use ultralab::rado::words::witness_recipe;
use ultralab::rado::{
    free_witness, least_witness, omega, omega_std, phi, realize, section_std, word_index, ExtensionSpec, Hf,
    IsoTable, RadoBranch, Word,
};
use ultralab::seqlim::{check_triangle_identities, epsilon_is_iso, random_branches};
use ultralab::structure::Class;
use ultralab::{Budget, Level};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---- oracles ----

fn std_edge_oracle(n: u64, m: u64) -> bool {
    let (lo, hi) = (n.min(m), n.max(m));
    lo == hi || (lo < 64 && hi >> lo & 1 == 1)
}

/// A002262: n minus the largest triangular number not above it.
fn phi_oracle(n: u64) -> u64 {
    let mut t = 0;
    while (t + 1) * (t + 2) / 2 <= n {
        t += 1;
    }
    n - t * (t + 1) / 2
}

/// `#w = 2^|w| - 1 + value(w)`, when it fits.
fn index_oracle(w: &str) -> Option<u64> {
    if w.is_empty() {
        return Some(0);
    }
    if w.len() >= 63 {
        return None;
    }
    Some((1u64 << w.len()) - 1 + u64::from_str_radix(w, 2).unwrap())
}

/// `#` orders words by length, then by binary value.
fn index_cmp(v: &str, w: &str) -> Ordering {
    v.len().cmp(&w.len()).then(v.cmp(w))
}

fn letter(w: &str, i: Option<u64>) -> bool {
    i.is_some_and(|i| w.as_bytes().get(i as usize) == Some(&b'1'))
}

/// `v ~ w` iff `v = w`, or, for `#v <= #w`, `φ(|v|) ~ φ(|w|)` and `w_{#v} = 1`.
fn word_edge_oracle(v: &str, w: &str) -> bool {
    let (v, w) = if index_cmp(v, w).is_le() { (v, w) } else { (w, v) };
    v == w || std_edge_oracle(phi_oracle(v.len() as u64), phi_oracle(w.len() as u64)) && letter(w, index_oracle(v))
}

fn bits(w: &Word) -> String {
    w.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Hereditarily finite sets: `x ~ y` iff `x = y`, `x ∈ y` or `y ∈ x`.
fn hf_edge_oracle(x: &Hf, y: &Hf) -> bool {
    x == y || x.members().contains(y) || y.members().contains(x)
}

/// Distance from the first index below `depth` where the branches differ.
fn dist_oracle<S: LevelSystem>(x: &Branch<S>, y: &Branch<S>, depth: usize) -> Level {
    let (a, b) = (x.prefix_to(depth).unwrap(), y.prefix_to(depth).unwrap());
    match (0..depth).find(|&i| a[i] != b[i]) {
        Some(i) => Level::Val(i as u32),
        None => Level::Zero,
    }
}

/// Lower value of the edge relation: the first level where the pair is not
/// adjacent.
fn rado_rel_oracle(x: &RadoBranch, y: &RadoBranch, depth: usize) -> Level {
    let (a, b) = (x.prefix_to(depth).unwrap(), y.prefix_to(depth).unwrap());
    match (0..=depth).find(|&i| !hf_edge_oracle(&a[i], &b[i])) {
        Some(i) => Level::Val(i as u32),
        None => Level::Zero,
    }
}

/// `2^-i` exactly, `0` for `Zero`.
fn real(l: Level) -> f64 {
    match l {
        Level::Zero => 0.0,
        Level::Val(i) => (0.5f64).powi(i as i32),
    }
}

// ---- criteria ----

fn c1_tables() -> Check {
    let phis: Vec<String> = (0..10).map(|n| phi(n).to_string()).collect();
    let phis = phis.join(",");
    ensure(phis == "0,0,1,0,1,2,0,1,2,3", || format!("φ(0..9) = {phis}"))?;
    let words = ["e", "0", "1", "00", "01", "10", "11"];
    let idx: Vec<String> =
        words.iter().map(|w| word_index(&w.parse::<Word>().unwrap()).to_string()).collect();
    let idx = idx.join(",");
    ensure(idx == "0,1,2,3,4,5,6", || format!("# table = {idx}"))?;
    Ok("φ(0..9) and #(ε..11) reproduced".into())
}

fn c2_k2() -> Check {
    let c = Arc::new(FiniteCochain::k2_example());
    let a = Branch::new(c.clone(), vec![0]).map_err(err)?;
    let b = Branch::new(c.clone(), vec![1]).map_err(err)?;
    let lower = rel_value_lower(0, &[a.clone(), b.clone()], 4).map_err(err)?;
    ensure(lower == Level::Val(1), || format!("lower value {lower:?}, expected 1/2"))?;
    let upper = rel_value_upper(0, &[a, b], 4).map_err(err)?;
    ensure(upper.value == Level::Val(0) && upper.exact, || format!("upper value {upper:?}, expected exact 1"))?;
    match is_strong_at(&*c, 0, 4).map_err(err)? {
        Strongness::Counterexample { tuple, level: 0, .. } if tuple == vec![0, 1] || tuple == vec![1, 0] => {}
        other => return Err(format!("level 0 verdict {other:?}")),
    }
    Ok("lower 1/2, upper 1 (exact), level 0 not strong".into())
}

fn c3_amalgamation() -> Check {
    let gamma_class = Class::age_of(gamma()).map_err(err)?;
    let v = check_aep(&gamma_class, &gamma_instance(), 4).map_err(err)?;
    ensure(v.outcome == Outcome::NoDefinitive, || format!("Γ AEP outcome {:?}", v.outcome))?;

    let graphs = Class::graphs();
    let instances = aep_instances(&graphs, 3, 3).map_err(err)?;
    for inst in &instances {
        let bound = default_bound(&inst.span.b1, &inst.span.b2).max(inst.t.size());
        let v = check_aep(&graphs, inst, bound).map_err(err)?;
        ensure(v.is_yes(), || format!("graphs AEP {:?} on {}", v.outcome, serde_json::to_string(inst).unwrap()))?;
    }

    let orders = Class::linear_orders();
    let order_instances = aep_instances(&orders, 3, 3).map_err(err)?;
    for inst in &order_instances {
        let bound = default_bound(&inst.span.b1, &inst.span.b2).max(inst.t.size());
        let v = check_aep(&orders, inst, bound).map_err(err)?;
        ensure(v.is_yes(), || format!("orders AEP {:?} on {}", v.outcome, serde_json::to_string(inst).unwrap()))?;
    }
    let mut strict_no = 0;
    let order_spans = spans(&orders, 3).map_err(err)?;
    for span in &order_spans {
        let v = check_strict(&orders, span, default_bound(&span.b1, &span.b2)).map_err(err)?;
        if v.outcome == Outcome::NoDefinitive {
            strict_no += 1;
        }
    }
    ensure(strict_no > 0, || "no linear-order span failed strict amalgamation".into())?;
    Ok(format!(
        "Γ no-definitive; graphs AEP yes on {} instances; orders AEP yes on {}, strict no-definitive on {}/{} spans",
        instances.len(),
        order_instances.len(),
        strict_no,
        order_spans.len()
    ))
}

/// A random branch, or a sibling of `near` at a random level.
fn rado_sample(rng: &mut ChaCha8Rng, near: &RadoBranch, depth: usize) -> RadoBranch {
    if rng.gen_bool(0.3) {
        random_branch(rng, depth)
    } else {
        let k = rng.gen_range(0..depth);
        random_sibling(rng, near, k, depth).unwrap()
    }
}

fn c4_ultrametric() -> Check {
    let depth = 16;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut levels = BTreeSet::new();
    for _ in 0..500 {
        let x = random_branch(&mut rng, depth);
        let y = rado_sample(&mut rng, &x, depth);
        let near = if rng.gen() { &x } else { &y };
        let z = rado_sample(&mut rng, near, depth);
        let d = |a: &RadoBranch, b: &RadoBranch| {
            let got = distance(a, b, depth).unwrap();
            (got, dist_oracle(a, b, depth))
        };
        let (xy, zy, xz) = (d(&x, &y), d(&y, &z), d(&x, &z));
        for (got, want) in [xy, zy, xz] {
            ensure(got == want, || format!("distance {got:?}, prefixes say {want:?}"))?;
            levels.insert(got);
        }
        ensure(real(xz.1) <= real(xy.1).max(real(zy.1)), || format!("strong triangle fails: {xz:?} {xy:?} {zy:?}"))?;
    }
    let mut adjacent = 0;
    for _ in 0..500 {
        let x1 = random_branch(&mut rng, depth);
        // a neighbour of x1 at level 0, so the pair is adjacent for a while
        let x2 = if rng.gen_bool(0.5) { rado_sample(&mut rng, &x1, depth) } else { x1.clone() };
        let y1 = rado_sample(&mut rng, &x1, depth);
        let y2 = rado_sample(&mut rng, &x2, depth);
        let rx = rel_value_lower(0, &[x1.clone(), x2.clone()], depth).map_err(err)?;
        let ry = rel_value_lower(0, &[y1.clone(), y2.clone()], depth).map_err(err)?;
        ensure(rx == rado_rel_oracle(&x1, &x2, depth), || format!("relation value {rx:?} disagrees with adjacency"))?;
        ensure(ry == rado_rel_oracle(&y1, &y2, depth), || format!("relation value {ry:?} disagrees with adjacency"))?;
        if rx != Level::Val(0) {
            adjacent += 1;
        }
        // agreement below `depth` leaves the distance at most 2^-depth
        let d = |a: &RadoBranch, b: &RadoBranch| match dist_oracle(a, b, depth) {
            Level::Zero => real(Level::Val(depth as u32)),
            l => real(l),
        };
        let bound = d(&x1, &y1).max(d(&x2, &y2));
        ensure((real(rx) - real(ry)).abs() <= bound, || format!("1-Lipschitz fails: {rx:?} {ry:?} bound {bound}"))?;
    }
    Ok(format!("500 triples ({} distinct distances), 500 tuple pairs ({adjacent} adjacent at level 0)", levels.len()))
}

/// Whether the composite bond from `depth` down to `i` is onto, from the
/// stored bond tables.
fn composite_onto(c: &FiniteCochain, i: usize, depth: usize) -> bool {
    let mut cur: BTreeSet<u64> = c.level(depth).unwrap().universe().iter().copied().collect();
    for level in (i..depth).rev() {
        let b = c.bond_map(level).unwrap();
        cur = cur.iter().map(|v| b[v]).collect();
    }
    cur.len() == c.level(i).unwrap().size()
}

fn c5_adjunction() -> Check {
    let depth = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut iso_count = 0;
    for k in 0..20 {
        let surjective = k < 10;
        let c = Arc::new(FiniteCochain::random(&mut rng, depth, 4, surjective));
        let bonds_onto = (0..depth).all(|i| {
            let b = c.bond_map(i).unwrap();
            b.values().collect::<BTreeSet<_>>().len() == c.level(i).unwrap().size()
        });
        ensure(bonds_onto == surjective, || format!("generator returned a cochain with bonds onto = {bonds_onto}"))?;
        let verdicts = epsilon_is_iso(&c, depth).map_err(err)?;
        for v in &verdicts {
            let want = composite_onto(&c, v.level, depth);
            ensure(v.iso == want, || format!("cochain {k}: ε at level {} iso = {}, composite onto = {want}", v.level, v.iso))?;
        }
        let all_iso = verdicts.iter().all(|v| v.iso);
        ensure(all_iso == surjective, || format!("cochain {k}: ε iso = {all_iso}, bonds onto = {surjective}"))?;
        iso_count += all_iso as usize;
        let samples = random_branches(&mut rng, &c, depth, 100).map_err(err)?;
        let report = check_triangle_identities(&c, &samples, depth).map_err(err)?;
        ensure(report.pass(), || format!("cochain {k}: triangle identities fail"))?;
    }
    Ok(format!("ε iso on {iso_count}/20, exactly the surjective ones; triangle identities on 20×100 samples"))
}

fn c6_extension() -> Check {
    let mut count = 0;
    for code in 0..3u32.pow(8) {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let mut c = code;
        for v in 0..8u64 {
            match c % 3 {
                1 => a.push(v),
                2 => b.push(v),
                _ => {}
            }
            c /= 3;
        }
        let ha: Vec<Hf> = a.iter().map(|&v| Hf::from_u64(v)).collect();
        let hb: Vec<Hf> = b.iter().map(|&v| Hf::from_u64(v)).collect();
        let w = free_witness(&ha, &hb, &[]).map_err(err)?;
        let w = w.to_u64().ok_or_else(|| format!("witness {w} for {a:?}/{b:?} is huge"))?;
        ensure(!a.contains(&w) && !b.contains(&w), || format!("witness {w} is in {a:?} ∪ {b:?}"))?;
        ensure(a.iter().all(|&v| std_edge_oracle(w, v)) && b.iter().all(|&v| !std_edge_oracle(w, v)), || {
            format!("witness {w} wrong for {a:?}/{b:?}")
        })?;
        count += 1;
    }

    let words: Vec<String> = (0..31u64).map(|i| bits(&Word::from_index(i))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = 0;
    while done < 200 {
        let mut pool = words.clone();
        let mut pick = |n: usize, rng: &mut ChaCha8Rng| -> Vec<String> {
            (0..n).map(|_| pool.swap_remove(rng.gen_range(0..pool.len()))).collect()
        };
        let a = pick(rng.gen_range(0..=3), &mut rng);
        let b = pick(rng.gen_range(0..=3), &mut rng);
        let c = rng.gen_range(0..8u64);
        if !a.iter().all(|v| std_edge_oracle(c, phi_oracle(v.len() as u64))) {
            continue;
        }
        let wa: Vec<Word> = a.iter().map(|s| s.parse().unwrap()).collect();
        let wb: Vec<Word> = b.iter().map(|s| s.parse().unwrap()).collect();
        let valid = |u: &Word| {
            let u = bits(u);
            phi_oracle(u.len() as u64) == c
                && !a.contains(&u)
                && !b.contains(&u)
                && a.iter().all(|v| word_edge_oracle(&u, v))
                && b.iter().all(|v| !word_edge_oracle(&u, v))
        };
        let recipe = witness_recipe(&wa, &wb, c).map_err(err)?;
        ensure(valid(&recipe), || format!("recipe {recipe} invalid for A={a:?} B={b:?} c={c}"))?;
        let least = least_witness(&wa, &wb, c, &mut Budget::new(1_000_000)).map_err(err)?;
        ensure(valid(&least), || format!("least witness {least} invalid for A={a:?} B={b:?} c={c}"))?;
        ensure(least <= recipe, || format!("least witness {least} above the recipe {recipe}"))?;
        done += 1;
    }
    Ok(format!("{count} standard-graph problems, 200 word problems (recipe and least witness)"))
}

fn c7_endomorphism() -> Check {
    for n in 0..32u64 {
        for m in 0..32u64 {
            if std_edge_oracle(n, m) {
                let (a, b) = (omega_std(n), omega_std(m));
                ensure(std_edge_oracle(a, b), || format!("edge {n}~{m} maps to non-edge {a},{b}"))?;
            }
        }
    }
    let mut sections = BTreeSet::new();
    for c in 0..8u64 {
        let s = section_std(c);
        ensure(omega(&s) == Hf::from_u64(c), || format!("Ω(section({c})) = {}", omega(&s)))?;
        sections.insert(s);
    }
    ensure(sections.len() == 8, || "sections are not injective".into())?;
    let mut table = IsoTable::new(Budget::new(10_000_000));
    for _ in 0..32 {
        table.step().map_err(err)?;
    }
    let pairs = table.pairs();
    for (n, v) in pairs {
        for (m, w) in pairs {
            ensure(std_edge_oracle(*n, *m) == word_edge_oracle(&bits(v), &bits(w)), || {
                format!("ψ breaks the edge pattern on ({n},{v}) and ({m},{w})")
            })?;
        }
    }
    Ok("Ω edge-preserving below 32, sections of 0..7, ψ on 32 matched pairs".into())
}

fn c8_shift() -> Check {
    let depth = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut zero_outcomes = BTreeSet::new();
    for t in 0..100 {
        let x = random_branch(&mut rng, depth);
        let back = shift_left(&shift_right(&x));
        ensure(back.prefix_to(depth).unwrap() == x.prefix_to(depth).unwrap(), || "T_L∘T_R is not the identity".into())?;
        let back = shift_right(&shift_left(&x));
        ensure(back.prefix_to(depth).unwrap() == x.prefix_to(depth).unwrap(), || "T_R∘T_L is not the identity".into())?;
        let y = match t % 4 {
            // distinct level-0 vertices over the same Ω value
            0 => {
                let x0 = x.at(0).unwrap();
                let y0 = random_preimage(&mut rng, &omega(&x0), Some(&x0));
                branch(vec![y0]).unwrap()
            }
            1 => random_branch(&mut rng, depth),
            2 => x.clone(),
            _ => {
                let k = rng.gen_range(1..depth - 1);
                random_sibling(&mut rng, &x, k, depth).unwrap()
            }
        };
        let before = dist_oracle(&x, &y, depth);
        let right = distance(&shift_right(&x), &shift_right(&y), depth + 1).map_err(err)?;
        let left = distance(&shift_left(&x), &shift_left(&y), depth - 1).map_err(err)?;
        match before {
            Level::Zero => ensure(right == Level::Zero && left == Level::Zero, || "equal branches moved apart".into())?,
            Level::Val(0) => {
                let same_image = omega(&x.at(0).unwrap()) == omega(&y.at(0).unwrap());
                let want = if same_image { Level::Val(1) } else { Level::Val(0) };
                ensure(right == want, || format!("T_R of a distance-1 pair gave {right:?}, expected {want:?}"))?;
                zero_outcomes.insert(right);
            }
            Level::Val(n) => {
                ensure(right == Level::Val(n + 1), || format!("T_R: 2^-{n} became {right:?}"))?;
                ensure(left == Level::Val(n - 1), || format!("T_L: 2^-{n} became {left:?}"))?;
            }
        }
    }
    ensure(zero_outcomes.len() == 2, || format!("distance-1 pairs only produced {zero_outcomes:?}"))?;
    Ok("100 branches: both compositions identity, distance law exact, distance 1 gave both 1 and 1/2".into())
}

/// A random consistent one-point extension of `points`: the new point
/// follows `points[star]` below `k` and differs from it at `k`. Relations
/// below `k` are forced by that. The rest are drawn from `Zero` or levels
/// `k..=max_level`, redrawn until points sharing a vertex get the same
/// adjacency there.
fn random_spec(rng: &mut ChaCha8Rng, points: &[RadoBranch], max_level: u32, depth: usize) -> ExtensionSpec {
    let star = rng.gen_range(0..points.len());
    let k = rng.gen_range(0..=max_level);
    let sp = points[star].prefix_to(depth).unwrap();
    let prefixes: Vec<Vec<Hf>> = points.iter().map(|p| p.prefix_to(depth).unwrap()).collect();
    let distances: Vec<Level> = prefixes
        .iter()
        .map(|pp| Level::Val((0..=depth).find(|&i| sp[i] != pp[i]).map_or(k, |i| (i as u32).min(k))))
        .collect();
    let adjacent_at = |r: Level, i: usize| match r {
        Level::Zero => true,
        Level::Val(r) => i < r as usize,
    };
    loop {
        let relations: Vec<Level> = prefixes
            .iter()
            .map(|pp| match (0..k as usize).find(|&i| !hf_edge_oracle(&sp[i], &pp[i])) {
                Some(i) => Level::Val(i as u32),
                None if rng.gen_bool(0.5) => Level::Zero,
                None => Level::Val(rng.gen_range(k..=max_level)),
            })
            .collect();
        let consistent = (k as usize..=depth).all(|i| {
            (0..points.len()).all(|j| {
                (0..j).all(|l| prefixes[j][i] != prefixes[l][i] || adjacent_at(relations[j], i) == adjacent_at(relations[l], i))
            })
        });
        if consistent {
            return ExtensionSpec { points: points.iter().map(|p| p.literal()).collect(), distances, relations };
        }
    }
}

fn c9_conjugation() -> Check {
    let depth = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ls = Vec::new();
    let mut instances = 0;
    while instances < 20 {
        let size = if instances == 0 { 2 } else { rng.gen_range(1..=3) };
        let mut a = vec![random_branch(&mut rng, depth)];
        while a.len() < size {
            let spec = random_spec(&mut rng, &a, 3, depth);
            let r = realize(&spec, depth).map_err(err)?;
            a.push(branch(r.prefix).map_err(err)?);
        }
        let adjacent = |p: &RadoBranch, q: &RadoBranch| rado_rel_oracle(p, q, depth) == Level::Zero;
        // B: distinct at level 0, with the adjacency pattern of A
        let mut b = vec![random_branch(&mut rng, depth)];
        while b.len() < size {
            let j = b.len();
            let spec = ExtensionSpec {
                points: b.iter().map(|p| p.literal()).collect(),
                distances: vec![Level::Val(0); j],
                relations: (0..j)
                    .map(|i| if adjacent(&a[i], &a[j]) { Level::Zero } else { Level::Val(rng.gen_range(0..=3)) })
                    .collect(),
            };
            let r = realize(&spec, depth).map_err(err)?;
            b.push(branch(r.prefix).map_err(err)?);
        }
        let pairs: Vec<_> = if instances == 0 {
            // the swap of two points
            vec![(a[0].clone(), a[1].clone()), (a[1].clone(), a[0].clone())]
        } else {
            a.iter().cloned().zip(b.iter().cloned()).collect()
        };
        let alpha = DiscreteIso::new(pairs.clone(), depth).map_err(err)?;
        let shift = shift_level(&alpha).map_err(err)?;
        let c = conjugate_extend(&alpha, depth, 4, 50, &mut rng).map_err(err)?;
        ensure(c.extends.len() == pairs.len() && c.extends.iter().all(|&e| e), || {
            format!("instance {instances}: h̃ does not extend α")
        })?;
        ensure(c.samples.len() == 50, || format!("instance {instances}: {} samples", c.samples.len()))?;
        for s in &c.samples {
            ensure(s.level > shift.l, || format!("sample at level {} not deeper than l = {}", s.level, shift.l))?;
            ensure(s.before == s.after, || {
                format!("instance {instances}: distance {:?} became {:?}", s.before, s.after)
            })?;
        }
        ls.push(shift.l);
        instances += 1;
    }
    Ok(format!("20 conjugations with shift levels {ls:?}, 50 samples each"))
}

fn c10_intro() -> Check {
    let depth = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for t in 0..50 {
        let size = rng.gen_range(1..=3);
        let first = random_branch(&mut rng, depth);
        let mut points = vec![first.clone()];
        while points.len() < size {
            let p = if rng.gen_bool(0.7) {
                let k = rng.gen_range(0..=5);
                random_sibling(&mut rng, &first, k, depth).map_err(err)?
            } else {
                random_branch(&mut rng, depth)
            };
            if points.iter().all(|q| dist_oracle(q, &p, depth) != Level::Zero) {
                points.push(p);
            }
        }
        let spec = random_spec(&mut rng, &points, 5, depth);
        let r = realize(&spec, depth).map_err(|e| format!("extension {t}: {e}"))?;
        let w = branch(r.prefix).map_err(err)?;
        for (j, p) in points.iter().enumerate() {
            let d = dist_oracle(&w, p, depth);
            let rel = rado_rel_oracle(&w, p, depth);
            ensure(d == spec.distances[j], || format!("extension {t}: distance {d:?}, wanted {:?}", spec.distances[j]))?;
            ensure(rel == spec.relations[j], || {
                format!("extension {t}: relation {rel:?}, wanted {:?}", spec.relations[j])
            })?;
        }
    }
    Ok("50 one-point extensions realized and re-validated".into())
}

fn cmp_oracle(a: (i64, i64), b: (i64, i64)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

fn lex_oracle(a: &[(i64, i64)], b: &[(i64, i64)]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| cmp_oracle(*x, *y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

fn to_rat(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn c11_orders() -> Check {
    let depth = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let len = rng.gen_range(1..=depth + 1);
        let draw = |rng: &mut ChaCha8Rng| (rng.gen_range(-6..=6i64), rng.gen_range(1..=5i64));
        let x: Vec<(i64, i64)> = (0..len).map(|_| draw(&mut rng)).collect();
        let mut y = x.clone();
        let from = rng.gen_range(0..=len);
        for c in y.iter_mut().skip(from) {
            *c = draw(&mut rng);
        }
        let pad = |v: &[(i64, i64)]| {
            let mut v = v.to_vec();
            v.resize(depth + 1, (0, 1));
            v
        };
        let (px, py) = (pad(&x), pad(&y));
        let want = if lex_oracle(&px, &py) != Ordering::Greater {
            Level::Zero
        } else {
            Level::Val((0..=depth).find(|&i| cmp_oracle(px[i], py[i]).is_ne()).unwrap() as u32)
        };
        let (bx, by) = (lex_branch(&to_rat(&x)).map_err(err)?, lex_branch(&to_rat(&y)).map_err(err)?);
        let got = order_value(&bx, &by, depth).map_err(err)?;
        ensure(got == want, || format!("order value {got:?}, formula gives {want:?} on {x:?} {y:?}"))?;
        // the order value reads levels through `depth`, the distance below it
        let d = distance(&bx, &by, depth + 1).map_err(err)?;
        ensure(real(got) <= real(d), || "order value above the distance".into())?;
    }

    let mut values: Vec<(i64, i64)> = Vec::new();
    for d in 1..=4i64 {
        for n in -4 * d..=4 * d {
            if num_gcd(n, d) == 1 {
                values.push((n, d));
            }
        }
    }
    let mut tuples: Vec<Vec<Vec<(i64, i64)>>> = vec![vec![vec![]]];
    for len in 1..=3 {
        let next: Vec<Vec<(i64, i64)>> =
            tuples[len - 1].iter().flat_map(|t| values.iter().map(move |v| [t.clone(), vec![*v]].concat())).collect();
        tuples.push(next);
    }
    let mut checked = 0;
    for len in 2..=3 {
        let mut sorted = tuples[len].clone();
        sorted.sort_by(|a, b| lex_oracle(a, b));
        let projected: Vec<Vec<Rational>> =
            sorted.iter().map(|t| project(&to_rat(t))).collect::<Result<_, _>>().map_err(err)?;
        for k in 1..sorted.len() {
            let o = lex_compare(&to_rat(&sorted[k - 1]), &to_rat(&sorted[k])).map_err(err)?;
            ensure(o == Ordering::Less, || format!("lex order disagrees on {:?} {:?}", sorted[k - 1], sorted[k]))?;
            let p = lex_compare(&projected[k - 1], &projected[k]).map_err(err)?;
            ensure(p != Ordering::Greater, || format!("projection not monotone at {:?}", sorted[k]))?;
            // locally constant: same first len-1 coordinates, same image
            if sorted[k - 1][..len - 1] == sorted[k][..len - 1] {
                ensure(p == Ordering::Equal, || format!("projection not locally constant at {:?}", sorted[k]))?;
            }
            checked += 1;
        }
        let images: BTreeSet<Vec<Rational>> = projected.into_iter().collect();
        for t in &tuples[len - 1] {
            ensure(images.contains(&to_rat(t)), || format!("{t:?} has no preimage"))?;
        }
    }
    Ok(format!("200 order values; projections checked on {checked} neighbouring pairs"))
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

fn main() {
    let criteria: Vec<(u32, &str, Duration, fn() -> Check)> = vec![
        (1, "φ and # tables", Duration::from_millis(1), c1_tables),
        (2, "K2 example", Duration::from_millis(1), c2_k2),
        (3, "AEP counterexample and amalgamation", Duration::from_secs(30), c3_amalgamation),
        (4, "ultrametric suite", Duration::from_secs(5), c4_ultrametric),
        (5, "adjunction suite", Duration::from_secs(10), c5_adjunction),
        (6, "Rado extension properties", Duration::from_secs(10), c6_extension),
        (7, "self-endomorphism", Duration::from_secs(20), c7_endomorphism),
        (8, "shift suite", Duration::from_secs(2), c8_shift),
        (9, "conjugation procedure", Duration::from_secs(60), c9_conjugation),
        (10, "one-point extensions", Duration::from_secs(60), c10_intro),
        (11, "linear-order suite", Duration::from_secs(5), c11_orders),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let verdict = match result {
            Ok(detail) if took <= limit => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over the {limit:?} limit; {detail}"),
            Err(e) => format!("FAIL  {e}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {n:>2} {name:<38} {took:>12.3?}  {verdict}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
