//! Exhaustive ground truth at desk scale.
//!
//! A family of k-subsets of [n] is addressed by an index whose bit i selects
//! the i-th k-set in colex order, so `0..2^N` (N = binom(n, k)) walks every
//! family and chunks of that range are handed to [`crate::par::map_reduce`].

use crate::bbw::{beta_from_walls, family_process, shadow_decomposition_direct};
use crate::construct::decide_extremal_with_depth;
use crate::error::{invalid, Error, Result};
use crate::extremal::{
    add_set_verdict, depth, hn_necessary, is_extremal_beta, is_extremal_direct, is_extremal_wall,
    remove_set_verdict, unique_colex_predicate, Verdict,
};
use crate::hypergraph::{extension_trees, family_of_hypergraph, hypergraph_of_family};
use crate::io::format_family;
use crate::numeric::{binom, kk_lower_bound};
use crate::par::map_reduce;
use crate::setfam::{canonical_form, initial_segment, ksets, next_combination, shadow_masks, shadow_sizes, KSetFamily};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

pub const DEFAULT_BUDGET: u64 = 20_000_000;

const CHUNK: u64 = 1 << 12;

fn universe_size(n: usize, k: usize) -> Result<usize> {
    crate::setfam::check_n(n)?;
    if k == 0 || k > n {
        return invalid(format!("k = {k} outside [1, {n}]"));
    }
    Ok(binom(n as i64, k as i64).to_usize().unwrap_or(usize::MAX))
}

fn over_budget(what: &str, count: &BigInt, budget: u64) -> Result<()> {
    if *count > BigInt::from(budget) {
        return Err(Error::Capacity(format!("{what}: {count} families exceed the budget of {budget}")));
    }
    Ok(())
}

// Number of nonempty families, checked against the budget.
fn all_families(n: usize, k: usize, budget: u64) -> Result<(Vec<u64>, u64)> {
    let big_n = universe_size(n, k)?;
    let count = if big_n >= 64 { BigInt::from(1) << big_n } else { BigInt::from((1u64 << big_n) - 1) };
    over_budget(&format!("all families of {k}-subsets of [{n}]"), &count, budget)?;
    Ok((ksets(n, k), count.to_u64().unwrap()))
}

fn pick(univ: &[u64], mut idx: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(idx.count_ones() as usize);
    while idx != 0 {
        out.push(univ[idx.trailing_zeros() as usize]);
        idx &= idx - 1;
    }
    out
}

/// Folds `f` over every nonempty family of k-subsets of [n]; chunk results
/// are merged in index order.
pub fn scan_families<T, F, M>(n: usize, k: usize, budget: u64, f: F, merge: M, zero: T) -> Result<T>
where
    T: Send + Clone + Sync,
    F: Fn(&KSetFamily) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let (univ, count) = all_families(n, k, budget)?;
    let z = zero.clone();
    Ok(map_reduce(
        count + 1,
        CHUNK,
        |lo, hi| {
            let mut acc = z.clone();
            for idx in lo.max(1)..hi {
                acc = merge(acc, f(&KSetFamily::new(n, k, pick(&univ, idx)).expect("valid k-sets")));
            }
            acc
        },
        &merge,
        zero,
    ))
}

/// Every size-`m` family exactly once, each in colex member order.
pub struct Families {
    n: usize,
    k: usize,
    univ: Vec<u64>,
    next: Option<u64>,
    limit: u64,
}

impl Iterator for Families {
    type Item = KSetFamily;

    fn next(&mut self) -> Option<KSetFamily> {
        let cur = self.next?;
        let nxt = if cur == 0 { None } else { Some(next_combination(cur)) };
        self.next = nxt.filter(|&x| x < self.limit);
        Some(KSetFamily::new(self.n, self.k, pick(&self.univ, cur)).expect("valid k-sets"))
    }
}

pub fn enumerate_families(n: usize, k: usize, m: usize, budget: u64) -> Result<Families> {
    let big_n = universe_size(n, k)?;
    if m > big_n {
        return invalid(format!("m = {m} exceeds binom({n}, {k}) = {big_n}"));
    }
    if big_n > 63 {
        return Err(Error::Capacity(format!("binom({n}, {k}) = {big_n} k-sets do not fit an index")));
    }
    over_budget(&format!("families of {m} sets"), &binom(big_n as i64, m as i64), budget)?;
    let first = if m == 0 { 0 } else { (1u64 << m) - 1 };
    Ok(Families { n, k, univ: ksets(n, k), next: Some(first), limit: 1u64 << big_n })
}

// |Δ| of the colex segment of each size m = 0..=big_n
fn kk_table(k: usize, big_n: usize) -> Vec<usize> {
    (0..=big_n)
        .map(|m| if m == 0 || k < 2 { 0 } else { kk_lower_bound(&BigInt::from(m), k, 1).unwrap().to_usize().unwrap() })
        .collect()
}

fn is_extremal_fast(sets: &[u64], k: usize, kk: &[usize]) -> bool {
    k == 1 || shadow_masks(sets).len() == kk[sets.len()]
}

pub fn enumerate_extremal(n: usize, k: usize, m: usize, up_to_iso: bool, budget: u64) -> Result<Vec<KSetFamily>> {
    let big_n = universe_size(n, k)?;
    let kk = kk_table(k, big_n);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for s in enumerate_families(n, k, m, budget)? {
        if m == 0 || !is_extremal_fast(s.sets(), k, &kk) {
            continue;
        }
        if up_to_iso && !seen.insert(canonical_form(&s)?.into_sets()) {
            continue;
        }
        out.push(s);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelledCount {
    #[serde(serialize_with = "crate::io::big_str")]
    pub total: BigInt,
    /// Extremal families whose shadow is exactly the colex initial segment.
    #[serde(serialize_with = "crate::io::big_str")]
    pub colex_shadow: BigInt,
}

impl LabelledCount {
    pub fn ratio(&self) -> f64 {
        self.total.to_f64().unwrap() / self.colex_shadow.to_f64().unwrap()
    }
}

/// All nonempty extremal families, counted as labelled objects.
pub fn count_extremal_labelled(n: usize, k: usize, budget: u64) -> Result<LabelledCount> {
    if k < 2 {
        return invalid("labelled counts need k >= 2");
    }
    let (univ, count) = all_families(n, k, budget)?;
    let kk = kk_table(k, univ.len());
    let segments: Vec<Vec<u64>> = (0..=binom(n as i64, k as i64 - 1).to_u64().unwrap())
        .map(|s| if s == 0 { Vec::new() } else { initial_segment(n, k - 1, s).unwrap().into_sets() })
        .collect();
    let (total, colex) = map_reduce(
        count + 1,
        CHUNK,
        |lo, hi| {
            let (mut t, mut c) = (0u64, 0u64);
            for idx in lo.max(1)..hi {
                let sets = pick(&univ, idx);
                let sh = shadow_masks(&sets);
                if sh.len() == kk[sets.len()] {
                    t += 1;
                    if sh == segments[sh.len()] {
                        c += 1;
                    }
                }
            }
            (t, c)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
        (0, 0),
    );
    Ok(LabelledCount { total: total.into(), colex_shadow: colex.into() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub n: usize,
    pub k: usize,
    /// depth -> number of labelled extremal families
    pub by_depth: BTreeMap<usize, u64>,
    pub total: u64,
    /// m -> set of depths attained by extremal families of size m
    pub depths_by_m: BTreeMap<usize, BTreeSet<usize>>,
    /// Fraction of m in [1, binom(n,k)] all of whose extremal families have depth <= 3.
    pub frac_depth_le3: f64,
    pub frac_depth_le4: f64,
}

pub fn depth_census(n: usize, k: usize, budget: u64) -> Result<Census> {
    let (univ, count) = all_families(n, k, budget)?;
    let kk = kk_table(k, univ.len());
    type Acc = (BTreeMap<usize, u64>, BTreeMap<usize, BTreeSet<usize>>);
    let merge = |mut a: Acc, b: Acc| {
        for (d, c) in b.0 {
            *a.0.entry(d).or_default() += c;
        }
        for (m, ds) in b.1 {
            a.1.entry(m).or_default().extend(ds);
        }
        a
    };
    let (by_depth, depths_by_m) = map_reduce(
        count + 1,
        CHUNK,
        |lo, hi| {
            let mut acc: Acc = Default::default();
            for idx in lo.max(1)..hi {
                let sets = pick(&univ, idx);
                if !is_extremal_fast(&sets, k, &kk) {
                    continue;
                }
                let m = sets.len();
                let d = depth(&KSetFamily::new(n, k, sets).unwrap()).unwrap();
                *acc.0.entry(d).or_default() += 1;
                acc.1.entry(m).or_default().insert(d);
            }
            acc
        },
        merge,
        Default::default(),
    );
    let total = by_depth.values().sum();
    let frac = |cap: usize| {
        let good = depths_by_m.values().filter(|ds| ds.iter().all(|&d| d <= cap)).count();
        good as f64 / univ.len() as f64
    };
    let (frac_depth_le3, frac_depth_le4) = (frac(3), frac(4));
    Ok(Census { n, k, by_depth, total, depths_by_m, frac_depth_le3, frac_depth_le4 })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub checked: u64,
    /// First failing input, in the family text format where applicable.
    pub counterexample: Option<String>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub n: usize,
    pub k: usize,
    pub parallel: bool,
    pub pass: bool,
    pub checks: Vec<Check>,
}

// Per-family checks; each slot holds (checked, first failure).
const FAMILY_CHECKS: [&str; 8] = [
    "kruskal_katona_bound",
    "extremality_three_way",
    "walls_match_beta",
    "monotonicity",
    "hypergraph_roundtrip",
    "tree_partition_identity",
    "hn_necessary",
    "add_remove_verdicts",
];

type Slots = Vec<(u64, Option<(u64, String)>)>;

fn merge_slots(mut a: Slots, b: Slots) -> Slots {
    if a.is_empty() {
        return b;
    }
    for (x, y) in a.iter_mut().zip(b) {
        x.0 += y.0;
        // keep the failure with the smallest index so reports are deterministic
        x.1 = match (x.1.take(), y.1) {
            (Some(p), Some(q)) => Some(if p.0 <= q.0 { p } else { q }),
            (p, q) => p.or(q),
        };
    }
    a
}

fn family_checks(s: &KSetFamily, kk: &[usize]) -> Result<Vec<bool>> {
    let (n, k, m) = (s.n, s.k, s.len());
    let mb = BigInt::from(m);
    let sizes = shadow_sizes(s);
    let bounds: Vec<BigInt> = (0..k).map(|i| kk_lower_bound(&mb, k, i)).collect::<Result<_>>()?;
    let above = sizes.iter().zip(&bounds).all(|(&x, b)| BigInt::from(x) >= *b);
    let moreover = k < 2 || sizes[1] != kk[m] || sizes.iter().zip(&bounds).all(|(&x, b)| BigInt::from(x) == *b);
    let ext = is_extremal_direct(s)?;
    let three = ext == is_extremal_beta(s)? && ext == is_extremal_wall(s)?;
    let beta = shadow_decomposition_direct(s)?;
    let (trace, _, abrupt) = family_process(s)?;
    let walls = !abrupt && beta_from_walls(n, k, &trace)?.coeffs == beta.coeffs;
    let b = &beta.coeffs;
    let mono = (0..k.saturating_sub(1)).all(|i| if i + 2 < k { b[i] > b[i + 1] } else { b[i] >= b[i + 1] });
    let h = hypergraph_of_family(s)?;
    let round = family_of_hypergraph(&h, k)? == *s;
    let total = binom(n as i64, k as i64);
    let leaves: BigInt = extension_trees(&h)?.iter().flat_map(|t| t.leaf_coefficients(k)).sum();
    let partition = leaves + &mb == total;
    let hn = if ext { (1..k).all(|t| !matches!(hn_necessary(s, t), Ok(false))) } else { true };
    let mut verdicts = true;
    for x in ksets(n, k) {
        if s.contains(x) {
            if ext && m > 1 {
                let rest = KSetFamily::new(n, k, s.sets().iter().copied().filter(|&y| y != x))?;
                let v = remove_set_verdict(s, x)?;
                if v != Verdict::from(is_extremal_direct(&rest)?) {
                    verdicts = false;
                }
            }
        } else if ext {
            let more = KSetFamily::new(n, k, s.sets().iter().copied().chain([x]))?;
            if add_set_verdict(s, x)? != Verdict::from(is_extremal_direct(&more)?) {
                verdicts = false;
            }
        }
    }
    Ok(vec![above && moreover, three, walls, mono, round, partition, hn, verdicts])
}

/// Runs every cross-module invariant over all families of k-subsets of [n].
pub fn verify_all(n: usize, k: usize, budget: u64) -> Result<Report> {
    let (univ, count) = all_families(n, k, budget)?;
    let big_n = univ.len();
    let kk = kk_table(k, big_n);
    let mut checks = Vec::new();

    let start = Instant::now();
    let slots = map_reduce(
        count + 1,
        CHUNK,
        |lo, hi| {
            let mut slots: Slots = vec![(0, None); FAMILY_CHECKS.len()];
            for idx in lo.max(1)..hi {
                let s = KSetFamily::new(n, k, pick(&univ, idx)).unwrap();
                let res = family_checks(&s, &kk).unwrap_or_else(|_| vec![false; FAMILY_CHECKS.len()]);
                for (slot, ok) in slots.iter_mut().zip(res) {
                    slot.0 += 1;
                    if !ok && slot.1.is_none() {
                        slot.1 = Some((idx, format_family(&s)));
                    }
                }
            }
            slots
        },
        merge_slots,
        Vec::new(),
    );
    let millis = start.elapsed().as_millis();
    for (name, (checked, fail)) in FAMILY_CHECKS.iter().zip(slots) {
        checks.push(Check { name: name.to_string(), pass: fail.is_none(), checked, counterexample: fail.map(|f| f.1), millis });
    }

    // per-m and per-(m, t) checks share one census of extremal families
    let start = Instant::now();
    let census = depth_census(n, k, budget)?;
    let mut uniq = Check { name: "uniqueness_predicate".into(), pass: true, checked: 0, counterexample: None, millis: 0 };
    let mut dec = Check { name: "decision_matches_existence".into(), pass: true, checked: 0, counterexample: None, millis: 0 };
    for m in 1..=big_n {
        let classes = enumerate_extremal(n, k, m, true, budget)?.len();
        let pred = unique_colex_predicate(&BigInt::from(m), k, n)?;
        uniq.checked += 1;
        if (classes == 1) != pred && uniq.pass {
            uniq.pass = false;
            uniq.counterexample = Some(format!("n={n} k={k} m={m}: {classes} classes, predicate {pred}"));
        }
        let depths = census.depths_by_m.get(&m).cloned().unwrap_or_default();
        for t in 0..k {
            let got = decide_extremal_with_depth(n, k, &BigInt::from(m), t)?.is_some();
            dec.checked += 1;
            if got != depths.contains(&t) && dec.pass {
                dec.pass = false;
                dec.counterexample = Some(format!("n={n} k={k} m={m} t={t}: decide {got}, exists {}", !got));
            }
        }
    }
    uniq.millis = start.elapsed().as_millis();
    dec.millis = uniq.millis;
    checks.push(uniq);
    checks.push(dec);

    let pass = checks.iter().all(|c| c.pass);
    Ok(Report { schema: "1", n, k, parallel: crate::par::is_parallel(), pass, checks })
}

/// Every (m, depth) pair attained by an extremal family.
pub fn extremal_size_depths(n: usize, k: usize, budget: u64) -> Result<BTreeSet<(usize, usize)>> {
    let c = depth_census(n, k, budget)?;
    Ok(c.depths_by_m.into_iter().flat_map(|(m, ds)| ds.into_iter().map(move |d| (m, d))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_families(4, 2, 1, DEFAULT_BUDGET).unwrap().count(), 6);
        assert_eq!(enumerate_families(5, 3, 2, DEFAULT_BUDGET).unwrap().count(), 45);
        for m in 0..=6 {
            let fams: Vec<_> = enumerate_families(4, 2, m, DEFAULT_BUDGET).unwrap().collect();
            assert_eq!(BigInt::from(fams.len()), binom(6, m as i64));
            let distinct: BTreeSet<_> = fams.iter().map(|f| f.sets().to_vec()).collect();
            assert_eq!(distinct.len(), fams.len());
        }
        assert!(matches!(enumerate_families(7, 3, 10, 1000), Err(Error::Capacity(_))));
    }

    #[test]
    fn uniqueness_examples() {
        // m = binom(4,3) - 1 = 3 has a single class; ℓ(a) < k also
        assert_eq!(enumerate_extremal(6, 3, 3, true, DEFAULT_BUDGET).unwrap().len(), 1);
        assert_eq!(enumerate_extremal(6, 3, 4, true, DEFAULT_BUDGET).unwrap().len(), 1);
        // some m at n=6, k=3 has two classes
        let multi = (1..=20).filter(|&m| enumerate_extremal(6, 3, m, true, DEFAULT_BUDGET).unwrap().len() >= 2).count();
        assert!(multi > 0);
    }

    #[test]
    fn labelled_counts() {
        let a = count_extremal_labelled(4, 2, DEFAULT_BUDGET).unwrap();
        let b = count_extremal_labelled(5, 2, DEFAULT_BUDGET).unwrap();
        assert!(a.total >= a.colex_shadow && b.total >= b.colex_shadow);
        assert!(a.ratio() >= 1.0);
    }

    #[test]
    fn census_totals() {
        let c = depth_census(5, 3, DEFAULT_BUDGET).unwrap();
        let lab = count_extremal_labelled(5, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(BigInt::from(c.total), lab.total);
        assert!(c.by_depth.keys().all(|&d| d < 3));
        let tiny = depth_census(3, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(tiny.by_depth.keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn verify_small() {
        let r = verify_all(4, 2, DEFAULT_BUDGET).unwrap();
        assert!(r.pass, "{:#?}", r.checks);
        let r = verify_all(5, 3, DEFAULT_BUDGET).unwrap();
        assert!(r.pass, "{:#?}", r.checks);
    }
}
