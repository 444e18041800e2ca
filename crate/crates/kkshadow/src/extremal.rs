//! Extremality tests, depth, and the theorem-level predicates built on them.

use crate::bbw::{family_process, hyp_at, hypotenusal_by_hamilton, shadow_decomposition_direct};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::hypergraph_of_family;
use crate::numeric::{binom, full_k_binomial_decomposition, k_binomial_decomposition, kk_lower_bound, Decomposition};
use crate::setfam::{check_n, ground_mask, is_initial_segment, iterated_shadow, shadow_masks, KSetFamily, MAX_N};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

fn nonempty(s: &KSetFamily) -> Result<()> {
    if s.is_empty() {
        return invalid("empty family");
    }
    Ok(())
}

/// |Δ(S)| equals the Kruskal–Katona bound for |S|.
pub fn is_extremal_direct(s: &KSetFamily) -> Result<bool> {
    nonempty(s)?;
    if s.k == 1 {
        return Ok(true);
    }
    let sh = shadow_masks(s.sets()).len();
    Ok(BigInt::from(sh) == kk_lower_bound(&BigInt::from(s.len()), s.k, 1)?)
}

/// β_{k-1} ≥ 1 for the shadow decomposition of S.
pub fn is_extremal_beta(s: &KSetFamily) -> Result<bool> {
    Ok(shadow_decomposition_direct(s)?.last() >= 1)
}

/// w_k ≤ n - k for the family's hypotenusal process.
pub fn is_extremal_wall(s: &KSetFamily) -> Result<bool> {
    Ok(wall_k(s)? + s.k as u64 <= s.n as u64)
}

/// The wall at the end of iteration k of the family's process.
pub fn wall_k(s: &KSetFamily) -> Result<u64> {
    nonempty(s)?;
    let (trace, _, abrupt) = family_process(s)?;
    if abrupt {
        return Err(Error::Unsupported("family process ended abruptly".into()));
    }
    Ok(trace.end_of(s.k).expect("process ran k + 1 iterations"))
}

/// Least j with Δ^j(S) isomorphic to a colex initial segment.
pub fn depth(s: &KSetFamily) -> Result<usize> {
    nonempty(s)?;
    let mut cur = s.clone();
    for j in 0..s.k {
        if is_initial_segment(&cur, true) {
            return Ok(j);
        }
        if j + 1 < s.k {
            cur = KSetFamily::new(s.n, cur.k - 1, shadow_masks(cur.sets()))?;
        }
    }
    // Δ^{k-1} is a family of singletons
    unreachable!("singletons are always a colex segment up to isomorphism")
}

/// ⌊max(log2(log2 n) + 4, 5)⌋.
pub fn depth_bound(n: u64) -> Result<usize> {
    if n < 2 {
        return invalid(format!("n = {n} must be at least 2"));
    }
    // largest e with 2^(2^e) <= n is ⌊log2 log2 n⌋ (0 for n < 4)
    let lg = 63 - n.leading_zeros() as u64; // ⌊log2 n⌋, and 2^(2^e) <= n ⟺ 2^e <= ⌊log2 n⌋
    let e = 63 - lg.leading_zeros() as usize;
    Ok((e + 4).max(5))
}

/// Slack (left side minus right side) of every inequality of the necessary
/// gap conditions for an extremal family whose t-th shadow is not a colex
/// segment: first the t - 1 conditions for 1 <= i < t, then the last gap.
/// `None` when `a` is too short or t is out of range.
pub fn hn_slacks(a: &[i64], k: usize, t: usize, hyp: &[BigInt]) -> Option<Vec<BigInt>> {
    if k < 2 || a.len() < k || t >= k {
        return None;
    }
    let gap = |lo: usize| BigInt::from(a[lo] - a[lo + 1]);
    let mut out: Vec<BigInt> = (1..t).map(|i| gap(k - 2 - t + i) - hyp_at(hyp, i as i64 - 1) - 1).collect();
    out.push(gap(k - 2) - hyp_at(hyp, t as i64 - 1));
    Some(out)
}

pub fn hn_gaps_hold(a: &[i64], k: usize, t: usize, hyp: &[BigInt]) -> bool {
    hn_slacks(a, k, t, hyp).is_some_and(|v| v.iter().all(|x| !x.is_negative()))
}

/// Checks the necessary gaps for an extremal S whose t-th shadow is not
/// a colex segment.
pub fn hn_necessary(s: &KSetFamily, t: usize) -> Result<bool> {
    if !is_extremal_direct(s)? {
        return invalid("family is not extremal");
    }
    if t >= s.k {
        return invalid(format!("t = {t} must be below k = {}", s.k));
    }
    if is_initial_segment(&iterated_shadow(s, t)?, true) {
        return invalid(format!("Δ^{t}(S) is a colex segment"));
    }
    let a = k_binomial_decomposition(&BigInt::from(s.len()), s.k)?;
    let hyp = hypotenusal_by_hamilton(t.max(1));
    Ok(hn_gaps_hold(&a.coeffs, s.k, t, &hyp))
}

/// True iff the colex segment of length m is the only extremal family of
/// that size in binom([n], k) up to isomorphism (by the stated criterion).
pub fn unique_colex_predicate(m: &BigInt, k: usize, n: usize) -> Result<bool> {
    if k == 0 || k > n {
        return invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
    }
    if *m < BigInt::from(1) || *m > binom(n as i64, k as i64) {
        return invalid(format!("m = {m} outside [1, binom({n}, {k})]"));
    }
    if k_binomial_decomposition(m, k)?.len() < k {
        return Ok(true);
    }
    // m = binom(q, k) - 1 iff m + 1 decomposes as a single term
    let d = k_binomial_decomposition(&(m + 1), k)?;
    Ok(d.len() == 1 && d.coeffs[0] > k as i64 && d.coeffs[0] <= n as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// Smallest r with β_{k-1} + r ≥ 1.
    pub r0: usize,
    /// The r the family was built at: max(r0, 1).
    pub r: usize,
    pub beta: Decomposition,
    #[serde(skip)]
    pub family: Option<KSetFamily>,
}

/// ⋃_{i=0..k} Δ^i(S) ∨ binom([n+1, n+r], i), with Δ^0 = S and Δ^k = {∅}:
/// every k-set of [n+r] whose old part lies in the matching shadow.
pub fn family_ext(s: &KSetFamily, r: usize) -> Result<KSetFamily> {
    family_ext_range(s, r, 0, s.k)
}

/// The same union restricted to 1 <= i <= k-1. It drops S itself and the
/// k-sets made only of new vertices, so it does not extend S in general.
pub fn family_ext_inner(s: &KSetFamily, r: usize) -> Result<KSetFamily> {
    family_ext_range(s, r, 1, s.k - 1)
}

fn family_ext_range(s: &KSetFamily, r: usize, lo: usize, hi: usize) -> Result<KSetFamily> {
    nonempty(s)?;
    let n2 = s.n + r;
    if n2 > MAX_N {
        return Err(Error::Capacity(format!("n + r = {n2} exceeds {MAX_N}")));
    }
    check_n(n2)?;
    let new_vertices = ground_mask(n2) & !ground_mask(s.n);
    let mut levels: Vec<Vec<u64>> = vec![s.sets().to_vec()];
    for _ in 1..s.k {
        let next = shadow_masks(levels.last().unwrap());
        levels.push(next);
    }
    levels.push(vec![0]);
    let mut out = Vec::new();
    for i in lo..=hi {
        let fresh = crate::hypergraph::subsets_of_size(new_vertices, i);
        for &old in &levels[i] {
            for &f in &fresh {
                out.push(old | f);
            }
        }
    }
    KSetFamily::new(n2, s.k, out)
}

/// r_0 from the β shift and the extended family at r = max(r_0, 1),
/// checked extremal before returning.
pub fn embed_extremal(s: &KSetFamily) -> Result<Embedding> {
    let beta = shadow_decomposition_direct(s)?;
    let r0 = (1 - beta.last()).max(0) as usize;
    let r = r0.max(1);
    let fam = family_ext(s, r)?;
    let shifted: Vec<i64> = beta.coeffs.iter().map(|b| b + r as i64).collect();
    if shadow_decomposition_direct(&fam)?.coeffs != shifted || !is_extremal_direct(&fam)? {
        return Err(Error::Unsupported("extended family failed its post-check".into()));
    }
    Ok(Embedding { r0, r, beta, family: Some(fam) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StaysExtremal,
    BreaksExtremal,
}

impl From<bool> for Verdict {
    fn from(stays: bool) -> Self {
        if stays {
            Verdict::StaysExtremal
        } else {
            Verdict::BreaksExtremal
        }
    }
}

fn require_extremal(s: &KSetFamily) -> Result<()> {
    if !is_extremal_direct(s)? {
        return invalid("family is not extremal");
    }
    Ok(())
}

fn check_kset(s: &KSetFamily, x: u64) -> Result<()> {
    if x & !ground_mask(s.n) != 0 || x.count_ones() as usize != s.k {
        return invalid(format!("set is not a {}-subset of [{}]", s.k, s.n));
    }
    Ok(())
}

/// Whether S ∪ {x} is extremal, read off the hypergraph of S: a k-edge can
/// always be added; a set over a smaller edge only when S and S ∪ {x} are
/// colex, the edge is of maximal size and is the only edge inside x.
pub fn add_set_verdict(s: &KSetFamily, x: u64) -> Result<Verdict> {
    require_extremal(s)?;
    check_kset(s, x)?;
    if s.contains(x) {
        return invalid("set already belongs to the family");
    }
    let h = hypergraph_of_family(s)?;
    let inside: Vec<u64> = h.edges.iter().copied().filter(|&e| e & x == e).collect();
    if inside.contains(&x) {
        return Ok(Verdict::StaysExtremal);
    }
    let grown = KSetFamily::new(s.n, s.k, s.sets().iter().copied().chain([x]))?;
    let e = inside[0];
    let colex = is_initial_segment(s, true) && is_initial_segment(&grown, true);
    let maximal = h.edges.iter().all(|f| f.count_ones() <= e.count_ones());
    let unique = inside.len() == 1;
    Ok((colex && maximal && unique).into())
}

/// Whether S \ {x} is extremal. When x has no private (k-1)-subset the
/// shadow is unchanged and only β_{k-1} drops by one; otherwise the lost
/// shadow must match the drop of the Kruskal–Katona bound.
pub fn remove_set_verdict(s: &KSetFamily, x: u64) -> Result<Verdict> {
    require_extremal(s)?;
    check_kset(s, x)?;
    if !s.contains(x) {
        return invalid("set does not belong to the family");
    }
    if s.len() == 1 {
        return invalid("removing the only set leaves an empty family");
    }
    if s.k == 1 {
        return Ok(Verdict::StaysExtremal);
    }
    let mut lost = 0u64;
    let mut m = x;
    while m != 0 {
        let b = m & m.wrapping_neg();
        m &= m - 1;
        let sub = x & !b;
        if !s.sets().iter().any(|&y| y != x && y & sub == sub) {
            lost += 1;
        }
    }
    let size = BigInt::from(s.len());
    if lost == 0 {
        let last = full_k_binomial_decomposition(&size, s.k)?.last();
        return Ok((last >= 2).into());
    }
    let drop = kk_lower_bound(&size, s.k, 1)? - kk_lower_bound(&(size - 1), s.k, 1)?;
    Ok((BigInt::from(lost) == drop).into())
}

/// Whether the complement of S can be added one set at a time keeping every
/// intermediate family extremal: exactly when Δ(S) is a colex segment.
pub fn maximal_chain_up(s: &KSetFamily) -> Result<bool> {
    require_extremal(s)?;
    if s.k == 1 {
        return Ok(true);
    }
    let sh = KSetFamily::new(s.n, s.k - 1, shadow_masks(s.sets()))?;
    Ok(is_initial_segment(&sh, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{family_of_hypergraph, Hypergraph};
    use crate::setfam::{initial_segment, ksets, mask};

    fn fam(n: usize, k: usize, sets: &[&[usize]]) -> KSetFamily {
        KSetFamily::from_elems(n, k, sets).unwrap()
    }

    fn all_families(n: usize, k: usize) -> impl Iterator<Item = KSetFamily> {
        let base = ksets(n, k);
        let count = 1u64 << base.len();
        (1..count).map(move |f| {
            let sets = (0..base.len()).filter(|&i| f >> i & 1 == 1).map(|i| base[i]);
            KSetFamily::new(n, k, sets).unwrap()
        })
    }

    #[test]
    fn small_examples() {
        let bad = fam(5, 3, &[&[1, 2, 3], &[1, 4, 5]]);
        assert!(!is_extremal_direct(&bad).unwrap());
        assert!(!is_extremal_beta(&bad).unwrap());
        assert!(!is_extremal_wall(&bad).unwrap());
        assert_eq!(wall_k(&bad).unwrap(), 6);
        let full = initial_segment(5, 3, 10).unwrap();
        assert!(is_extremal_direct(&full).unwrap());
        assert!(is_extremal_beta(&full).unwrap());
        assert!(is_extremal_wall(&full).unwrap());
        assert!(is_extremal_direct(&KSetFamily::new(4, 2, []).unwrap()).is_err());
    }

    #[test]
    fn colex_minus_sets_stay_extremal() {
        // m_1 = binom(6,3) + binom(4,2) + binom(3,1) = 29, m_0 = 27
        let seg = initial_segment(8, 3, 29).unwrap();
        for &drop in &seg.sets()[20..] {
            for &drop2 in &seg.sets()[20..] {
                let s = KSetFamily::new(8, 3, seg.sets().iter().copied().filter(|&x| x != drop && x != drop2)).unwrap();
                assert!(is_extremal_direct(&s).unwrap());
            }
        }
    }

    #[test]
    fn three_way_agreement_exhaustive() {
        for n in 1..=5 {
            for k in 1..=n.min(4) {
                for s in all_families(n, k) {
                    let d = is_extremal_direct(&s).unwrap();
                    assert_eq!(d, is_extremal_beta(&s).unwrap(), "{s:?}");
                    assert_eq!(d, is_extremal_wall(&s).unwrap(), "{s:?}");
                }
            }
        }
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&initial_segment(7, 3, 17).unwrap()).unwrap(), 0);
        assert_eq!(depth(&fam(5, 1, &[&[2], &[4]])).unwrap(), 0);
        let h = Hypergraph::from_elems(9, &[&[1, 2], &[3, 4, 5]]).unwrap();
        let s = family_of_hypergraph(&h, 3).unwrap();
        assert_eq!(depth(&s).unwrap(), 1);
        assert!(is_extremal_direct(&s).unwrap());
    }

    #[test]
    fn depth_bound_values() {
        assert_eq!(depth_bound(4).unwrap(), 5);
        assert_eq!(depth_bound(16).unwrap(), 6);
        assert_eq!(depth_bound(15).unwrap(), 5);
        assert_eq!(depth_bound(2).unwrap(), 5);
        assert_eq!(depth_bound(65_536).unwrap(), 8);
        assert_eq!(depth_bound(65_535).unwrap(), 7);
        assert_eq!(depth_bound(u64::MAX).unwrap(), 9);
        assert!(depth_bound(1).is_err());
    }

    #[test]
    fn hn_examples() {
        // t = 1 reduces to a_{k-2} - a_{k-1} >= a[0] = 1
        let hyp = hypotenusal_by_hamilton(4);
        assert!(hn_gaps_hold(&[5, 3, 2], 3, 1, &hyp));
        assert!(!hn_gaps_hold(&[5, 3, 3], 3, 1, &hyp));
        let h = Hypergraph::from_elems(12, &[&[1, 2], &[3, 4, 5]]).unwrap();
        let s = family_of_hypergraph(&h, 4).unwrap();
        assert!(is_extremal_direct(&s).unwrap());
        assert!(hn_necessary(&s, 1).unwrap());
        assert!(hn_necessary(&initial_segment(6, 3, 5).unwrap(), 0).is_err());
    }

    #[test]
    fn unique_predicate_examples() {
        let p = |m: i64, k, n| unique_colex_predicate(&BigInt::from(m), k, n).unwrap();
        assert!(p(9, 3, 5));
        assert!(p(10, 3, 6));
        assert!(!p(12, 3, 7));
        assert!(unique_colex_predicate(&BigInt::from(0), 3, 5).is_err());
        assert!(unique_colex_predicate(&BigInt::from(11), 3, 5).is_err());
    }

    #[test]
    fn embedding_example() {
        let s = fam(5, 3, &[&[1, 2, 3], &[1, 4, 5]]);
        let e = embed_extremal(&s).unwrap();
        assert_eq!(e.beta.coeffs, vec![4, -1, -3]);
        assert_eq!(e.r0, 4);
        let f = e.family.unwrap();
        assert_eq!(f.n, 9);
        assert_eq!(f.len(), 60);
        // same hypergraph plus isolated vertices
        let h = hypergraph_of_family(&s).unwrap();
        let lifted = Hypergraph::new(9, h.edges.clone()).unwrap();
        assert_eq!(family_of_hypergraph(&lifted, 3).unwrap(), f);
        // the union without i = 0 and i = k misses S and the all-new sets
        let inner = family_ext_inner(&s, 4).unwrap();
        assert_eq!(inner.len(), 54);
        assert!(!is_extremal_direct(&inner).unwrap());
    }

    #[test]
    fn embedding_of_extremal_family() {
        let s = initial_segment(6, 3, 12).unwrap();
        let e = embed_extremal(&s).unwrap();
        assert_eq!((e.r0, e.r), (0, 1));
        assert!(is_extremal_direct(e.family.as_ref().unwrap()).unwrap());
    }

    fn with(s: &KSetFamily, x: u64) -> KSetFamily {
        KSetFamily::new(s.n, s.k, s.sets().iter().copied().chain([x])).unwrap()
    }

    fn without(s: &KSetFamily, x: u64) -> KSetFamily {
        KSetFamily::new(s.n, s.k, s.sets().iter().copied().filter(|&y| y != x)).unwrap()
    }

    #[test]
    fn verdicts_match_direct_exhaustive() {
        for n in 2..=5 {
            for k in 1..n.min(4) {
                for s in all_families(n, k) {
                    if !is_extremal_direct(&s).unwrap() {
                        continue;
                    }
                    for x in s.complement() {
                        let direct: Verdict = is_extremal_direct(&with(&s, x)).unwrap().into();
                        assert_eq!(add_set_verdict(&s, x).unwrap(), direct, "add {x:b} to {s:?}");
                    }
                    if s.len() < 2 {
                        continue;
                    }
                    for &x in s.sets() {
                        let direct: Verdict = is_extremal_direct(&without(&s, x)).unwrap().into();
                        assert_eq!(remove_set_verdict(&s, x).unwrap(), direct, "remove {x:b} from {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn verdict_examples() {
        // the 4-cycle: both diagonals are k-edges
        let s = fam(4, 2, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]);
        let h = hypergraph_of_family(&s).unwrap();
        let kedge = *h.edges.iter().find(|e| e.count_ones() == 2).unwrap();
        assert_eq!(add_set_verdict(&s, kedge).unwrap(), Verdict::StaysExtremal);
        assert!(add_set_verdict(&s, s.sets()[0]).is_err());
        assert!(add_set_verdict(&fam(5, 3, &[&[1, 2, 3], &[1, 4, 5]]), mask(&[2, 3, 4])).is_err());
    }

    fn chain_exists(s: &KSetFamily, memo: &mut std::collections::HashSet<Vec<u64>>) -> bool {
        let rest = s.complement();
        if rest.is_empty() {
            return true;
        }
        if !memo.insert(s.sets().to_vec()) {
            return false;
        }
        rest.into_iter().any(|x| {
            let g = with(s, x);
            is_extremal_direct(&g).unwrap() && chain_exists(&g, memo)
        })
    }

    #[test]
    fn chain_up_matches_search() {
        for n in 2..=5 {
            for k in 1..n.min(4) {
                for s in all_families(n, k) {
                    if !is_extremal_direct(&s).unwrap() {
                        continue;
                    }
                    let mut memo = std::collections::HashSet::new();
                    assert_eq!(maximal_chain_up(&s).unwrap(), chain_exists(&s, &mut memo), "{s:?}");
                }
            }
        }
    }
}
