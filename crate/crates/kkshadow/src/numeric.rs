//! Generalized binomials and the k-binomial, full and shadow decompositions.

use crate::error::{invalid, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `n(n-1)...(n-k+1)/k!` for any integer `n`; 1 for `k = 0`, 0 for `k < 0`.
pub fn binom(n: i64, k: i64) -> BigInt {
    binom_big(&BigInt::from(n), k)
}

/// [`binom`] with a big-integer upper argument.
pub fn binom_big(n: &BigInt, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    // The running product of i+1 consecutive integers is divisible by (i+1)!,
    // so every intermediate division is exact.
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
        if c.is_zero() {
            break;
        }
    }
    c
}

/// Machine-word binomial for the hot loops of the exhaustive sweeps.
/// Returns `None` on overflow.
pub fn binom_i128(n: i64, k: i64) -> Option<i128> {
    if k < 0 {
        return Some(0);
    }
    let mut c: i128 = 1;
    for i in 0..k as i128 {
        c = c.checked_mul(n as i128 - i)? / (i + 1);
        if c == 0 {
            break;
        }
    }
    Some(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    KBinomial,
    Full,
    Shadow,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub kind: Kind,
    pub k: usize,
    pub coeffs: Vec<i64>,
}

impl Decomposition {
    pub fn new(kind: Kind, k: usize, coeffs: Vec<i64>) -> Self {
        Decomposition { kind, k, coeffs }
    }

    /// Checks the ordering invariants of the decomposition kind.
    pub fn is_well_formed(&self) -> bool {
        let k = self.k as i64;
        let c = &self.coeffs;
        if self.k == 0 || c.is_empty() {
            return false;
        }
        match self.kind {
            Kind::KBinomial => {
                let t = c.len() as i64 - 1;
                c.len() <= self.k
                    && c.windows(2).all(|w| w[0] > w[1])
                    && c[c.len() - 1] >= k - t
                    && k - t >= 1
            }
            Kind::Full => {
                c.len() == self.k && c.iter().all(|&a| a >= 1) && strictly_then_weak(c)
            }
            Kind::Shadow => c.len() == self.k && strictly_then_weak(c),
        }
    }

    /// Length of the coefficient list (the paper's ℓ(a)).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn last(&self) -> i64 {
        *self.coeffs.last().expect("non-empty decomposition")
    }
}

// a_0 > ... > a_{k-2} >= a_{k-1}
fn strictly_then_weak(c: &[i64]) -> bool {
    let n = c.len();
    (0..n.saturating_sub(1)).all(|i| if i + 2 == n { c[i] >= c[i + 1] } else { c[i] > c[i + 1] })
}

/// Σ binom(coeffs[i], k - i).
pub fn eval_decomposition(d: &Decomposition) -> BigInt {
    eval_lowered(&d.coeffs, d.k as i64, 0)
}

fn eval_lowered(coeffs: &[i64], k: i64, shift: i64) -> BigInt {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &a)| binom(a, k - i as i64 - shift))
        .sum()
}

/// Largest `a >= lo` with binom(a, r) <= m (requires binom(lo, r) <= m).
fn largest_below(m: &BigInt, r: i64, lo: i64) -> i64 {
    let mut hi = lo.max(r).max(1);
    while binom(hi, r) <= *m {
        hi *= 2;
    }
    let mut lo = lo;
    // invariant: binom(lo) <= m < binom(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if binom(mid, r) <= *m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The greedy (Macaulay) k-binomial decomposition of `m`.
pub fn k_binomial_decomposition(m: &BigInt, k: usize) -> Result<Decomposition> {
    if !m.is_positive() {
        return invalid(format!("m must be positive, got {m}"));
    }
    if k == 0 {
        return invalid("k must be positive");
    }
    let mut rem = m.clone();
    let mut coeffs = Vec::new();
    let mut r = k as i64;
    while rem.is_positive() && r >= 1 {
        let a = largest_below(&rem, r, r - 1);
        rem -= binom(a, r);
        coeffs.push(a);
        r -= 1;
    }
    debug_assert!(rem.is_zero());
    Ok(Decomposition::new(Kind::KBinomial, k, coeffs))
}

/// The length-k decomposition obtained by expanding the last k-binomial term
/// as binom(a-1, r) + binom(a-2, r-1) + ... + binom(a-r+1, 2) + binom(a-r+1, 1).
pub fn full_k_binomial_decomposition(m: &BigInt, k: usize) -> Result<Decomposition> {
    let kb = k_binomial_decomposition(m, k)?;
    let mut coeffs = kb.coeffs;
    if coeffs.len() < k {
        let t = coeffs.len() - 1;
        let a = coeffs.pop().unwrap();
        let r = (k - t) as i64;
        for i in 1..r {
            coeffs.push(a - i);
        }
        coeffs.push(a - r + 1);
    }
    Ok(Decomposition::new(Kind::Full, k, coeffs))
}

/// Σ binom(a_j, k - j - i) over the k-binomial decomposition of `m`.
pub fn kk_lower_bound(m: &BigInt, k: usize, i: usize) -> Result<BigInt> {
    if i >= k {
        return invalid(format!("shadow index {i} out of range for k = {k}"));
    }
    let d = k_binomial_decomposition(m, k)?;
    Ok(eval_lowered(&d.coeffs, k as i64, i as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 3), big(10));
        assert_eq!(binom(7, 0), big(1));
        assert_eq!(binom(3, -1), big(0));
        assert_eq!(binom(-2, 2), big(3));
        assert_eq!(binom(-1, 2), big(1));
        assert_eq!(binom(-7, 0), big(1));
        assert_eq!(binom(2, 3), big(0));
    }

    #[test]
    fn pascal_over_integers() {
        for n in -12..=12 {
            for k in 1..=10 {
                assert_eq!(binom(n, k), binom(n - 1, k) + binom(n - 1, k - 1), "n={n} k={k}");
                assert_eq!(BigInt::from(binom_i128(n, k).unwrap()), binom(n, k));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let kb = |m: i64, k| k_binomial_decomposition(&big(m), k).unwrap().coeffs;
        assert_eq!(kb(10, 3), vec![5]);
        assert_eq!(kb(12, 3), vec![5, 2, 1]);
        assert_eq!(kb(9, 3), vec![4, 3, 2]);
        let full = |m: i64, k| full_k_binomial_decomposition(&big(m), k).unwrap().coeffs;
        assert_eq!(full(10, 3), vec![4, 3, 3]);
        assert_eq!(full(12, 3), vec![5, 2, 1]);
        assert!(k_binomial_decomposition(&big(0), 3).is_err());
        assert!(full_k_binomial_decomposition(&big(-4), 3).is_err());
    }

    #[test]
    fn eval_examples() {
        let d = |kind, c: Vec<i64>| Decomposition::new(kind, 3, c);
        assert_eq!(eval_decomposition(&d(Kind::KBinomial, vec![5])), big(10));
        assert_eq!(eval_decomposition(&d(Kind::KBinomial, vec![5, 2, 1])), big(12));
        assert_eq!(eval_decomposition(&d(Kind::Full, vec![4, 3, 3])), big(10));
    }

    // Exhaustive search over Full-valid pairs (α0 >= α1 >= 1 for k = 2)
    // pins the value that the expansion rule must produce for (1, 2).
    #[test]
    fn full_of_one_at_k2_matches_search() {
        let mut hits = vec![];
        for a0 in 1..20 {
            for a1 in 1..=a0 {
                if binom(a0, 2) + binom(a1, 1) == big(1) {
                    hits.push(vec![a0, a1]);
                }
            }
        }
        assert_eq!(hits, vec![vec![1, 1]]);
        let d = full_k_binomial_decomposition(&big(1), 2).unwrap();
        assert_eq!(d.coeffs, hits[0]);
        assert!(d.is_well_formed());
    }

    #[test]
    fn kk_bound_examples() {
        assert_eq!(kk_lower_bound(&big(12), 3, 1).unwrap(), big(13));
        assert_eq!(kk_lower_bound(&big(10), 3, 1).unwrap(), big(10));
        for m in 1..50 {
            assert_eq!(kk_lower_bound(&big(m), 4, 0).unwrap(), big(m));
        }
        assert!(kk_lower_bound(&big(3), 3, 3).is_err());
    }

    #[test]
    fn round_trips_exhaustive() {
        for k in 1..=8usize {
            for m in 1..=100_000i64 {
                let mb = big(m);
                let d = k_binomial_decomposition(&mb, k).unwrap();
                assert!(d.is_well_formed(), "{d:?}");
                assert_eq!(eval_decomposition(&d), mb);
                let f = full_k_binomial_decomposition(&mb, k).unwrap();
                assert!(f.is_well_formed(), "{f:?}");
                assert_eq!(eval_decomposition(&f), mb);
                if d.len() == k {
                    assert_eq!(f.coeffs, d.coeffs);
                }
            }
        }
    }

    #[test]
    fn decomposition_of_sequence_round_trips() {
        // every strictly decreasing sequence with a_t >= k - t is a fixed point
        let k = 4usize;
        for a0 in 4..14i64 {
            for a1 in 3..a0 {
                for a2 in 2..a1 {
                    let c = vec![a0, a1, a2];
                    let m = eval_decomposition(&Decomposition::new(Kind::KBinomial, k, c.clone()));
                    assert_eq!(k_binomial_decomposition(&m, k).unwrap().coeffs, c);
                }
            }
        }
    }

    #[test]
    fn kk_bound_monotone() {
        for k in 2..=5usize {
            for i in 0..k {
                let mut prev = BigInt::zero();
                for m in 1..=10_000i64 {
                    let b = kk_lower_bound(&big(m), k, i).unwrap();
                    assert!(b >= prev);
                    prev = b;
                }
            }
        }
    }

    #[test]
    fn huge_arguments() {
        let m: BigInt = "3508125906207095591916".parse().unwrap();
        let d = k_binomial_decomposition(&m, 6).unwrap();
        assert_eq!(eval_decomposition(&d), m);
    }
}
