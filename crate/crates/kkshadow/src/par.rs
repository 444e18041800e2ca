//! Thin switch between rayon and sequential iteration.
//!
//! Every bulk sweep in the crate goes through [`map_reduce`] so the two
//! execution modes share one code path and produce identical results:
//! work is split into index chunks and the partial results are merged in
//! index order, which keeps merged reports deterministic.

/// Maps `f` over `0..len` in chunks and folds the chunk results in index
/// order with `merge`.
pub fn map_reduce<T, F, M>(len: u64, chunk: u64, f: F, merge: M, zero: T) -> T
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let nchunks = len.div_ceil(chunk);
    let bounds = move |c: u64| (c * chunk, ((c + 1) * chunk).min(len));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let parts: Vec<T> = (0..nchunks)
            .into_par_iter()
            .map(|c| {
                let (lo, hi) = bounds(c);
                f(lo, hi)
            })
            .collect();
        parts.into_iter().fold(zero, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..nchunks).fold(zero, |acc, c| {
            let (lo, hi) = bounds(c);
            merge(acc, f(lo, hi))
        })
    }
}

/// Order-preserving parallel map over a slice.
pub fn map_vec<A, B, F>(items: &[A], f: F) -> Vec<B>
where
    A: Sync,
    B: Send,
    F: Fn(&A) -> B + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
