//! Exhaustive sweeps and the decision procedure.
//!
//! With the default `parallel` feature each sweep is timed twice, inside a
//! one-thread rayon pool and on the global pool. The pure sequential fallback
//! is measured by building without the feature; criterion baselines compare
//! the two builds:
//!
//! ```text
//! cargo bench -p kkshadow --no-default-features -- --save-baseline sequential
//! cargo bench -p kkshadow -- --baseline sequential
//! ```

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kkshadow::construct::decide_extremal_with_depth;
use kkshadow::extremal::is_extremal_direct;
use kkshadow::numeric::{eval_decomposition, Decomposition, Kind};
use kkshadow::oracle::{depth_census, scan_families, verify_all, DEFAULT_BUDGET};
use kkshadow::par::is_parallel;
use std::hint::black_box;

fn modes() -> Vec<(&'static str, Option<usize>)> {
    if is_parallel() {
        vec![("one-thread", Some(1)), ("rayon", None)]
    } else {
        vec![("sequential", None)]
    }
}

fn in_mode<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        return rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(f);
    }
    let _ = threads;
    f()
}

fn extremal_count(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan_extremal");
    g.sample_size(10);
    for (n, k) in [(5, 2), (6, 4)] {
        for (mode, threads) in modes() {
            g.bench_with_input(BenchmarkId::new(mode, format!("n{n}k{k}")), &(n, k), |b, &(n, k)| {
                b.iter(|| {
                    in_mode(threads, || {
                        scan_families(
                            n,
                            k,
                            DEFAULT_BUDGET,
                            |s| u64::from(is_extremal_direct(s).unwrap()),
                            |a, b| a + b,
                            0,
                        )
                        .unwrap()
                    })
                })
            });
        }
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("depth_census");
    g.sample_size(10);
    for (mode, threads) in modes() {
        g.bench_function(BenchmarkId::new(mode, "n6k3"), |b| {
            b.iter(|| in_mode(threads, || depth_census(6, 3, DEFAULT_BUDGET).unwrap().total))
        });
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_all");
    g.sample_size(10);
    for (mode, threads) in modes() {
        g.bench_function(BenchmarkId::new(mode, "n5k3"), |b| {
            b.iter(|| in_mode(threads, || verify_all(5, 3, DEFAULT_BUDGET).unwrap().pass))
        });
    }
    g.finish();
}

fn decide(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide");
    g.sample_size(10);
    for (n, k) in [(1_000usize, 10usize), (10_000, 20)] {
        let base = n as i64 - n as i64 / 10;
        let step = base / (2 * k as i64);
        let coeffs: Vec<i64> = (0..k as i64).map(|i| base - step * i).collect();
        let m = eval_decomposition(&Decomposition::new(Kind::KBinomial, k, coeffs));
        g.bench_with_input(BenchmarkId::new("all_depths", format!("n{n}k{k}")), &m, |b, m| {
            b.iter(|| (0..k).filter(|&t| decide_extremal_with_depth(n, k, black_box(m), t).unwrap().is_some()).count())
        });
    }
    g.finish();
}

criterion_group!(benches, extremal_count, census, verify, decide);
criterion_main!(benches);
