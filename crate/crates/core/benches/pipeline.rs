use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use residue_sieve_core::field::FieldDescriptor;
use residue_sieve_core::fit::{build_dense_set, fit_polynomial};
use residue_sieve_core::heights::HeightValue;
use residue_sieve_core::params::FitParams;
use residue_sieve_core::primes::{enumerate_primes, PrimeWindow, WindowCaps};
use residue_sieve_core::residue::{profile, PointSet, ProjPoint};

fn parabola(limit: i64, bound: u64) -> PointSet {
    let pts: Vec<ProjPoint> = (-limit..=limit)
        .map(|a| ProjPoint::from_integers(&[1, a, a * a]).unwrap())
        .collect();
    PointSet::new(
        FieldDescriptor::rationals(),
        2,
        HeightValue::from_integer(bound),
        pts,
    )
    .unwrap()
    .0
}

fn window_primes(lo: u64, hi: u64) -> Vec<residue_sieve_core::primes::Prime> {
    let window = PrimeWindow::rational_interval(
        num::BigRational::from_integer(lo.into()),
        num::BigRational::from_integer(hi.into()),
    )
    .unwrap();
    enumerate_primes(&window, &WindowCaps::default()).unwrap()
}

/// Runs f inside a pool of the requested width so the sequential build
/// still compiles; without rayon the width is ignored.
#[cfg(feature = "parallel")]
fn with_threads<T>(threads: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T>(_threads: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    f()
}

fn thread_counts() -> Vec<usize> {
    if cfg!(feature = "parallel") {
        let all = std::thread::available_parallelism().map_or(4, |n| n.get());
        if all > 1 {
            vec![1, all]
        } else {
            vec![1]
        }
    } else {
        vec![1]
    }
}

fn bench_profile(c: &mut Criterion) {
    let set = parabola(1000, 1_000_000);
    let primes = window_primes(100, 200);
    let mut g = c.benchmark_group("residue_profile_2001pts_21primes");
    for t in thread_counts() {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| with_threads(t, || profile(&set, &primes).unwrap()));
        });
    }
    g.finish();
}

fn bench_dense_set(c: &mut Criterion) {
    let set = parabola(1000, 1_000_000);
    let primes = window_primes(100, 200);
    let mut params = FitParams::new(2, num::BigRational::from_integer(0.into()));
    params.r_override = Some(40);
    params.seed = 7;
    let mut g = c.benchmark_group("dense_set_2001pts");
    for t in thread_counts() {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| with_threads(t, || build_dense_set(&set, &primes, &params).unwrap()));
        });
    }
    g.finish();
}

fn bench_fit(c: &mut Criterion) {
    let set = parabola(250, 62_500);
    let params = FitParams::new(2, num::BigRational::from_integer(1.into()));
    let mut g = c.benchmark_group("fit_501pts");
    g.sample_size(10);
    for t in thread_counts() {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| with_threads(t, || fit_polynomial(&set, &params).unwrap()));
        });
    }
    g.finish();
}

criterion_group!(benches, bench_profile, bench_dense_set, bench_fit);
criterion_main!(benches);
