//! Parallel-vs-sequential timing for the data-parallel hot paths:
//! `carleson_sup` (one modulated-Hilbert FFT pass per sequence term) and
//! `tile_adjoint` (dense kernel quadrature over E(P)).
//!
//! With the default `parallel` feature the same workload is run once on a
//! single-thread rayon pool and once on the default pool, so one invocation
//! of `cargo bench -p tilelab` yields the comparison. With
//! `--no-default-features` only the plain sequential build is timed.

use criterion::{criterion_group, criterion_main, Criterion};
use tilelab::carleson::{build_kernel, carleson_sup, linearize, tile_adjoint, LacunarySequence};
use tilelab::dyadic::{DyadicInterval, FrequencyInterval, Tile};
use tilelab::setmodel::GridFunction;

struct Workload {
    f: GridFunction,
    seq: LacunarySequence,
}

fn workload(level: u32) -> Workload {
    let n = 1usize << level;
    let vals: Vec<f64> = (0..n)
        .map(|t| ((t * 2654435761 % 1_000) as f64 - 500.0) / 500.0)
        .collect();
    let f = GridFunction::from_real_values(level, &vals).unwrap();
    let seq = LacunarySequence::powers_of_two(24).truncate_to_band(level);
    Workload { f, seq }
}

fn run_carleson(w: &Workload) -> f64 {
    carleson_sup(&w.f, &w.seq).norm_l1()
}

fn run_adjoint(w: &Workload) -> f64 {
    let nfun = linearize(&w.f, &w.seq);
    let kern = build_kernel(0.25).unwrap();
    let k = 6u32;
    let p = Tile::new(
        FrequencyInterval::new(k, 2),
        DyadicInterval::new(k, 3).unwrap(),
    )
    .unwrap();
    tile_adjoint(&p, &w.f, &nfun, &w.seq, &kern)
        .unwrap()
        .norm_l1()
}

fn bench(c: &mut Criterion) {
    let w = workload(13);

    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let mut g = c.benchmark_group("carleson_sup_level13");
        g.bench_function("sequential", |b| {
            b.iter(|| single.install(|| run_carleson(&w)))
        });
        g.bench_function("parallel", |b| b.iter(|| run_carleson(&w)));
        g.finish();

        let mut g = c.benchmark_group("tile_adjoint_level13");
        g.bench_function("sequential", |b| {
            b.iter(|| single.install(|| run_adjoint(&w)))
        });
        g.bench_function("parallel", |b| b.iter(|| run_adjoint(&w)));
        g.finish();
    }

    #[cfg(not(feature = "parallel"))]
    {
        c.bench_function("carleson_sup_level13/sequential-build", |b| {
            b.iter(|| run_carleson(&w))
        });
        c.bench_function("tile_adjoint_level13/sequential-build", |b| {
            b.iter(|| run_adjoint(&w))
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench
}
criterion_main!(benches);
