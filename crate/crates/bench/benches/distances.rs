use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use l1match_bench::{periodic_pair, random_pair};
use l1match_core::convolve::{correlate_with, Route};
use l1match_core::l1approx::approximate_with;
use l1match_core::{exact_l1, kapprox_l1, ApproxParams, RleL1, WorkCounters};

fn correlation(c: &mut Criterion) {
    let mut group = c.benchmark_group("correlate");
    for (n, m) in [(1024, 64), (4096, 512), (16384, 2048)] {
        let a: Vec<i64> = (0..n as i64).map(|i| (i * 7919) % 1000).collect();
        let b: Vec<i64> = (0..m as i64).map(|i| (i * 104_729) % 1000).collect();
        for route in [Route::Direct, Route::Transform] {
            group.bench_with_input(
                BenchmarkId::new(format!("{route:?}"), format!("{n}x{m}")),
                &(),
                |bench, _| {
                    bench.iter(|| correlate_with(black_box(&a), black_box(&b), route).unwrap())
                },
            );
        }
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let (t, p) = random_pair(4096, 256, 255, 1);
    c.bench_function("exact_l1 4096x256 M=255", |b| {
        b.iter(|| exact_l1(black_box(&t), black_box(&p)).unwrap())
    });
}

fn approximation(c: &mut Criterion) {
    let mut group = c.benchmark_group("approximate");
    group.sample_size(10);
    let (t, p) = random_pair(2048, 256, (1 << 16) - 1, 2);
    for eps in [0.5, 0.25, 0.1] {
        let params = ApproxParams::new(eps, (1 << 16) - 1, t.len())
            .unwrap()
            .with_repetitions(8)
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(eps), &params, |b, params| {
            b.iter(|| approximate_with(&t, &p, params, 3, &WorkCounters::new()).unwrap())
        });
    }
    group.finish();
}

fn k_approximation(c: &mut Criterion) {
    let mut group = c.benchmark_group("kapprox");
    group.sample_size(10);
    let (t, p) = random_pair(1024, 128, 15, 4);
    group.bench_function("filter+verify", |b| {
        b.iter(|| kapprox_l1(&t, &p, 11, 5, &RleL1).unwrap())
    });
    let (t, p) = periodic_pair(1024, 128, 4, 3, 6);
    group.bench_function("kernel", |b| {
        b.iter(|| kapprox_l1(&t, &p, 11, 5, &RleL1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, correlation, exact, approximation, k_approximation);
criterion_main!(benches);
