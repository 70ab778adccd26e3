use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pgrand_bench::fixture;
use pgrand_core::analytic::{error_probability, min_fidelity, PgrandModelPoint};
use pgrand_core::{build_table, sample_error, BuildOptions, DepolarizingParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lut_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("lut_build");
    g.sample_size(10);
    for (n, t) in [(32, 3), (32, 4), (64, 3)] {
        let h = fixture(n, n / 2, 1);
        let noise = DepolarizingParams::new(n, 0.01).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("n{n}"), t), &t, |b, &t| {
            b.iter(|| build_table(&h, t, &noise, &BuildOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn syndrome_and_decode(c: &mut Criterion) {
    let mut g = c.benchmark_group("shot");
    for n in [32, 128] {
        let h = fixture(n, n / 2, 2);
        let cols = h.syndrome_columns();
        let noise = DepolarizingParams::new(n, 0.01).unwrap();
        let table = build_table(&h, 2, &noise, &BuildOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let errors: Vec<_> = (0..256).map(|_| sample_error(&noise, &mut rng)).collect();
        g.bench_function(BenchmarkId::new("syndrome", n), |b| {
            b.iter(|| {
                for e in &errors {
                    black_box(cols.syndrome_of(e).unwrap());
                }
            })
        });
        let syndromes: Vec<_> = errors.iter().map(|e| cols.syndrome_of(e).unwrap()).collect();
        g.bench_function(BenchmarkId::new("decode", n), |b| {
            b.iter(|| {
                for s in &syndromes {
                    black_box(table.decode(s).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn analytic(c: &mut Criterion) {
    let mut g = c.benchmark_group("analytic");
    for n in [32, 256] {
        let pt = PgrandModelPoint::new(n, n / 2, 0.01, n).unwrap();
        g.bench_function(BenchmarkId::new("error_probability", n), |b| {
            b.iter(|| error_probability(black_box(&pt)).unwrap())
        });
    }
    g.bench_function("min_fidelity_61_12", |b| b.iter(|| min_fidelity(black_box(61), 12).unwrap()));
    g.finish();
}

criterion_group!(benches, lut_build, syndrome_and_decode, analytic);
criterion_main!(benches);
