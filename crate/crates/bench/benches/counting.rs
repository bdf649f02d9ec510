use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use locfree_core::counting::spectrum::{charpoly_coefficients, spectrum_numeric};
use locfree_core::counting::{count_words, growth_rate, theta_sequence, CountVariant};
use locfree_core::oracle::{enumerate_ball, DEFAULT_BUDGET};

fn exact_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_words");
    for (n, k) in [(10, 100), (30, 240), (100, 1000)] {
        g.bench_with_input(BenchmarkId::new("group", format!("n{n}_k{k}")), &(n, k), |b, &(n, k)| {
            b.iter(|| count_words(n, k, CountVariant::Group).unwrap())
        });
    }
    g.bench_function("theta_n30_s400", |b| b.iter(|| theta_sequence(30, 400).unwrap()));
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum");
    g.sample_size(20);
    for n in [30, 60, 100] {
        g.bench_with_input(BenchmarkId::new("charpoly", n), &n, |b, &n| b.iter(|| charpoly_coefficients(n)));
        g.bench_with_input(BenchmarkId::new("eigenvalues", n), &n, |b, &n| b.iter(|| spectrum_numeric(n).unwrap()));
    }
    g.bench_function("growth_rate_restricted3_n60", |b| {
        b.iter(|| growth_rate(60, CountVariant::Restricted(3)).unwrap())
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("ball_group_n4_r7", |b| {
        b.iter(|| enumerate_ball(4, 7, CountVariant::Group, DEFAULT_BUDGET).unwrap())
    });
    g.finish();
}

criterion_group!(benches, exact_counts, spectrum, oracle);
criterion_main!(benches);
