use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spherecurve::{enumerate_words, realize_all, reductivity, survey, Convention, GaussWord};

fn words() -> Vec<(&'static str, GaussWord)> {
    [
        ("trefoil", "1 2 3 1 2 3"),
        ("n6", "1 2 3 1 2 3 4 5 6 4 5 6"),
        ("n8", "1 2 3 4 5 1 6 3 7 5 8 6 2 7 4 8"),
    ]
    .into_iter()
    .map(|(name, s)| (name, GaussWord::parse(s).unwrap()))
    .collect()
}

fn canonical_key(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_key");
    for (name, word) in words() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &word, |b, w| b.iter(|| black_box(w).canonical_key()));
    }
    group.finish();
}

fn embeddings(c: &mut Criterion) {
    let mut group = c.benchmark_group("realize_all");
    for (name, word) in words() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &word, |b, w| b.iter(|| realize_all(black_box(w), true)));
    }
    group.finish();
}

fn reductivities(c: &mut Criterion) {
    let mut group = c.benchmark_group("reductivity");
    for (name, word) in words() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &word, |b, w| b.iter(|| reductivity(black_box(w)).unwrap()));
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_words");
    group.sample_size(10);
    for n in [4, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_words(n, Convention::default()).unwrap())
        });
    }
    group.finish();
}

fn surveys(c: &mut Criterion) {
    let mut group = c.benchmark_group("survey");
    group.sample_size(10);
    group.bench_function("6", |b| b.iter(|| survey(6, Convention::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, canonical_key, embeddings, reductivities, enumeration, surveys);
criterion_main!(benches);
