use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qextremal::{containment, graph, spectra, trees};
use qextremal_bench::hosts;

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_radius");
    for (name, g) in hosts() {
        group.bench_function(name, |b| b.iter(|| spectra::spectral_radius(black_box(&g), 1e-10).unwrap()));
    }
    let big = graph::make_s_plus(2210, 3).unwrap();
    group.bench_function("S+(2210,3)", |b| b.iter(|| spectra::spectral_radius(black_box(&big), 1e-10).unwrap()));
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_trees");
    for t in [8usize, 10, 12] {
        group.bench_function(format!("t={t}"), |b| b.iter(|| trees::enumerate_trees(black_box(t)).unwrap().count()));
    }
    group.finish();
}

fn containment_all(c: &mut Criterion) {
    let mut group = c.benchmark_group("contains_all_trees");
    group.sample_size(10);
    for (name, g) in hosts() {
        let t = if name.starts_with('K') { 10 } else { 6 };
        group.bench_function(name, |b| b.iter(|| containment::contains_all_trees(black_box(&g), t).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, spectral, enumeration, containment_all);
criterion_main!(benches);
