use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box as keep;

use cospan_bench::{composable, generator, matrix, net, open_process, relations, span};
use cospan_core::exactlin::kernel;
use cospan_core::finset::pushout;
use cospan_core::linrel::compose_relations;
use cospan_core::openmarkov::{black_box, compose_open, exp_generator};
use cospan_core::opennet::are_isomorphic;

fn exact_linear_algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("exactlin");
    for n in [4, 8, 16] {
        let m = matrix(n, 2 * n);
        group.bench_with_input(BenchmarkId::new("rref", n), &m, |b, m| b.iter(|| keep(m.rref())));
        group.bench_with_input(BenchmarkId::new("kernel", n), &m, |b, m| b.iter(|| keep(kernel(m))));
    }
    group.finish();
}

fn pushouts(c: &mut Criterion) {
    let mut group = c.benchmark_group("pushout");
    for n in [8, 64, 512] {
        let (f, g) = span(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(f, g), |b, (f, g)| {
            b.iter(|| keep(pushout(f, g).unwrap()))
        });
    }
    group.finish();
}

fn open_markov(c: &mut Criterion) {
    let mut group = c.benchmark_group("open_markov");
    for n in [4, 8, 12] {
        let m = open_process(n, 2);
        group.bench_with_input(BenchmarkId::new("black_box", n), &m, |b, m| b.iter(|| keep(black_box(m))));
        let (m, p) = composable(n, 2);
        group.bench_with_input(BenchmarkId::new("compose", n), &(m, p), |b, (m, p)| {
            b.iter(|| keep(compose_open(m, p).unwrap()))
        });
        let h = generator(n);
        group.bench_with_input(BenchmarkId::new("exp", n), &h, |b, h| b.iter(|| keep(exp_generator(h.h(), 1.0))));
    }
    group.finish();
}

fn linear_relations(c: &mut Criterion) {
    let mut group = c.benchmark_group("linrel");
    for dim in [2, 4, 8] {
        let (r, s) = relations(dim);
        group.bench_with_input(BenchmarkId::new("compose", dim), &(r, s), |b, (r, s)| {
            b.iter(|| keep(compose_relations(r, s).unwrap()))
        });
    }
    group.finish();
}

fn isomorphism(c: &mut Criterion) {
    let mut group = c.benchmark_group("iso");
    for n in [3, 6, 9] {
        let m = net(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| keep(are_isomorphic(m, m).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, exact_linear_algebra, pushouts, open_markov, linear_relations, isomorphism);
criterion_main!(benches);
