use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use matpow_bench::{dense, full_minpoly, split_minpoly, stochastic};
use matpow_core::{closed_form, matrix_power, minimal_polynomial, PowerMethod, Poly};

fn power_methods(c: &mut Criterion) {
    let a = split_minpoly();
    let mut group = c.benchmark_group("matrix_power");
    for exp in [6u32, 10, 14] {
        let n = 1u64 << exp;
        for method in [PowerMethod::ViaMinpoly, PowerMethod::ViaCharpoly, PowerMethod::BinaryMatrix] {
            group.bench_with_input(BenchmarkId::new(method.tag(), n), &n, |b, &n| {
                b.iter(|| matrix_power(black_box(&a), n, method).unwrap())
            });
        }
    }
    group.bench_function("naive/64", |b| {
        b.iter(|| matrix_power(black_box(&a), 64, PowerMethod::Naive).unwrap())
    });
    group.finish();
}

fn modpow(c: &mut Criterion) {
    let q = minimal_polynomial(&full_minpoly()).unwrap().q;
    c.bench_function("modpow/k^4096 mod cubic", |b| {
        b.iter(|| Poly::modpow(black_box(4096), &q).unwrap())
    });
}

fn minpoly(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal_polynomial");
    for dim in [3usize, 5, 8] {
        let a = dense(dim);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| minimal_polynomial(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn closed_forms(c: &mut Criterion) {
    let p = stochastic();
    c.bench_function("closed_form/stochastic", |b| b.iter(|| closed_form(black_box(&p)).unwrap()));
}

criterion_group!(benches, power_methods, modpow, minpoly, closed_forms);
criterion_main!(benches);
