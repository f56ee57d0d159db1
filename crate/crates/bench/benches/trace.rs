use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use x0cubic_bench::TRACE_CASES;
use x0cubic_core::hecke;

fn traces(c: &mut Criterion) {
    let mut group = c.benchmark_group("trace_tm");
    for (n, m) in TRACE_CASES {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}/{m}")),
            &(n, m),
            |b, &(n, m)| b.iter(|| hecke::trace_tm(black_box(n), black_box(m)).unwrap()),
        );
    }
    group.finish();
}

fn zeta(c: &mut Criterion) {
    c.bench_function("local_zeta 86 3", |b| {
        b.iter(|| hecke::local_zeta(black_box(86), black_box(3)).unwrap())
    });
}

criterion_group!(benches, traces, zeta);
criterion_main!(benches);
