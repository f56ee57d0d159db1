use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use x0cubic_bench::HARD_LEVELS;
use x0cubic_core::{bounds, sieve, EcDb, SieveConfig};

fn classify(c: &mut Criterion) {
    let db = EcDb::bundled();
    let cfg = SieveConfig::default();
    let mut group = c.benchmark_group("classify");
    for n in HARD_LEVELS {
        group.bench_function(n.to_string(), |b| {
            b.iter(|| sieve::classify(black_box(n), &db, &cfg).unwrap())
        });
    }
    group.finish();
    c.bench_function("classify_all", |b| {
        b.iter(|| sieve::classify_all(&db, &cfg).unwrap())
    });
}

fn scan(c: &mut Criterion) {
    let pool = SieveConfig::default().prime_pool;
    c.bench_function("scan 300..3000", |b| {
        b.iter(|| bounds::scan_not_trielliptic(300, black_box(3000), &pool).unwrap())
    });
}

criterion_group!(benches, classify, scan);
criterion_main!(benches);
