use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use primespan_core::verify::{verify_firoozbakht, verify_theorem1};
use primespan_core::{Boundary, SieveConfig, VerifyOptions};

fn sieve(c: &mut Criterion) {
    let mut group = c.benchmark_group("sieve");
    for hi in [1_000_000u64, 10_000_000, 100_000_000] {
        group.throughput(Throughput::Elements(hi));
        group.bench_with_input(BenchmarkId::from_parameter(hi), &hi, |b, &hi| {
            b.iter(|| {
                SieveConfig::default()
                    .sieve(0, black_box(hi))
                    .unwrap()
                    .len()
            })
        });
    }
    group.finish();
}

fn segment_size(c: &mut Criterion) {
    let mut group = c.benchmark_group("segment_size");
    for seg in [1u64 << 12, 1 << 15, 1 << 18, 1 << 21] {
        group.bench_with_input(BenchmarkId::from_parameter(seg), &seg, |b, &seg| {
            let config = SieveConfig::default().with_segment_size(seg);
            b.iter(|| config.sieve(0, 20_000_000).unwrap().len())
        });
    }
    group.finish();
}

fn gaps(c: &mut Criterion) {
    let mut group = c.benchmark_group("gaps");
    group.sample_size(10);
    group.bench_function("stream 10^7", |b| {
        b.iter(|| {
            SieveConfig::default()
                .iterate_gaps(black_box(10_000_000))
                .unwrap()
                .map(|r| r.g_n)
                .max()
        })
    });
    group.bench_function("firoozbakht 10^7", |b| {
        let opts = VerifyOptions::default();
        b.iter(|| {
            verify_firoozbakht(&opts, black_box(10_000_000))
                .unwrap()
                .scanned
        })
    });
    group.finish();
}

fn theorem1(c: &mut Criterion) {
    let mut group = c.benchmark_group("t1");
    group.sample_size(10);
    let opts = VerifyOptions::default();
    group.bench_function("k<=100 n<=10^4", |b| {
        b.iter(|| {
            verify_theorem1(&opts, 100, 10_000, Boundary::OpenOpen)
                .unwrap()
                .scanned
        })
    });
    group.finish();
}

criterion_group!(benches, sieve, segment_size, gaps, theorem1);
criterion_main!(benches);
