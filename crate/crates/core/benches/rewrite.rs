//! Compares the parallel generator-rewriting batch against the sequential
//! fallback.  Run with `cargo bench` (rayon path per default features) —
//! both paths are compiled in, so one run reports both.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use psl2_lifts::lifts::{sigma_system, sigma_system_seq};
use psl2_lifts::prepared::{prepare, FreshSymbols};
use psl2_lifts::GroupSpec;

fn bench_rewriting(c: &mut Criterion) {
    let mut group = c.benchmark_group("sigma_system");
    group.sample_size(10);
    for (spec, modulus) in [("gamma0:8", 16u32), ("gamma1:6", 12u32), ("gamma0:16", 32u32)] {
        let base = prepare(&spec.parse::<GroupSpec>().unwrap()).unwrap();
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("{spec}@{modulus}")),
            &modulus,
            |b, &m| b.iter(|| sigma_system(&base, m, &FreshSymbols).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("{spec}@{modulus}")),
            &modulus,
            |b, &m| b.iter(|| sigma_system_seq(&base, m, &FreshSymbols).unwrap()),
        );
    }
    group.finish();
}

fn bench_symbol_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_farey");
    group.sample_size(10);
    for spec in ["gamma:8", "gamma:16", "gamma0:20"] {
        let parsed: GroupSpec = spec.parse().unwrap();
        group.bench_function(spec, |b| {
            b.iter(|| psl2_lifts::prepared::build_symbol(&parsed).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_rewriting, bench_symbol_build);
criterion_main!(benches);
