use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ged_core::io::SplitMix64;
use ged_core::{select_k_smallest, Candidate};

fn selection(c: &mut Criterion) {
    let mut rng = SplitMix64::new(3);
    // Coarse cost grid: plenty of duplicates, so threshold ties are exercised.
    let pool: Vec<Candidate> = (0..200_000u64)
        .map(|tag| Candidate {
            cost: (rng.next_u64() % 65_536) as f64,
            tag,
        })
        .collect();

    let mut group = c.benchmark_group("select/pool200k");
    for k in [100usize, 10_000, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| select_k_smallest(&pool, k).unwrap());
        });
    }
    group.bench_function("full_sort_k10000", |b| {
        b.iter(|| {
            let mut all = pool.clone();
            all.sort_unstable_by_key(Candidate::key);
            all.truncate(10_000);
            all
        });
    });
    group.finish();
}

criterion_group!(benches, selection);
criterion_main!(benches);
