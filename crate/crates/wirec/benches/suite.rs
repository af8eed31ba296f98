use criterion::{criterion_group, criterion_main, Criterion};

use wirec::exec::ExecMode;
use wirec::lts::explore;
use wirec::stdlib::{law_instances, ring, run_laws};
use wirec::syntax::{Alphabet, Mode};

fn binary_alphabet() -> Alphabet {
    Alphabet::new(vec!["0".to_string(), "1".to_string()]).unwrap()
}

/// The same law batch evaluated with both strategies, so a single run shows
/// the speedup (or lack of one) on this machine.
fn law_batch(c: &mut Criterion) {
    let alphabet = binary_alphabet();
    let instances = law_instances(&alphabet, 2, 7);
    let mut group = c.benchmark_group("laws");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| run_laws(&instances, &alphabet, 10_000, ExecMode::Sequential))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| run_laws(&instances, &alphabet, 10_000, ExecMode::Parallel))
    });
    group.finish();
}

/// Exploring the closed flip-flop ring: a single, inherently sequential
/// fixpoint, as a baseline for the per-instance cost.
fn ring_exploration(c: &mut Criterion) {
    let alphabet = binary_alphabet();
    c.bench_function("explore_ring", |b| {
        b.iter(|| explore(&ring(0, 1), &alphabet, Mode::Undirected, 10_000).unwrap())
    });
}

criterion_group!(benches, law_batch, ring_exploration);
criterion_main!(benches);
