use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nearfield_bench::config;
use nearfield_core::pulse::{gate_error, repeated_gate_population, scaling_order, x_gate, AmplitudeError};
use nearfield_core::{run_scenario, ScenarioId, SequenceKind};

fn sequences(c: &mut Criterion) {
    let bb1 = x_gate(SequenceKind::Bb1);
    let eps = AmplitudeError::new(0.06).unwrap();
    c.bench_function("bb1 unitary", |b| b.iter(|| black_box(&bb1).unitary(eps)));
    c.bench_function("bb1 gate error", |b| {
        b.iter(|| gate_error(SequenceKind::Bb1, black_box(0.06)))
    });
    c.bench_function("bb1 55 gates", |b| {
        b.iter(|| repeated_gate_population(SequenceKind::Bb1, 55, black_box(-0.06)))
    });
    c.bench_function("scaling fit sk1", |b| {
        b.iter(|| scaling_order(black_box(SequenceKind::Sk1)))
    });
}

fn scenarios(c: &mut Criterion) {
    let fig7 = config(ScenarioId::Fig7, &["sequence.kind=bb1"]);
    let fig6 = config(ScenarioId::Fig6, &[]);
    let mut group = c.benchmark_group("scenario");
    group.sample_size(20);
    group.bench_function("fig7 bb1", |b| b.iter(|| run_scenario(black_box(&fig7))));
    group.bench_function("fig6", |b| b.iter(|| run_scenario(black_box(&fig6))));
    group.finish();
}

criterion_group!(benches, sequences, scenarios);
criterion_main!(benches);
