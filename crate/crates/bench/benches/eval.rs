use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dmc_bench::workloads;
use dmc_core::derived::numeral;
use dmc_core::{elaborate, verify_model_equations, Config, EvalOptions, LevelIndex};

fn evaluation(c: &mut Criterion) {
    let opts = EvalOptions::default();
    for w in workloads() {
        c.bench_function(&format!("eval {}", w.name), |b| {
            b.iter(|| w.program.run(black_box(&w.input), &opts).unwrap())
        });
    }
}

fn typechecking(c: &mut Criterion) {
    let cfg = Config::default();
    let t = numeral(&dmc_bench::wide(64), LevelIndex::new(1, 2));
    c.bench_function("elaborate 64-bit numeral", |b| {
        b.iter(|| elaborate(black_box(&t), &cfg).unwrap())
    });
}

fn model(c: &mut Criterion) {
    c.bench_function("verify model i=5", |b| {
        b.iter(|| verify_model_equations(black_box(5)))
    });
}

criterion_group!(benches, evaluation, typechecking, model);
criterion_main!(benches);
