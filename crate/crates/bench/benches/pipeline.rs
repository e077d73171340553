use criterion::{criterion_group, criterion_main, Criterion};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

use dcqd_core::channel::{ChiMatrix1Q, ChiMatrix2Q};
use dcqd_core::faulty::{build_faulty_lambda, reconstruct_faulty, total_map_probabilities, FaultySetting};
use dcqd_core::protocol::{numeric_lambda, reconstruct_ideal, sample_shots, simulate_probabilities};
use dcqd_core::qobj::InputParams;

fn optimal() -> InputParams {
    InputParams::new(FRAC_PI_8, FRAC_PI_2)
}

fn bench_numeric_lambda(c: &mut Criterion) {
    let params = optimal();
    c.bench_function("numeric_lambda", |b| b.iter(|| numeric_lambda(&params)));
}

fn bench_faulty_lambda(c: &mut Criterion) {
    let s = FaultySetting::new(
        ChiMatrix2Q::depolarizing(0.8).unwrap(),
        ChiMatrix2Q::depolarizing(0.8).unwrap(),
        optimal(),
    )
    .unwrap();
    c.bench_function("build_faulty_lambda_depolarizing", |b| {
        b.iter(|| build_faulty_lambda(&s))
    });
}

fn bench_reconstruct_ideal(c: &mut Criterion) {
    let params = optimal();
    let chi = ChiMatrix1Q::random(5, true, false);
    let pv = simulate_probabilities(&chi, &params).unwrap();
    c.bench_function("reconstruct_ideal", |b| {
        b.iter(|| reconstruct_ideal(&pv, &params).unwrap())
    });
}

fn bench_reconstruct_faulty(c: &mut Criterion) {
    let s = FaultySetting::new(
        ChiMatrix2Q::depolarizing(0.8).unwrap(),
        ChiMatrix2Q::depolarizing(0.8).unwrap(),
        optimal(),
    )
    .unwrap();
    let chi = ChiMatrix1Q::random(5, true, false);
    let pv = total_map_probabilities(&chi, &s).unwrap();
    c.bench_function("reconstruct_faulty_depolarizing", |b| {
        b.iter(|| reconstruct_faulty(&pv, &s).unwrap())
    });
}

fn bench_sample_shots(c: &mut Criterion) {
    let params = optimal();
    let chi = ChiMatrix1Q::random(5, true, false);
    let pv = simulate_probabilities(&chi, &params).unwrap();
    c.bench_function("sample_shots_10k", |b| {
        b.iter(|| sample_shots(&pv, 10_000, 17))
    });
}

criterion_group!(
    benches,
    bench_numeric_lambda,
    bench_faulty_lambda,
    bench_reconstruct_ideal,
    bench_reconstruct_faulty,
    bench_sample_shots
);
criterion_main!(benches);
