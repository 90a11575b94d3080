use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qclone_core::{
    build_fom, optimal_symmetric, optimize_map, phase_state, tradeoff_frontier, uniform_grid, FrontierSolver, Output,
    PcParams,
};

fn symmetric(c: &mut Criterion) {
    c.bench_function("optimal_symmetric d=2..100", |b| {
        b.iter(|| {
            (2..=100)
                .map(|d| optimal_symmetric(black_box(d)).unwrap().0)
                .sum::<f64>()
        })
    });
}

fn frontier(c: &mut Criterion) {
    let grid = uniform_grid(41);
    let mut group = c.benchmark_group("tradeoff_frontier");
    for d in [2, 10, 100] {
        group.bench_with_input(BenchmarkId::new("exact", d), &d, |b, &d| {
            b.iter(|| tradeoff_frontier(d, &grid, FrontierSolver::Exact).unwrap())
        });
    }
    group.bench_function("search d=3 p=0.7", |b| {
        b.iter(|| tradeoff_frontier(3, &[0.7], FrontierSolver::Search { restarts: 20, seed: 1 }).unwrap())
    });
    group.finish();
}

fn fidelity(c: &mut Criterion) {
    let mut group = c.benchmark_group("ansatz_fidelity");
    for d in [4, 16] {
        let a = PcParams::from(optimal_symmetric(d).unwrap().1).ansatz_matrix().unwrap();
        let psi = phase_state(&(0..d).map(|k| 0.37 * k as f64).collect::<Vec<_>>()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| a.fidelity(black_box(&psi), Output::B).unwrap())
        });
    }
    group.finish();
}

fn verifier(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize_map");
    group.sample_size(10);
    for d in [2, 3] {
        let fom = build_fom(d).unwrap().with_weight(0.7).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &fom, |b, fom| {
            b.iter(|| optimize_map(fom, 1e-10, 10_000).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, symmetric, frontier, fidelity, verifier);
criterion_main!(benches);
