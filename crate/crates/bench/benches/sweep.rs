use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use focpc_bench::{order, resource_mayer};
use focpc_core::pmp::forward_backward_sweep;
use focpc_core::solver::{solve_caputo_ivp, IvpSpec};
use focpc_core::{SweepOptions, TimeGrid};

fn ivp(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_caputo_ivp");
    for &n in &[500usize, 2000] {
        let spec = IvpSpec {
            rhs: |_t: f64, x: &[f64]| x.to_vec(),
            x0: vec![1.0],
            grid: TimeGrid::new(0.0, 1.0, n).unwrap(),
            alpha: order(0.7),
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, spec| {
            b.iter(|| solve_caputo_ivp(spec))
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("resource_sweep");
    group.sample_size(10);
    for &alpha in &[0.6, 1.0] {
        let spec = resource_mayer(alpha);
        let grid = spec.grid(500).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(alpha), &spec, |b, spec| {
            b.iter(|| forward_backward_sweep(spec, grid, &SweepOptions::default()))
        });
    }
    group.finish();
}

criterion_group!(benches, ivp, sweep);
criterion_main!(benches);
