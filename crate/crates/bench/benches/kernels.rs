use borel_pde::convolution::convolve;
use borel_pde::solver::apply_n;
use borel_pde::transforms::{ilt_contour, ilt_scaled_ex2, ContourSpec, ScaledIltSpec};
use borel_pde::{make_grid, BorelFunction, Complex64, Example, Problem, ProblemSpec, TimeGrid};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn bench_convolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for n in [64, 128, 256] {
        let grid = make_grid(0.0, 5.0, n, 2.0).unwrap();
        let times = TimeGrid::uniform(0.05, 16).unwrap();
        let f = BorelFunction::from_values(grid.clone(), times.clone(), 0.5, |p, t| (-p).exp() * (1.0 + t)).unwrap();
        let g = BorelFunction::from_values(grid, times, 0.0, |p, _| 1.0 / (1.0 + p * p)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| convolve(black_box(&f), black_box(&g)).unwrap()));
    }
    group.finish();
}

fn bench_ilt(c: &mut Criterion) {
    let grid = make_grid(0.0, 5.0, 256, 3.0).unwrap();
    let spec = ContourSpec::unit_apex();
    c.bench_function("ilt_contour", |b| {
        b.iter(|| ilt_contour(|y, _| y.powf(-2.5), grid.clone(), TimeGrid::single(), black_box(&spec), 1.5).unwrap())
    });
    let times = TimeGrid::uniform(0.05, 16).unwrap();
    let scaled = ScaledIltSpec { beta: 3.5, delta: -1.0 };
    c.bench_function("ilt_scaled", |b| {
        b.iter(|| ilt_scaled_ex2(black_box(scaled), Complex64::new(1.0, 0.0), grid.clone(), times.clone(), &spec).unwrap())
    });
}

fn bench_apply_n(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_n");
    group.sample_size(20);
    for (name, example) in [("ex1", Example::Ex1 { gamma: 0.5 }), ("ex2", Example::Ex2)] {
        let problem = Problem::new(ProblemSpec::new(example, 0.05)).unwrap();
        group.bench_function(name, |b| b.iter(|| apply_n(black_box(&problem.f0), &problem).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_convolve, bench_ilt, bench_apply_n);
criterion_main!(benches);
