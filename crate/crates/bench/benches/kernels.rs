use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use theta_bounds::bounds::theta3_constant;
use theta_bounds::geometry::reduce_to_fundamental_domain;
use theta_bounds::orbits::{gamma_theta_orbit, TorusPair};
use theta_bounds::theta::{kappa_eta, scaled_theta3, theta_modulus, weyl_sum, Cutoff, TruncationBudget};
use theta_bounds_bench::{grid, horocycle_points};

fn reduction(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduce");
    for (n, p) in horocycle_points() {
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| reduce_to_fundamental_domain(black_box(p)))
        });
    }
    g.finish();
}

fn theta(c: &mut Criterion) {
    let budget = TruncationBudget::default();
    let f = Cutoff::gaussian(1);
    let mut g = c.benchmark_group("theta_modulus");
    for (n, p) in horocycle_points() {
        let reduced = reduce_to_fundamental_domain(&p).unwrap().point;
        g.bench_with_input(BenchmarkId::new("raw", n), &p, |b, p| {
            b.iter(|| theta_modulus(&f, black_box(p), &budget))
        });
        g.bench_with_input(BenchmarkId::new("reduced", n), &reduced, |b, p| {
            b.iter(|| theta_modulus(&f, black_box(p), &budget))
        });
    }
    g.finish();
    let sharp = Cutoff::sharp_indicator(1);
    c.bench_function("weyl_sum sharp N=1024", |b| {
        b.iter(|| weyl_sum(&sharp, 1024, black_box(0.377), &[0.5], &[0.5], &budget))
    });
}

fn theta3_scan(c: &mut Criterion) {
    let xs = grid(0.0, 4.0, 200);
    let mut g = c.benchmark_group("scaled_theta3 200 x");
    for eps in [0.025, 1e-4, 1e-6] {
        g.bench_with_input(BenchmarkId::from_parameter(eps), &eps, |b, &eps| {
            b.iter(|| {
                xs.iter()
                    .map(|&x| scaled_theta3(0.5, 1.0 / 6.0, x, eps, 1e-12).unwrap())
                    .fold(0.0, f64::max)
            })
        });
    }
    g.finish();
}

fn orbits_and_constants(c: &mut Criterion) {
    let seed = TorusPair::from_ratios(1, 60, 7, 60);
    c.bench_function("orbit q=60", |b| b.iter(|| gamma_theta_orbit(black_box(&seed))));
    c.bench_function("theta3_constant m=3", |b| b.iter(|| theta3_constant(black_box(3))));
    let ramp = Cutoff::smooth_ramp(10, 1).unwrap();
    c.bench_function("kappa ramp(10)", |b| b.iter(|| kappa_eta(black_box(&ramp), 2.0)));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(20);
    targets = reduction, theta, theta3_scan, orbits_and_constants
}
criterion_main!(kernels);
