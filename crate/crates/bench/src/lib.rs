//! Inputs shared by the kernel benchmarks.

use theta_bounds::geometry::IwasawaPoint;

/// Horocycle lifts at `N = 10, 100, 1000` for `(α, β) = (1/2, 1/6)`.
pub fn horocycle_points() -> Vec<(u64, IwasawaPoint)> {
    [10u64, 100, 1000]
        .iter()
        .map(|&n| {
            (
                n,
                IwasawaPoint::horocycle_lift(n, 2f64.sqrt() - 1.0, &[0.5], &[1.0 / 6.0]).expect("valid point"),
            )
        })
        .collect()
}

/// An `x` grid of `n` points on `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}
