//! Explicit constants: the lattice constant `C(k, ξ₂, η)`, its orbit
//! supremum `M`, the `k = 1` implied constant and the constant in the
//! `ϑ₃` bound, each minimised over `η`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::geometry::theta_dist;
use crate::numerics::{golden_section, upper_gamma_cf};
use crate::orbits::{OrbitRecord, TorusPair};

/// Left end of every `η` bracket is `1 + ETA_OFFSET` (or `k + ETA_OFFSET`).
pub const ETA_OFFSET: f64 = 1e-4;
/// Golden-section tolerance in `η`.
pub const ETA_TOL: f64 = 1e-8;
pub const ETA_MAX_ITER: usize = 200;
/// Offset of the local-minimum probe around `η*`.
pub const ETA_PROBE: f64 = 0.01;
/// Box radius of both Ewald sums.
pub const EWALD_RADIUS: i64 = 6;
/// `θ_k` values below this are treated as lattice points.
pub const LATTICE_TOL: f64 = 1e-12;

// B_{2j}/(2j)! for j = 1..8
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// `Σ_{n ≥ 0} (n + a)^{-s}` by Euler–Maclaurin after 100 direct terms.
fn euler_maclaurin(s: f64, a: f64) -> f64 {
    const DIRECT: usize = 100;
    let direct: f64 = (0..DIRECT).map(|n| (n as f64 + a).powf(-s)).sum();
    let big_n = DIRECT as f64 + a;
    let mut tail = big_n.powf(1.0 - s) / (s - 1.0) + 0.5 * big_n.powf(-s);
    // rising factorial s (s+1) … (s+2j-2) times N^{-s-2j+1}
    let mut rising = s;
    let mut power = big_n.powf(-s - 1.0);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
            power /= big_n * big_n;
        }
        tail += c * rising * power;
    }
    direct + tail
}

/// Riemann `ζ(η)` for `η > 1`.
pub fn zeta(eta: f64) -> Result<f64> {
    if !(eta > 1.0) {
        return Err(Error::Domain(format!("zeta needs eta > 1, got {eta}")));
    }
    Ok(euler_maclaurin(eta, 1.0))
}

/// Hurwitz `ζ(s, a) = Σ_{n ≥ 0} (n + a)^{-s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !(a > 0.0) {
        return Err(Error::Domain(format!(
            "hurwitz zeta needs s > 1 and a > 0, got s = {s}, a = {a}"
        )));
    }
    Ok(euler_maclaurin(s, a))
}

fn check_eta(k: usize, eta: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if !(eta > k as f64) {
        return Err(Error::Domain(format!("C(k, xi2, eta) needs eta > k = {k}, got {eta}")));
    }
    Ok(())
}

/// Calls `visit` on every integer vector in `centre + [-r, r]^k`.
fn for_each_in_box(centre: &[i64], r: i64, mut visit: impl FnMut(&[i64])) {
    let k = centre.len();
    let mut idx: Vec<i64> = centre.iter().map(|c| c - r).collect();
    loop {
        visit(&idx);
        let mut d = 0;
        loop {
            if d == k {
                return;
            }
            idx[d] += 1;
            if idx[d] <= centre[d] + r {
                break;
            }
            idx[d] = centre[d] - r;
            d += 1;
        }
    }
}

/// `Σ_{n ∈ Z^k} ‖n − ξ‖^{-η}` by Ewald splitting at `t = 1`: a real-space sum
/// of `‖x‖^{-η} Q(η/2, π‖x‖²)` and a dual sum of
/// `cos(2πm·ξ) (π‖m‖²)^a Γ(−a, π‖m‖²)` with `a = (η − k)/2`.
fn lattice_sum(xi: &[f64], eta: f64, radius: i64) -> f64 {
    let k = xi.len();
    let s = 0.5 * eta;
    let a = 0.5 * (eta - k as f64);
    let centre: Vec<i64> = xi.iter().map(|v| v.round() as i64).collect();
    let mut real = 0.0;
    for_each_in_box(&centre, radius, |n| {
        let r2: f64 = n.iter().zip(xi).map(|(&ni, &x)| (ni as f64 - x).powi(2)).sum();
        let x = PI * r2;
        if x < 745.0 {
            real += r2.powf(-s) * gamma_ur(s, x);
        }
    });
    let mut dual = 2.0 / (eta - k as f64);
    for_each_in_box(&vec![0; k], radius, |m| {
        let m2: f64 = m.iter().map(|&v| (v * v) as f64).sum();
        if m2 == 0.0 {
            return;
        }
        let x = PI * m2;
        let phase: f64 = m.iter().zip(xi).map(|(&mi, &v)| mi as f64 * v).sum();
        dual += (2.0 * PI * phase).cos() * x.powf(a) * upper_gamma_cf(-a, x);
    });
    real + PI.powf(s) / gamma(s) * dual
}

/// `C(k, ξ₂, η) = 2^{(2η−k)/4} Σ_{n ∈ Z^k} ‖n − ξ₂‖^{-η}`.
pub fn constant_c(k: usize, xi2: &[f64], eta: f64) -> Result<f64> {
    constant_c_with_radius(k, xi2, eta, EWALD_RADIUS)
}

/// [`constant_c`] with an explicit box radius for both Ewald sums.
pub fn constant_c_with_radius(k: usize, xi2: &[f64], eta: f64, radius: i64) -> Result<f64> {
    check_eta(k, eta)?;
    if xi2.len() != k {
        return Err(Error::Dimension {
            expected: k,
            found: xi2.len(),
        });
    }
    if theta_dist(xi2) < LATTICE_TOL {
        return Err(Error::Divergence(format!("xi2 = {xi2:?} is a lattice point")));
    }
    let kf = k as f64;
    Ok(2f64.powf((2.0 * eta - kf) / 4.0) * lattice_sum(xi2, eta, radius))
}

/// The `k = 1` series
/// `2^{(2η−1)/4} (θ^{-η} + Σ_{n ≥ 1} ((n − θ)^{-η} + (n + θ)^{-η}))`, `θ = θ₁(ξ₂)`,
/// through Hurwitz zeta values.
pub fn constant_c_series_k1(xi2: f64, eta: f64) -> Result<f64> {
    check_eta(1, eta)?;
    let theta = theta_dist(&[xi2]);
    if theta < LATTICE_TOL {
        return Err(Error::Divergence(format!("xi2 = {xi2} is an integer")));
    }
    let sum = theta.powf(-eta) + hurwitz_zeta(eta, 1.0 - theta)? + hurwitz_zeta(eta, 1.0 + theta)?;
    Ok(2f64.powf((2.0 * eta - 1.0) / 4.0) * sum)
}

/// `M = sup_orbit max(C(k, ξ₂, η), C(k, ξ₂ − ξ₁ + s, η))` with `s = (½, …, ½)`.
/// Each point is `(ξ₁, ξ₂)`.
pub fn constant_m(k: usize, points: &[(Vec<f64>, Vec<f64>)], eta: f64) -> Result<f64> {
    check_eta(k, eta)?;
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty orbit".into()));
    }
    let mut best = 0.0_f64;
    for (xi1, xi2) in points {
        if xi1.len() != k || xi2.len() != k {
            return Err(Error::Dimension {
                expected: k,
                found: xi1.len().max(xi2.len()),
            });
        }
        let hat: Vec<f64> = xi2.iter().zip(xi1).map(|(b, a)| b - a + 0.5).collect();
        best = best.max(constant_c(k, xi2, eta)?).max(constant_c(k, &hat, eta)?);
    }
    Ok(best)
}

/// [`constant_m`] over an exact `k = 1` orbit. Meeting `L_U` or `L_V` is
/// detected exactly and reported as divergence.
pub fn constant_m_orbit(orbit: &OrbitRecord, eta: f64) -> Result<f64> {
    if orbit.meets_lines() {
        return Err(Error::Divergence(format!(
            "the orbit of {} meets L_U or L_V",
            orbit.seed
        )));
    }
    let pts: Vec<(Vec<f64>, Vec<f64>)> = orbit
        .points
        .iter()
        .map(|p| {
            let (a, b) = p.to_f64();
            (vec![a], vec![b])
        })
        .collect();
    constant_m(1, &pts, eta)
}

/// How the `(1 + β²)^{η/2}` factor enters the `k = 1` constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BetaFactor {
    /// `(1 + β²)^{η/2}`.
    Explicit(f64),
    /// `2^{η/2}`, valid when `N ≥ |β|`.
    Uniform,
}

impl BetaFactor {
    fn at(&self, eta: f64) -> f64 {
        match self {
            BetaFactor::Explicit(b) => (1.0 + b * b).powf(eta / 2.0),
            BetaFactor::Uniform => 2f64.powf(eta / 2.0),
        }
    }
}

/// A minimiser over `η` together with the ±[`ETA_PROBE`] check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaMinimum {
    pub eta_star: f64,
    pub constant: f64,
    /// Both probes at `η* ± 0.01` (where inside the bracket) exceed the minimum.
    pub local_min_certified: bool,
}

fn minimise(objective: impl Fn(f64) -> f64, lo: f64, hi: f64) -> EtaMinimum {
    let (eta_star, constant) = golden_section(&objective, lo, hi, ETA_TOL, ETA_MAX_ITER);
    let probe = |e: f64| !(lo..=hi).contains(&e) || objective(e) > constant;
    EtaMinimum {
        eta_star,
        constant,
        local_min_certified: probe(eta_star - ETA_PROBE) && probe(eta_star + ETA_PROBE),
    }
}

fn odd_m(m: u64) -> Result<()> {
    if m == 0 || m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "m = {m} must be a positive odd integer"
        )));
    }
    Ok(())
}

/// `2^{(2η−1)/4} 3^η (2m + 2ζ(η)(2^η − 1)) · β-factor · κ_η(f)`.
pub fn implied_constant_objective(m: u64, beta: BetaFactor, eta: f64, kappa: &dyn Fn(f64) -> f64) -> Result<f64> {
    let z = zeta(eta)?;
    let mf = m as f64;
    Ok(2f64.powf((2.0 * eta - 1.0) / 4.0)
        * 3f64.powf(eta)
        * (2.0 * mf + 2.0 * z * (2f64.powf(eta) - 1.0))
        * beta.at(eta)
        * kappa(eta))
}

/// Minimum of [`implied_constant_objective`] over `η ∈ (1 + 10⁻⁴, eta_max]`.
pub fn implied_constant_k1(m: u64, beta: BetaFactor, eta_max: f64, kappa: &dyn Fn(f64) -> f64) -> Result<EtaMinimum> {
    let lo = 1.0 + ETA_OFFSET;
    if !(eta_max > lo) {
        return Err(Error::InvalidArgument(format!("eta_max = {eta_max} must exceed {lo}")));
    }
    let f = |eta: f64| implied_constant_objective(m, beta, eta, kappa).unwrap_or(f64::INFINITY);
    Ok(minimise(f, lo, eta_max))
}

/// `2^{-1/4} 6^η (2m + 2ζ(η)(2^η − 1))`.
pub fn theta3_objective(m: u64, eta: f64) -> Result<f64> {
    let z = zeta(eta)?;
    Ok(2f64.powf(-0.25) * 6f64.powf(eta) * (2.0 * m as f64 + 2.0 * z * (2f64.powf(eta) - 1.0)))
}

/// `min_{1 < η < 4/3} 2^{-1/4} 6^η (2m + 2ζ(η)(2^η − 1))` for odd `m`.
pub fn theta3_constant(m: u64) -> Result<EtaMinimum> {
    odd_m(m)?;
    let f = |eta: f64| theta3_objective(m, eta).unwrap_or(f64::INFINITY);
    Ok(minimise(f, 1.0 + ETA_OFFSET, 4.0 / 3.0))
}

/// `inf_{η ∈ (k, η_max]} M(η) 3^η (1 + ‖β‖²)^{η/2} κ_η(f)` over an explicit orbit.
pub fn implied_constant_orbit(
    k: usize,
    points: &[(Vec<f64>, Vec<f64>)],
    beta_norm_sq: f64,
    eta_max: f64,
    kappa: &dyn Fn(f64) -> f64,
) -> Result<EtaMinimum> {
    let lo = k as f64 + ETA_OFFSET;
    if !(eta_max > lo) {
        return Err(Error::InvalidArgument(format!("eta_max = {eta_max} must exceed {lo}")));
    }
    // surface divergence before minimising
    constant_m(k, points, eta_max)?;
    let f = |eta: f64| match constant_m(k, points, eta) {
        Ok(m) => m * 3f64.powf(eta) * (1.0 + beta_norm_sq).powf(eta / 2.0) * kappa(eta),
        Err(_) => f64::INFINITY,
    };
    Ok(minimise(f, lo, eta_max))
}

/// A bound for one pair, optionally compared with an observed supremum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub pair: (String, String),
    pub m: u64,
    pub eta_star: f64,
    pub constant: f64,
    pub observed_sup: Option<f64>,
    pub margin: Option<f64>,
}

impl BoundReport {
    /// The `ϑ₃` bound for a good pair `(a/2m, b/2m)`.
    pub fn theta3(pair: &TorusPair, m: u64, observed_sup: Option<f64>) -> Result<Self> {
        let c = theta3_constant(m)?;
        Ok(Self {
            pair: (pair.alpha().to_string(), pair.beta().to_string()),
            m,
            eta_star: c.eta_star,
            constant: c.constant,
            observed_sup,
            margin: observed_sup.map(|s| c.constant - s),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{gamma_theta_orbit, rational};

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((zeta(6.0).unwrap() - PI.powi(6) / 945.0).abs() < 1e-12);
        let z20 = zeta(20.0).unwrap();
        assert!(z20 > 1.0 && z20 - 1.0 < 2f64.powi(-19) * 1.001);
        assert!(matches!(zeta(1.0), Err(Error::Domain(_))));
        // ζ(1 + δ) ≈ 1/δ + γ
        let s = 1.0 + 1e-6;
        let d = s - 1.0;
        let z = zeta(s).unwrap();
        assert!((z - (1.0 / d + 0.577_215_664_901_532_9)).abs() < 1e-5, "{z}");
    }

    #[test]
    fn hurwitz_values() {
        // ζ(2, ½) = 3ζ(2)
        assert!((hurwitz_zeta(2.0, 0.5).unwrap() - 0.5 * PI * PI).abs() < 1e-12);
        assert!((hurwitz_zeta(3.0, 1.0).unwrap() - zeta(3.0).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn constant_c_two_routes() {
        // ξ₂ = ½, η = 2: 2^{3/4}(4 + 2·(3ζ(2) − 4) + … ) = 2^{3/4}·π²
        let c = constant_c(1, &[0.5], 2.0).unwrap();
        let series = constant_c_series_k1(0.5, 2.0).unwrap();
        assert!((series - 2f64.powf(0.75) * PI * PI).abs() < 1e-10);
        assert!((c - series).abs() < 1e-9 * series);
        for &(xi, eta) in &[(0.1, 1.2), (0.37, 1.05), (0.9, 3.0), (1.0 / 6.0, 1.263)] {
            let a = constant_c(1, &[xi], eta).unwrap();
            let b = constant_c_series_k1(xi, eta).unwrap();
            assert!((a - b).abs() < 1e-9 * b, "xi={xi} eta={eta}: {a} vs {b}");
        }
    }

    #[test]
    fn constant_c_k2_stable() {
        let a = constant_c(2, &[0.5, 0.5], 3.0).unwrap();
        let b = constant_c_with_radius(2, &[0.5, 0.5], 3.0, 2 * EWALD_RADIUS).unwrap();
        assert!(a.is_finite() && (a - b).abs() < 1e-8);
        // direct summation with a tail integral as an independent oracle
        let r = 400i64;
        let mut direct = 0.0;
        for n1 in -r..=r {
            for n2 in -r..=r {
                let (p, q) = (n1 as f64 - 0.5, n2 as f64 - 0.5);
                direct += (p * p + q * q).powf(-1.5);
            }
        }
        // ∫_{r}^∞ 2πρ ρ^{-3} dρ ≈ 2π/r
        direct += 2.0 * PI / (r as f64 + 0.5);
        assert!((a / 2f64.powf(1.0) - direct).abs() < 1e-4 * direct);
    }

    #[test]
    fn constant_c_errors_and_growth() {
        assert!(matches!(constant_c(1, &[2.0], 2.0), Err(Error::Divergence(_))));
        assert!(matches!(constant_c(2, &[0.5, 0.5], 2.0), Err(Error::Domain(_))));
        // C ~ 2^{(2η−1)/4} θ^{-η} as θ → 0
        let eta = 1.5;
        let (t1, t2) = (1e-3, 1e-4);
        let slope = (constant_c(1, &[t2], eta).unwrap() / constant_c(1, &[t1], eta).unwrap()).ln() / (t1 / t2).ln();
        assert!((slope - eta).abs() < 1e-3);
    }

    #[test]
    fn constant_m_examples() {
        let o = gamma_theta_orbit(&TorusPair::new(rational(1, 2), rational(1, 2))).unwrap();
        let m = constant_m_orbit(&o, 2.0).unwrap();
        assert!((m - constant_c(1, &[0.5], 2.0).unwrap()).abs() < 1e-12);
        let o = gamma_theta_orbit(&TorusPair::new(rational(1, 6), rational(1, 6))).unwrap();
        let m = constant_m_orbit(&o, 1.5).unwrap();
        let by_hand = o
            .points
            .iter()
            .map(|p| {
                let (a, b) = p.to_f64();
                constant_c(1, &[b], 1.5)
                    .unwrap()
                    .max(constant_c(1, &[b - a + 0.5], 1.5).unwrap())
            })
            .fold(0.0, f64::max);
        assert_eq!(m, by_hand);
        let o = gamma_theta_orbit(&TorusPair::new(rational(1, 3), rational(0, 1))).unwrap();
        assert!(matches!(constant_m_orbit(&o, 1.5), Err(Error::Divergence(_))));
        assert!(constant_m(1, &[(vec![0.3], vec![0.0])], 1.5).is_err());
    }

    #[test]
    fn implied_constants() {
        let one = |_: f64| 1.0;
        let uniform = implied_constant_k1(1, BetaFactor::Uniform, 4.0 / 3.0, &one).unwrap();
        assert!((uniform.eta_star - 1.263).abs() < 5e-4 && uniform.local_min_certified);
        let t3 = theta3_constant(1).unwrap();
        assert!((t3.eta_star - uniform.eta_star).abs() < 1e-6);
        assert!((t3.constant - uniform.constant).abs() < 1e-9 * t3.constant);
        let at = |e| implied_constant_objective(1, BetaFactor::Explicit(0.5), e, &one).unwrap();
        assert!(at(1.001) > at(1.263));
        for &eta in &[1.1, 1.2, 1.3] {
            assert!(theta3_objective(3, eta).unwrap() > theta3_objective(1, eta).unwrap());
        }
        let explicit = implied_constant_k1(1, BetaFactor::Explicit(0.5), 4.0 / 3.0, &one).unwrap();
        assert!(explicit.local_min_certified && explicit.constant < uniform.constant);
    }

    #[test]
    fn theta3_constants() {
        let c1 = theta3_constant(1).unwrap();
        let c3 = theta3_constant(3).unwrap();
        let c5 = theta3_constant(5).unwrap();
        assert!(c3.eta_star <= c1.eta_star && c5.eta_star <= c3.eta_star);
        assert!(c1.constant < c3.constant && c3.constant < c5.constant);
        assert!((c1.constant - 115.70).abs() < 0.01);
        assert!((c3.constant - 147.03).abs() < 0.01);
        assert!(matches!(theta3_constant(2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn orbit_implied_constant_is_finite() {
        let o = gamma_theta_orbit(&TorusPair::new(rational(1, 2), rational(1, 6))).unwrap();
        let pts: Vec<(Vec<f64>, Vec<f64>)> = o
            .points
            .iter()
            .map(|p| {
                let (a, b) = p.to_f64();
                (vec![a], vec![b])
            })
            .collect();
        let r = implied_constant_orbit(1, &pts, 1.0 / 36.0, 3.0, &|_| 1.0).unwrap();
        assert!(r.constant.is_finite() && r.eta_star > 1.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn two_routes_agree(theta in 0.01..0.5f64, eta in 1.05..4.0f64, shift in -3i32..3) {
                let xi = theta + shift as f64;
                let a = constant_c(1, &[xi], eta).unwrap();
                let b = constant_c_series_k1(xi, eta).unwrap();
                prop_assert!((a - b).abs() < 1e-8 * b.max(1.0));
            }

            #[test]
            fn c_decreases_in_theta(t in 0.01..0.49f64, dt in 0.001..0.01f64, eta in 1.1..3.0f64) {
                prop_assert!(constant_c(1, &[t + dt], eta).unwrap() < constant_c(1, &[t], eta).unwrap());
            }
        }
    }
}
