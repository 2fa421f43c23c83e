//! `κ_η(f) = sup_{w, φ} (1 + ‖w‖²)^{η/2} |f_φ(w)|`.
//!
//! The Gaussian has a closed form. For compact profiles in one dimension
//! the supremum is estimated on a grid of angles: at each `φ`,
//! `|f_φ(w)| = |csc φ|^{1/2} |G(w csc φ)|` where `G` is the Fourier transform
//! of the chirped profile `v ↦ f(v) e(½ v² cot φ)`, evaluated by a
//! zero-padded FFT.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::cutoff::{Cutoff, Profile};
use crate::error::{Error, Result};
use crate::numerics::{e, golden_section};

/// Result of a `κ_η` evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub value: f64,
    /// True only for closed-form values.
    pub certified: bool,
    /// Location of the supremum (first coordinate of `w` and the angle).
    pub w: f64,
    pub phi: f64,
}

/// Angle grid for the numerical estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaGrid {
    /// Smallest non-zero angle sampled.
    pub phi_min: f64,
    /// Number of angles in `[phi_min, π/2]`, geometrically spaced.
    pub n_phi: usize,
    /// Golden-section steps spent refining the best angle.
    pub refine_iters: usize,
}

impl Default for KappaGrid {
    fn default() -> Self {
        Self {
            phi_min: 0.02,
            n_phi: 40,
            refine_iters: 16,
        }
    }
}

/// `κ_η(e^{-πw²})`: 1 for `η < 2π`, otherwise `e^π (η/2π)^{η/2} e^{-η/2}`.
pub fn kappa_gaussian_closed_form(eta: f64) -> f64 {
    if eta < 2.0 * PI {
        1.0
    } else {
        PI.exp() * (eta / (2.0 * PI)).powf(eta / 2.0) * (-eta / 2.0).exp()
    }
}

/// `max_t (1 + t²)^{η/2} e^{-π(t − r)²}` for `r ≥ 0`.
fn shifted_gaussian_sup(eta: f64, r: f64) -> (f64, f64) {
    let log_h = |t: f64| 0.5 * eta * (1.0 + t * t).ln() - PI * (t - r) * (t - r);
    let hi = r + (eta / PI).sqrt() + 3.0;
    let step = 1e-3;
    let steps = (hi / step).ceil() as usize;
    let (mut best_t, mut best) = (0.0, log_h(0.0));
    for j in 1..=steps {
        let t = j as f64 * step;
        let v = log_h(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let (t, v) = golden_section(|t| -log_h(t), (best_t - step).max(0.0), best_t + step, 1e-12, 200);
    if -v > best {
        ((-v).exp(), t)
    } else {
        (best.exp(), best_t)
    }
}

/// `κ_η(f)` with the default angle grid.
pub fn kappa_eta(f: &Cutoff, eta: f64) -> Result<KappaEstimate> {
    kappa_eta_with(f, eta, &KappaGrid::default())
}

/// `κ_η(f)`, closed form for Gaussians and an uncertified grid estimate
/// for compact one-dimensional profiles.
pub fn kappa_eta_with(f: &Cutoff, eta: f64, grid: &KappaGrid) -> Result<KappaEstimate> {
    if !(eta > 1.0) {
        return Err(Error::Domain(format!("kappa needs eta > 1, got {eta}")));
    }
    match f.profile() {
        Profile::SharpIndicator => Err(Error::Unsupported(
            "the sharp indicator is not a regular cut-off".into(),
        )),
        Profile::Gaussian => {
            let (a, b) = f.shift();
            if a.iter().chain(b).all(|v| *v == 0.0) {
                let w = if eta < 2.0 * PI {
                    0.0
                } else {
                    (eta / (2.0 * PI) - 1.0).sqrt()
                };
                return Ok(KappaEstimate {
                    value: kappa_gaussian_closed_form(eta),
                    certified: true,
                    w,
                    phi: 0.0,
                });
            }
            // |f_φ(w)| = e^{-π‖w − (a sin φ + b cos φ)‖²}; the sup over φ takes the
            // largest singular value of the k×2 matrix [a b]
            let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
            let (aa, bb, ab) = (dot(a, a), dot(b, b), dot(a, b));
            let lam = 0.5 * (aa + bb) + (0.25 * (aa - bb).powi(2) + ab * ab).sqrt();
            let phi = 0.5 * (2.0 * ab).atan2(bb - aa);
            let (value, w) = shifted_gaussian_sup(eta, lam.sqrt());
            Ok(KappaEstimate {
                value,
                certified: false,
                w,
                phi: phi.rem_euclid(PI),
            })
        }
        _ if f.k() != 1 => Err(Error::Unsupported(
            "numerical kappa is implemented for k = 1 only".into(),
        )),
        _ => Ok(compact_estimate(f, eta, grid)),
    }
}

fn compact_estimate(f: &Cutoff, eta: f64, grid: &KappaGrid) -> KappaEstimate {
    let symmetric = f.shift().0[0] == 0.0;
    let n = grid.n_phi.max(2);
    let ratio = (FRAC_PI_2 / grid.phi_min).powf(1.0 / (n - 1) as f64);
    let mut phis: Vec<f64> = (0..n).map(|j| grid.phi_min * ratio.powi(j as i32)).collect();
    if !symmetric {
        let mirrored: Vec<f64> = phis.iter().rev().skip(1).map(|p| PI - p).collect();
        phis.extend(mirrored);
    }
    let slices: Vec<(f64, f64)> = phis.par_iter().map(|&phi| slice_sup(f, eta, phi)).collect();
    let zero = slice_sup(f, eta, 0.0);
    let (mut best, mut best_w, mut best_phi) = (zero.0, zero.1, 0.0);
    let mut best_j = None;
    for (j, &(v, w)) in slices.iter().enumerate() {
        if v > best {
            best = v;
            best_w = w;
            best_phi = phis[j];
            best_j = Some(j);
        }
    }
    if let (Some(j), true) = (best_j, grid.refine_iters > 0) {
        let lo = if j == 0 { grid.phi_min } else { phis[j - 1] };
        let hi = if j + 1 == phis.len() { phis[j] } else { phis[j + 1] };
        let (phi, neg) = golden_section(|p| -slice_sup(f, eta, p).0, lo, hi, 1e-6, grid.refine_iters);
        if -neg > best {
            best = -neg;
            best_w = slice_sup(f, eta, phi).1;
            best_phi = phi;
        }
    }
    KappaEstimate {
        value: best,
        certified: false,
        w: best_w,
        phi: best_phi,
    }
}

/// `sup_w (1 + w²)^{η/2} |f_φ(w)|` at one angle, and the maximising `w`.
fn slice_sup(f: &Cutoff, eta: f64, phi: f64) -> (f64, f64) {
    let (lo, hi) = f.support1(0, false).expect("compact profile");
    let weight = |w: f64| (1.0 + w * w).powf(0.5 * eta);
    if phi == 0.0 {
        let samples = 20_000;
        let h = (hi - lo) / samples as f64;
        return (0..=samples)
            .map(|j| {
                let w = lo + j as f64 * h;
                (weight(w) * f.eval1(0, w).norm(), w)
            })
            .fold((0.0, 0.0), |acc, v| if v.0 > acc.0 { v } else { acc });
    }
    let (s, c) = phi.sin_cos();
    let (cot, csc) = (c / s, 1.0 / s);
    let vmax = lo.abs().max(hi.abs());
    let feature = f.profile().feature_scale();
    let band = cot.abs() * vmax + 8.0 / feature + 16.0 + f.shift().0[0].abs();
    let mut h = 1.0 / (8.0 * (cot.abs() * vmax + band));
    let j_max = ((hi - lo) / h).ceil() as usize;
    h = (hi - lo) / j_max as f64;
    let m = (8 * (j_max + 1)).max(4096).next_power_of_two();
    let mut buf: Vec<Complex64> = (0..m)
        .map(|j| {
            if j > j_max {
                return Complex64::new(0.0, 0.0);
            }
            let v = lo + j as f64 * h;
            let wt = if j == 0 || j == j_max { 0.5 } else { 1.0 };
            f.eval1(0, v) * e(0.5 * cot * v * v) * wt
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = h * csc.abs().sqrt();
    let mut best = (0.0, 0.0);
    for (idx, val) in buf.iter().enumerate() {
        let mm = if idx < m / 2 { idx as f64 } else { idx as f64 - m as f64 };
        let u = mm / (m as f64 * h);
        if u.abs() > band {
            continue;
        }
        let w = u * s;
        let v = weight(w) * scale * val.norm();
        if v > best.0 {
            best = (v, w);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::cutoff::{f_phi, weyl_heis_act};

    #[test]
    fn gaussian_closed_form() {
        assert_eq!(kappa_gaussian_closed_form(2.0), 1.0);
        let k8 = kappa_gaussian_closed_form(8.0);
        assert!((k8 - (PI - 4.0).exp() * (4.0 / PI).powi(4)).abs() < 1e-12);
        assert!((k8 - 1.1139).abs() < 1e-4);
        // the closed form agrees with a direct maximisation over w
        for &eta in &[1.5, 2.0, 5.0, 2.0 * PI, 8.0, 10.0] {
            let (v, _) = shifted_gaussian_sup(eta, 0.0);
            assert!((v - kappa_gaussian_closed_form(eta)).abs() < 1e-9, "eta={eta}");
        }
        let est = kappa_eta(&Cutoff::gaussian(2), 3.0).unwrap();
        assert!(est.certified && est.value == 1.0);
    }

    #[test]
    fn rejects_irregular_and_bad_eta() {
        assert!(matches!(
            kappa_eta(&Cutoff::sharp_indicator(1), 2.0),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(kappa_eta(&Cutoff::gaussian(1), 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn ramp_slice_matches_quadrature() {
        let f = Cutoff::smooth_ramp(6, 1).unwrap();
        for &phi in &[0.3, 1.0, FRAC_PI_2] {
            let (v, w) = slice_sup(&f, 2.0, phi);
            let q = f_phi(&f, phi, &[w], 1e-11).unwrap().norm() * (1.0 + w * w);
            assert!((v - q).abs() < 1e-4 * v, "phi={phi}: fft {v} vs quadrature {q}");
        }
    }

    #[test]
    fn ramp_kappa_is_at_least_the_plateau() {
        let f = Cutoff::smooth_ramp(10, 1).unwrap();
        let est = kappa_eta(&f, 2.0).unwrap();
        assert!(!est.certified);
        // φ = 0 already gives (1 + 1²)·1
        assert!(est.value >= 2.0);
    }

    #[test]
    fn shifted_gaussian_obeys_shift_bound() {
        let g = Cutoff::gaussian(1);
        let moved = weyl_heis_act(&[0.8], &[-0.5], &g).unwrap();
        for &eta in &[1.5, 2.0, 3.0] {
            let lhs = kappa_eta(&moved, eta).unwrap().value;
            let rhs = 3f64.powf(eta) * (1.0 + 0.64 + 0.25f64).powf(eta / 2.0);
            assert!(lhs >= 1.0 && lhs <= rhs);
        }
    }
}
