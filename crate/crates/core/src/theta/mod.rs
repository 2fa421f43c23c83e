//! Weyl sums `S_N^f`, the theta modulus `|Θ_f|` in Iwasawa coordinates, the
//! classical `ϑ₃` and the norm `κ_η`.

mod cutoff;
mod kappa;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use cutoff::{f_phi, f_phi_quadrature, weyl_heis_act, Cutoff, Profile, Tabulated, PHI_EXACT_TOL, SHARP_EDGE_TOL};
pub use kappa::{kappa_eta, kappa_eta_with, kappa_gaussian_closed_form, KappaEstimate, KappaGrid};

use crate::error::{Error, Result};
use crate::geometry::IwasawaPoint;
use crate::numerics::e;

use cutoff::exact_rotation;

/// Tail tolerance and radius cap for lattice sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationBudget {
    /// Absolute bound on the discarded tail of the (unnormalised) series.
    pub tol: f64,
    /// Largest `|n − centre|` summed in any coordinate.
    pub max_radius: u64,
}

impl Default for TruncationBudget {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_radius: 50_000_000,
        }
    }
}

impl TruncationBudget {
    pub fn new(tol: f64, max_radius: u64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { tol, max_radius })
    }
}

/// Bound on `Σ_{|n − c| > r} e^{-π s²(n − c)²}` for `r = R/s`.
fn gaussian_tail(big_r: f64, s: f64) -> f64 {
    2.0 * (-PI * big_r * big_r).exp() * (1.0 + 1.0 / (2.0 * PI * big_r * s))
}

/// Smallest `R` (in units of the scaled variable) whose Gaussian tail is
/// below `tol`, or the truncation error at the radius cap.
fn gaussian_radius(tol: f64, s: f64, max_radius: u64) -> Result<f64> {
    let mut r = ((2.0 / tol).ln() / PI).sqrt().max(1.0);
    while gaussian_tail(r, s) > tol {
        r += 0.05;
    }
    if r / s > max_radius as f64 {
        return Err(Error::Truncation {
            achieved: gaussian_tail(max_radius as f64 * s, s),
        });
    }
    Ok(r)
}

/// Integer range `[lo, hi]` covering `{n : (n − c)·s ∈ [a, b]}`.
fn index_range(c: f64, s: f64, a: f64, b: f64, max_radius: u64) -> Result<(i64, i64)> {
    let lo = (c + a / s).floor() - 1.0;
    let hi = (c + b / s).ceil() + 1.0;
    if (hi - c).max(c - lo) > max_radius as f64 {
        return Err(Error::Truncation {
            achieved: f64::INFINITY,
        });
    }
    Ok((lo as i64, hi as i64))
}

/// One-dimensional factor `Σ_n f_φ((n − ξ₂)√y) e(½(n − ξ₂)² x + n ξ₁)` and
/// a bound on its discarded tail.
fn theta_factor(f: &Cutoff, i: usize, p: &IwasawaPoint, tol: f64, max_radius: u64) -> Result<(Complex64, f64)> {
    let (x, xi1, xi2) = (p.x, p.xi1[i], p.xi2[i]);
    let s = p.y.sqrt();
    let (lo, hi, tail) = match (
        f.support1(i, exact_rotation(p.phi) == Some(true)),
        exact_rotation(p.phi),
    ) {
        (Some((a, b)), Some(_)) => {
            let (lo, hi) = index_range(xi2, s, a, b, max_radius)?;
            (lo, hi, 0.0)
        }
        (Some(_), None) => {
            return Err(Error::UnsupportedRotation {
                cutoff: f.name(),
                phi: p.phi,
            })
        }
        (None, _) => {
            let (_, bp) = f.rotated_shift(i, p.phi);
            let r = gaussian_radius(tol, s, max_radius)?;
            let (lo, hi) = index_range(xi2, s, bp - r, bp + r, max_radius)?;
            (lo, hi, gaussian_tail(r, s))
        }
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for n in lo..=hi {
        let d = n as f64 - xi2;
        let amp = f.rotated1(i, p.phi, d * s)?;
        if amp.re != 0.0 || amp.im != 0.0 {
            acc += amp * e(0.5 * d * d * x + n as f64 * xi1);
        }
    }
    Ok((acc, tail))
}

/// `|Θ_f(z, φ; ξ)| = y^{k/4} |Σ_n f_φ((n − ξ₂)√y) e(½‖n − ξ₂‖² x + n·ξ₁)|`.
///
/// For the Gaussian, only `|f_φ|` up to a constant phase enters, so the
/// series is evaluated in closed form at every `φ`. Compactly supported
/// cut-offs are accepted only at `φ ≡ 0 mod π`.
pub fn theta_modulus(f: &Cutoff, p: &IwasawaPoint, budget: &TruncationBudget) -> Result<f64> {
    f.check_dim(p.k())?;
    let k = p.k();
    // each factor is at most 1 + 1/√y in modulus; share the tolerance accordingly
    let bound = 1.0 + 1.0 / p.y.sqrt();
    let tol = budget.tol / (k as f64 * bound.powi(k as i32 - 1));
    let mut modulus = 1.0;
    for i in 0..k {
        let (v, _) = theta_factor(f, i, p, tol, budget.max_radius)?;
        modulus *= v.norm();
    }
    Ok(p.y.powf(k as f64 / 4.0) * modulus)
}

/// `S_N^f(x; α, β) = Σ_n f(n/N) e((½‖n‖² + β·n) x + α·n)`.
pub fn weyl_sum(
    f: &Cutoff,
    n: u64,
    x: f64,
    alpha: &[f64],
    beta: &[f64],
    budget: &TruncationBudget,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    f.check_dim(alpha.len())?;
    f.check_dim(beta.len())?;
    let k = f.k();
    let nf = n as f64;
    let s = 1.0 / nf;
    let bound = 1.0 + nf;
    let tol = budget.tol / (k as f64 * bound.powi(k as i32 - 1));
    let mut total = Complex64::new(1.0, 0.0);
    for i in 0..k {
        let (lo, hi) = match f.support1(i, false) {
            Some((a, b)) => index_range(0.0, s, a, b, budget.max_radius)?,
            None => {
                let (_, b) = f.shift();
                let r = gaussian_radius(tol, s, budget.max_radius)?;
                index_range(0.0, s, b[i] - r, b[i] + r, budget.max_radius)?
            }
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for m in lo..=hi {
            let mf = m as f64;
            let amp = f.eval1(i, mf / nf);
            if amp.re != 0.0 || amp.im != 0.0 {
                acc += amp * e((0.5 * mf * mf + beta[i] * mf) * x + alpha[i] * mf);
            }
        }
        total *= acc;
    }
    Ok(total)
}

/// Number of terms `R` that brings the two-sided tail of `ϑ₃(z; w)` under `tol`.
fn theta3_radius(b: f64, v: f64, tol: f64) -> Result<u64> {
    const MAX_TERMS: u64 = 2_000_000_000;
    // log of the n-th term modulus: −π n² v + 2π n |b|
    let log_term = |n: f64| -PI * n * n * v + 2.0 * PI * n * b.abs();
    let mut r = ((b.abs() + (b * b + v * (2.0 / tol).ln() / PI).sqrt()) / v)
        .ceil()
        .max(1.0);
    loop {
        let ratio = (-PI * v * (2.0 * r + 1.0) + 2.0 * PI * b.abs()).exp();
        if ratio < 1.0 {
            let tail = 2.0 * log_term(r + 1.0).exp() / (1.0 - ratio);
            if tail < tol {
                break;
            }
        }
        r = (r * 1.01).ceil();
        if r > MAX_TERMS as f64 {
            return Err(Error::Truncation {
                achieved: f64::INFINITY,
            });
        }
    }
    Ok(r as u64)
}

/// `ϑ₃(z; w) = Σ_n e^{2πinz + πin²w}`, summed over `|n| ≤ R` with the
/// discarded tail below `tol`.
pub fn theta3(z: Complex64, w: Complex64, tol: f64) -> Result<Complex64> {
    if !(w.im > 0.0) {
        return Err(Error::Domain(format!("theta3 needs Im w > 0, got {}", w.im)));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let r = theta3_radius(z.im, w.im, tol)?;
    Ok(theta3_truncated(z, w, r))
}

/// `Σ_{|n| ≤ r} e^{2πinz + πin²w}`; the real-`z` case pairs `±n` into cosines.
pub fn theta3_truncated(z: Complex64, w: Complex64, r: u64) -> Complex64 {
    let (u, v) = (w.re, w.im);
    if z.im == 0.0 {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (1..=r).rev() {
            let nf = n as f64;
            let amp = (-PI * nf * nf * v).exp() * (2.0 * PI * nf * z.re).cos();
            acc += e(0.5 * nf * nf * u) * amp;
        }
        return Complex64::new(1.0, 0.0) + 2.0 * acc;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let r = r as i64;
    for n in -r..=r {
        let nf = n as f64;
        let amp = (-PI * nf * nf * v - 2.0 * PI * nf * z.im).exp();
        acc += e(0.5 * nf * nf * u + nf * z.re) * amp;
    }
    acc
}

/// `ε^{1/4} |ϑ₃(α + βx; x + iε)|`.
pub fn scaled_theta3(alpha: f64, beta: f64, x: f64, eps: f64, tol: f64) -> Result<f64> {
    let v = theta3(Complex64::new(alpha + beta * x, 0.0), Complex64::new(x, eps), tol)?;
    Ok(eps.powf(0.25) * v.norm())
}
