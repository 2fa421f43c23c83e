//! Cut-off functions `f: R^k → C`, their Heisenberg translates and the
//! rotated family `f_φ = R(k_φ) f`.
//!
//! Every cut-off is a product `f(w) = Π_i f₁(w_i)` of one profile, so sums
//! and rotations factor over coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{e, integrate_panels};

/// Angles closer than this to a multiple of `π` are treated as exact multiples.
pub const PHI_EXACT_TOL: f64 = 1e-12;

/// Rounding allowance at the right edge of the sharp indicator, so that
/// `w = n·(1/N)` with `n = N` stays inside `(0, 1]`.
pub const SHARP_EDGE_TOL: f64 = 1e-12;

/// Piecewise-linear samples on a uniform grid, zero outside `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
}

impl Tabulated {
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        if !(hi > lo) || values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "tabulated cut-off needs lo < hi and at least two finite samples".into(),
            ));
        }
        Ok(Self { lo, hi, values })
    }

    fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.values.len() - 1) as f64
    }

    fn eval(&self, w: f64) -> f64 {
        if !(self.lo..=self.hi).contains(&w) {
            return 0.0;
        }
        let t = (w - self.lo) / self.spacing();
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// The one-dimensional profile of a cut-off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    /// `e^{-πw²}`.
    Gaussian,
    /// `1_{(0, 1]}`.
    SharpIndicator,
    /// Supported on `[0, 1 + 1/N]`, equal to 1 on `[1/N, 1]`, with cubic
    /// smoothstep ramps `3t² − 2t³` on the two transition intervals.
    SmoothRamp {
        n: u32,
    },
    Tabulated(Tabulated),
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

impl Profile {
    pub fn eval(&self, w: f64) -> f64 {
        match self {
            Profile::Gaussian => (-PI * w * w).exp(),
            Profile::SharpIndicator => {
                if w > 0.0 && w <= 1.0 + SHARP_EDGE_TOL {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::SmoothRamp { n } => {
                let n = *n as f64;
                if w <= 0.0 || w >= 1.0 + 1.0 / n {
                    0.0
                } else if w < 1.0 / n {
                    smoothstep(n * w)
                } else if w <= 1.0 {
                    1.0
                } else {
                    1.0 - smoothstep(n * (w - 1.0))
                }
            }
            Profile::Tabulated(t) => t.eval(w),
        }
    }

    /// Closed support, or `None` for the Gaussian.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Profile::Gaussian => None,
            Profile::SharpIndicator => Some((0.0, 1.0)),
            Profile::SmoothRamp { n } => Some((0.0, 1.0 + 1.0 / *n as f64)),
            Profile::Tabulated(t) => Some((t.lo, t.hi)),
        }
    }

    /// Interior points where the profile or one of its low derivatives jumps.
    fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Gaussian => vec![],
            Profile::SharpIndicator => vec![0.0, 1.0],
            Profile::SmoothRamp { n } => {
                let n = *n as f64;
                vec![0.0, 1.0 / n, 1.0, 1.0 + 1.0 / n]
            }
            Profile::Tabulated(t) => (0..t.values.len()).map(|i| t.lo + i as f64 * t.spacing()).collect(),
        }
    }

    /// Length scale of the sharpest feature, used to size frequency grids.
    pub(crate) fn feature_scale(&self) -> f64 {
        match self {
            Profile::Gaussian => 1.0,
            Profile::SharpIndicator => 0.0,
            Profile::SmoothRamp { n } => 1.0 / *n as f64,
            Profile::Tabulated(t) => t.spacing(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Gaussian => "gaussian",
            Profile::SharpIndicator => "sharp-indicator",
            Profile::SmoothRamp { .. } => "smooth-ramp",
            Profile::Tabulated(_) => "tabulated",
        }
    }
}

/// A product cut-off on `R^k`, optionally moved by a Heisenberg translation
/// `W(a, b): f ↦ e(a·w) f(w − b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    profile: Profile,
    k: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Whether `φ` is `0` or `π` mod `2π`, up to [`PHI_EXACT_TOL`].
pub(crate) fn exact_rotation(phi: f64) -> Option<bool> {
    let r = phi.rem_euclid(2.0 * PI);
    if r < PHI_EXACT_TOL || 2.0 * PI - r < PHI_EXACT_TOL {
        Some(false)
    } else if (r - PI).abs() < PHI_EXACT_TOL {
        Some(true)
    } else {
        None
    }
}

impl Cutoff {
    pub fn new(profile: Profile, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        Ok(Self {
            profile,
            k,
            a: vec![0.0; k],
            b: vec![0.0; k],
        })
    }

    pub fn gaussian(k: usize) -> Self {
        Self::new(Profile::Gaussian, k.max(1)).expect("k >= 1")
    }

    pub fn sharp_indicator(k: usize) -> Self {
        Self::new(Profile::SharpIndicator, k.max(1)).expect("k >= 1")
    }

    pub fn smooth_ramp(n: u32, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ramp width N must be positive".into()));
        }
        Self::new(Profile::SmoothRamp { n }, k)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Heisenberg parameters `(a, b)` accumulated so far.
    pub fn shift(&self) -> (&[f64], &[f64]) {
        (&self.a, &self.b)
    }

    /// Whether `f_φ` is known in closed form for every `φ`.
    pub fn closed_form_rotation(&self) -> bool {
        self.profile == Profile::Gaussian
    }

    pub fn name(&self) -> &'static str {
        self.profile.name()
    }

    pub(crate) fn check_dim(&self, k: usize) -> Result<()> {
        if k != self.k {
            return Err(Error::Dimension {
                expected: self.k,
                found: k,
            });
        }
        Ok(())
    }

    /// `f(w)` for one coordinate.
    pub(crate) fn eval1(&self, i: usize, w: f64) -> Complex64 {
        let base = self.profile.eval(w - self.b[i]);
        if self.a[i] == 0.0 {
            Complex64::new(base, 0.0)
        } else {
            e(self.a[i] * w) * base
        }
    }

    pub fn eval(&self, w: &[f64]) -> Result<Complex64> {
        self.check_dim(w.len())?;
        Ok(w.iter().enumerate().map(|(i, &wi)| self.eval1(i, wi)).product())
    }

    /// Support of coordinate `i`, reflected when `reflect` holds.
    pub(crate) fn support1(&self, i: usize, reflect: bool) -> Option<(f64, f64)> {
        self.profile.support().map(|(lo, hi)| {
            let (lo, hi) = (lo + self.b[i], hi + self.b[i]);
            if reflect {
                (-hi, -lo)
            } else {
                (lo, hi)
            }
        })
    }

    /// Rotated Heisenberg parameters `(a_φ, b_φ)` for coordinate `i`:
    /// `[W(a, b) f]_φ = W(a_φ, b_φ) f_φ` up to a unimodular constant.
    pub(crate) fn rotated_shift(&self, i: usize, phi: f64) -> (f64, f64) {
        let (s, c) = phi.sin_cos();
        (self.a[i] * c - self.b[i] * s, self.a[i] * s + self.b[i] * c)
    }

    /// `f_φ(w)` for one coordinate, where available without quadrature.
    pub(crate) fn rotated1(&self, i: usize, phi: f64, w: f64) -> Result<Complex64> {
        match exact_rotation(phi) {
            Some(false) => Ok(self.eval1(i, w)),
            Some(true) => Ok(self.eval1(i, -w)),
            None if self.profile == Profile::Gaussian => {
                let (ap, bp) = self.rotated_shift(i, phi);
                let g = (-PI * (w - bp) * (w - bp)).exp();
                Ok(if ap == 0.0 {
                    Complex64::new(g, 0.0)
                } else {
                    e(ap * w) * g
                })
            }
            None => Err(Error::UnsupportedRotation {
                cutoff: self.name(),
                phi,
            }),
        }
    }

    /// `f_φ(w)` for one coordinate by direct quadrature of
    /// `|sin φ|^{-1/2} ∫ e((½(w² + v²) cos φ − wv)/sin φ) f(v) dv`.
    pub(crate) fn rotated1_quadrature(&self, i: usize, phi: f64, w: f64, tol: f64) -> Complex64 {
        match exact_rotation(phi) {
            Some(false) => return self.eval1(i, w),
            Some(true) => return self.eval1(i, -w),
            None => {}
        }
        let (s, c) = phi.sin_cos();
        let (cot, csc) = (c / s, 1.0 / s);
        let (lo, hi, mut breaks) = match self.support1(i, false) {
            Some((lo, hi)) => {
                let mut br: Vec<f64> = self.profile.breakpoints().iter().map(|p| p + self.b[i]).collect();
                br.retain(|p| (lo..=hi).contains(p));
                (lo, hi, br)
            }
            None => (self.b[i] - 7.0, self.b[i] + 7.0, vec![]),
        };
        breaks.push(lo);
        breaks.push(hi);
        breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        breaks.dedup();
        // split panels so that each carries only a couple of oscillations
        let freq = cot.abs() * lo.abs().max(hi.abs()) + (w * csc).abs() + self.a[i].abs() + 1.0;
        let mut fine = vec![breaks[0]];
        for win in breaks.windows(2) {
            let pieces = ((win[1] - win[0]) * freq).ceil().max(1.0) as usize;
            let h = (win[1] - win[0]) / pieces as f64;
            for j in 1..=pieces {
                fine.push(win[0] + j as f64 * h);
            }
        }
        let integrand = |v: f64| self.eval1(i, v) * e(0.5 * v * v * cot - w * v * csc);
        let (val, _) = integrate_panels(integrand, &fine, tol);
        val * e(0.5 * w * w * cot) / s.abs().sqrt()
    }
}

/// `W(a, b) f: w ↦ e(a·w) f(w − b)`. Translations compose additively; the
/// constant phases this drops do not affect any modulus.
pub fn weyl_heis_act(a: &[f64], b: &[f64], f: &Cutoff) -> Result<Cutoff> {
    f.check_dim(a.len())?;
    f.check_dim(b.len())?;
    let mut g = f.clone();
    for i in 0..f.k {
        g.a[i] += a[i];
        g.b[i] += b[i];
    }
    Ok(g)
}

/// `f_φ(w)` with absolute error at most `tol`.
///
/// The Gaussian is an eigenfunction of every `R(k_φ)`, so its value is
/// returned without the unimodular eigenvalue. Compact profiles other than
/// the sharp indicator are integrated numerically at generic `φ`;
/// that path is experimental.
pub fn f_phi(f: &Cutoff, phi: f64, w: &[f64], tol: f64) -> Result<Complex64> {
    f.check_dim(w.len())?;
    match (exact_rotation(phi), f.profile()) {
        (Some(_), _) | (None, Profile::Gaussian) => {
            w.iter().enumerate().map(|(i, &wi)| f.rotated1(i, phi, wi)).product()
        }
        (None, Profile::SharpIndicator) => Err(Error::UnsupportedRotation { cutoff: f.name(), phi }),
        (None, _) => Ok(f_phi_quadrature(f, phi, w, tol)),
    }
}

/// `f_φ(w)` by numerical integration for any profile, including the
/// Gaussian; used to cross-check closed forms.
pub fn f_phi_quadrature(f: &Cutoff, phi: f64, w: &[f64], tol: f64) -> Complex64 {
    let per = tol / f.k as f64;
    w.iter()
        .enumerate()
        .map(|(i, &wi)| f.rotated1_quadrature(i, phi, wi, per))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        let r = Cutoff::smooth_ramp(10, 1).unwrap();
        assert_eq!(r.eval(&[0.0]).unwrap().re, 0.0);
        assert!((r.eval(&[0.05]).unwrap().re - 0.5).abs() < 1e-14);
        assert_eq!(r.eval(&[0.5]).unwrap().re, 1.0);
        assert!((r.eval(&[1.05]).unwrap().re - 0.5).abs() < 1e-14);
        assert_eq!(r.eval(&[1.1]).unwrap().re, 0.0);
        let s = Cutoff::sharp_indicator(1);
        assert_eq!(s.eval(&[0.0]).unwrap().re, 0.0);
        assert_eq!(s.eval(&[1.0]).unwrap().re, 1.0);
        assert_eq!(s.eval(&[1.001]).unwrap().re, 0.0);
        let t = Tabulated::new(0.0, 1.0, vec![0.0, 1.0, 0.0]).unwrap();
        assert!((Profile::Tabulated(t).eval(0.25) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ramp_is_c1() {
        let n = 7u32;
        let p = Profile::SmoothRamp { n };
        let h = 1e-7;
        for &w0 in &[0.0, 1.0 / n as f64, 1.0, 1.0 + 1.0 / n as f64] {
            let left = (p.eval(w0) - p.eval(w0 - h)) / h;
            let right = (p.eval(w0 + h) - p.eval(w0)) / h;
            assert!((left - right).abs() < 1e-3, "kink at {w0}");
        }
    }

    #[test]
    fn rotation_at_multiples_of_pi() {
        let f = Cutoff::smooth_ramp(5, 1).unwrap();
        let w = [0.1];
        assert_eq!(f_phi(&f, 0.0, &w, 1e-10).unwrap(), f.eval(&w).unwrap());
        assert_eq!(f_phi(&f, PI, &[-0.1], 1e-10).unwrap(), f.eval(&w).unwrap());
        assert!(matches!(
            f_phi(&Cutoff::sharp_indicator(1), 1.0, &w, 1e-8),
            Err(Error::UnsupportedRotation { .. })
        ));
    }

    #[test]
    fn gaussian_rotation_matches_quadrature() {
        let g = Cutoff::gaussian(1);
        let v = f_phi(&g, PI / 2.0, &[0.5], 1e-8).unwrap();
        assert!((v.norm() - (-PI / 4.0).exp()).abs() < 1e-15);
        assert!((v.norm() - 0.4559381277659962).abs() < 1e-12);
        for &phi in &[PI / 2.0, 0.3, 2.0, 4.0, 5.9] {
            for &w in &[-1.3, 0.0, 0.5, 2.0] {
                let q = f_phi_quadrature(&g, phi, &[w], 1e-11);
                assert!((q.norm() - (-PI * w * w).exp()).abs() < 1e-8, "phi={phi} w={w}");
            }
        }
    }

    #[test]
    fn shift_rule_matches_quadrature() {
        let g = weyl_heis_act(&[0.4], &[-0.7], &Cutoff::gaussian(1)).unwrap();
        for &phi in &[0.0, 0.8, PI / 2.0, 2.5, PI, 4.4] {
            for &w in &[-1.0, 0.2, 1.1] {
                let exact = f_phi(&g, phi, &[w], 1e-10).unwrap();
                let q = f_phi_quadrature(&g, phi, &[w], 1e-11);
                assert!((q.norm() - exact.norm()).abs() < 1e-8, "phi={phi} w={w}");
            }
        }
        let moved = weyl_heis_act(&[0.0], &[0.3], &Cutoff::gaussian(1)).unwrap();
        let v = moved.eval(&[0.9]).unwrap();
        assert!((v.norm() - (-PI * 0.36f64).exp()).abs() < 1e-15);
        let same = weyl_heis_act(&[0.0], &[0.0], &Cutoff::gaussian(1)).unwrap();
        assert_eq!(same, Cutoff::gaussian(1));
    }

    #[test]
    fn ramp_quadrature_agrees_with_reflection() {
        // |f_{π−φ}(w)| = |f_φ(−w)| for real f
        let f = Cutoff::smooth_ramp(4, 1).unwrap();
        for &phi in &[0.4, 1.0, 1.5] {
            let a = f_phi(&f, PI - phi, &[0.7], 1e-10).unwrap().norm();
            let b = f_phi(&f, phi, &[-0.7], 1e-10).unwrap().norm();
            assert!((a - b).abs() < 1e-9);
        }
    }
}
