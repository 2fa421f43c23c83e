//! Small numerical kernels: adaptive Gauss–Kronrod quadrature, the upper
//! incomplete gamma function for arbitrary real order, and golden-section
//! minimisation.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// `e(t) = exp(2πit)`, with the argument reduced mod 1 first.
#[inline]
pub fn e(t: f64) -> Complex64 {
    let (s, c) = (TAU * (t - t.floor())).sin_cos();
    Complex64::new(c, s)
}

// Gauss–Kronrod 7/15 nodes on [-1, 1] (positive half, including 0).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Adaptive Gauss–Kronrod integral of a complex integrand over `[a, b]`.
/// Returns the estimate and the accumulated error estimate.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> (Complex64, f64) {
    fn rec<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> (Complex64, f64) {
        let (v, e) = gk15(f, a, b);
        if e <= tol || depth == 0 || (b - a).abs() < 1e-14 {
            return (v, e);
        }
        let m = 0.5 * (a + b);
        let (l, el) = rec(f, a, m, 0.5 * tol, depth - 1);
        let (r, er) = rec(f, m, b, 0.5 * tol, depth - 1);
        (l + r, el + er)
    }
    rec(&f, a, b, tol, 40)
}

/// Integral over consecutive panels `[p₀, p₁], [p₁, p₂], …`.
pub fn integrate_panels<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64], tol: f64) -> (Complex64, f64) {
    let n = breaks.len().saturating_sub(1).max(1) as f64;
    breaks.windows(2).fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), w| {
        let (pv, pe) = integrate(&f, w[0], w[1], tol / n);
        (v + pv, e + pe)
    })
}

/// Upper incomplete gamma `Γ(s, x)` for `x > 0` and any real `s`, by the
/// modified Lentz continued fraction. Accurate for `x ≳ max(1, s)`.
pub fn upper_gamma_cf(s: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + s * x.ln()).exp() * h
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..max_iter {
        if (b - a).abs() < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::{gamma, gamma_ur};

    #[test]
    fn quadrature_polynomials_and_oscillation() {
        let (v, _) = integrate(|x| Complex64::new(x.powi(6), 0.0), 0.0, 1.0, 1e-14);
        assert!((v.re - 1.0 / 7.0).abs() < 1e-15);
        // ∫₀¹ e(3x) e^{-x} dx
        let w = Complex64::new(-1.0, 6.0 * std::f64::consts::PI);
        let exact = ((w).exp() - 1.0) / w;
        let (v, _) = integrate(|x| (w * x).exp(), 0.0, 1.0, 1e-13);
        assert!((v - exact).norm() < 1e-12);
        let (v, _) = integrate_panels(|x| Complex64::new(x.abs(), 0.0), &[-1.0, 0.0, 2.0], 1e-13);
        assert!((v.re - 2.5).abs() < 1e-13);
    }

    #[test]
    fn incomplete_gamma_matches_statrs() {
        for &(s, x) in &[(0.5, 3.0), (1.5, 4.0), (2.0, 10.0), (0.25, 3.2)] {
            let reference = gamma_ur(s, x) * gamma(s);
            assert!((upper_gamma_cf(s, x) / reference - 1.0).abs() < 1e-12, "s={s} x={x}");
        }
        // Γ(0, x) = E₁(x) and Γ(−1, x) = e^{−x}/x − E₁(x)
        let e1_pi = 0.010_906_300_899_274_04; // E₁(π)
        assert!((upper_gamma_cf(0.0, std::f64::consts::PI) / e1_pi - 1.0).abs() < 1e-12);
        let x = std::f64::consts::PI;
        let g = (-x).exp() / x - e1_pi;
        assert!((upper_gamma_cf(-1.0, x) / g - 1.0).abs() < 1e-11);
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section(|t| (t - 0.3).powi(2), -1.0, 2.0, 1e-10, 200);
        assert!((x - 0.3).abs() < 1e-8 && fx < 1e-16, "{x} {fx}");
    }
}
