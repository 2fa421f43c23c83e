//! The group `G = SL(2,R) ⋉ R^{2k}`, Iwasawa coordinates on
//! `H × [0, 2π) × R^{2k}`, the geodesic and horocycle flows, and reduction
//! of points into the fundamental domain of `Γ = Γ_θ ⋉ Z^{2k}`.
//!
//! Points are identified with group elements through `M = n_x a_y k_φ`, so
//! that the left action of `G` on points is left multiplication:
//! `act(g, point(h)) = point(g h)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance accepted on `det M` when constructing a matrix.
pub const DET_TOL: f64 = 1e-9;

/// Distance to a boundary arc of the fundamental domain below which a
/// reduced point is accepted into the closure and flagged.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Cap on generator applications during reduction.
pub const MAX_REDUCTION_STEPS: usize = 1000;

/// A real 2×2 matrix of unit determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2Mat {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Sl2Mat {
    /// Builds a matrix, rejecting determinants further than [`DET_TOL`] from 1
    /// and rescaling the accepted ones onto `det = 1`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
            return Err(Error::InvalidMatrix { det, tol: DET_TOL });
        }
        Ok(Self { a, b, c, d }.renormalized())
    }

    pub const fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// `S = [[0, -1], [1, 0]]`.
    pub const fn s() -> Self {
        Self {
            a: 0.0,
            b: -1.0,
            c: 1.0,
            d: 0.0,
        }
    }

    /// The unipotent `[[1, x], [0, 1]]`.
    pub const fn unipotent(x: f64) -> Self {
        Self {
            a: 1.0,
            b: x,
            c: 0.0,
            d: 1.0,
        }
    }

    pub const fn minus_identity() -> Self {
        Self {
            a: -1.0,
            b: 0.0,
            c: 0.0,
            d: -1.0,
        }
    }

    /// `n_x a_y k_φ`.
    pub fn from_iwasawa(x: f64, y: f64, phi: f64) -> Self {
        let sy = y.sqrt();
        let (s, c) = phi.sin_cos();
        // n_x a_y = [[√y, x/√y], [0, 1/√y]]
        let (p, q, r) = (sy, x / sy, 1.0 / sy);
        Self {
            a: p * c + q * s,
            b: -p * s + q * c,
            c: r * s,
            d: r * c,
        }
        .renormalized()
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    fn renormalized(self) -> Self {
        let det = self.det();
        if det == 1.0 || det <= 0.0 {
            return self;
        }
        let s = det.sqrt().recip();
        Self {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
        .renormalized()
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Möbius action `z ↦ (az + b)/(cz + d)`.
    pub fn mobius(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// `cz + d`.
    pub fn automorphy(&self, z: Complex64) -> Complex64 {
        self.c * z + self.d
    }

    /// Blockwise action on `(ξ₁, ξ₂)`: `(aξ₁ + bξ₂, cξ₁ + dξ₂)`.
    pub fn apply_vec(&self, v: &[f64]) -> Vec<f64> {
        let k = v.len() / 2;
        let (v1, v2) = v.split_at(k);
        let top = v1.iter().zip(v2).map(|(p, q)| self.a * p + self.b * q);
        let bottom = v1.iter().zip(v2).map(|(p, q)| self.c * p + self.d * q);
        top.chain(bottom).collect()
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0_f64, |m, e| m.max(e.abs()))
    }
}

/// An element `(M; v)` of `G = SL(2,R) ⋉ R^{2k}`; `v = (m-part, n-part)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GElem {
    pub mat: Sl2Mat,
    v: Vec<f64>,
}

impl GElem {
    pub fn new(mat: Sl2Mat, v: Vec<f64>) -> Result<Self> {
        if v.is_empty() || !v.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "translation vector must have even positive length, got {}",
                v.len()
            )));
        }
        Ok(Self { mat, v })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            mat: Sl2Mat::identity(),
            v: vec![0.0; 2 * k],
        }
    }

    fn linear(mat: Sl2Mat, k: usize) -> Self {
        Self {
            mat,
            v: vec![0.0; 2 * k],
        }
    }

    /// `ρ₁ = γ₁ = (S; 0)`.
    pub fn rho1(k: usize) -> Self {
        Self::linear(Sl2Mat::s(), k)
    }

    /// `ρ₂ = ([[1,1],[0,1]]; (s, 0))` with `s = (½, …, ½)`.
    pub fn rho2(k: usize) -> Self {
        let mut v = vec![0.5; k];
        v.extend(std::iter::repeat_n(0.0, k));
        Self {
            mat: Sl2Mat::unipotent(1.0),
            v,
        }
    }

    /// `γ₂ = (T²; 0)`.
    pub fn gamma2(k: usize) -> Self {
        Self::linear(Sl2Mat::unipotent(2.0), k)
    }

    pub fn minus_identity(k: usize) -> Self {
        Self::linear(Sl2Mat::minus_identity(), k)
    }

    /// The pure translation `(I; (m, n))`.
    pub fn translation(m: &[f64], n: &[f64]) -> Result<Self> {
        if m.len() != n.len() {
            return Err(Error::Dimension {
                expected: m.len(),
                found: n.len(),
            });
        }
        Self::new(Sl2Mat::identity(), m.iter().chain(n).copied().collect())
    }

    /// Geodesic flow `Φ^t = (diag(e^{-t/2}, e^{t/2}); 0)`.
    pub fn geodesic(t: f64, k: usize) -> Self {
        let h = (-t / 2.0).exp();
        Self::linear(
            Sl2Mat {
                a: h,
                b: 0.0,
                c: 0.0,
                d: h.recip(),
            },
            k,
        )
    }

    /// Horocycle flow `Ψ^x = ([[1, x], [0, 1]]; 0)`.
    pub fn horocycle(x: f64, k: usize) -> Self {
        Self::linear(Sl2Mat::unipotent(x), k)
    }

    pub fn k(&self) -> usize {
        self.v.len() / 2
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Group law `(M; ξ)(M'; ξ') = (MM'; ξ + Mξ')`.
    pub fn compose(&self, h: &Self) -> Result<Self> {
        if self.k() != h.k() {
            return Err(Error::Dimension {
                expected: self.k(),
                found: h.k(),
            });
        }
        let mv = self.mat.apply_vec(&h.v);
        let v = self.v.iter().zip(mv).map(|(p, q)| p + q).collect();
        Ok(Self {
            mat: self.mat.mul(&h.mat),
            v,
        })
    }

    pub fn inverse(&self) -> Self {
        let inv = self.mat.inverse();
        let v = inv.apply_vec(&self.v).into_iter().map(|e| -e).collect();
        Self { mat: inv, v }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.v
            .iter()
            .zip(&o.v)
            .fold(self.mat.max_abs_diff(&o.mat), |m, (p, q)| m.max((p - q).abs()))
    }
}

/// Coordinates `(x + iy, φ; ξ₁, ξ₂)` on `H × [0, 2π) × R^{2k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IwasawaPoint {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
    pub xi1: Vec<f64>,
    pub xi2: Vec<f64>,
}

/// Reduces an angle into `[0, 2π)`.
pub fn normalize_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl IwasawaPoint {
    pub fn new(x: f64, y: f64, phi: f64, xi1: Vec<f64>, xi2: Vec<f64>) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("y must be positive, got {y}")));
        }
        if xi1.len() != xi2.len() || xi1.is_empty() {
            return Err(Error::Dimension {
                expected: xi1.len(),
                found: xi2.len(),
            });
        }
        Ok(Self {
            x,
            y,
            phi: normalize_angle(phi),
            xi1,
            xi2,
        })
    }

    /// The horocycle-lift point `(x + iN^{-2}, 0; (α + βx, 0))`.
    pub fn horocycle_lift(n: u64, x: f64, alpha: &[f64], beta: &[f64]) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::Dimension {
                expected: alpha.len(),
                found: beta.len(),
            });
        }
        let xi1 = alpha.iter().zip(beta).map(|(a, b)| a + b * x).collect();
        let nf = n as f64;
        Self::new(x, 1.0 / (nf * nf), 0.0, xi1, vec![0.0; alpha.len()])
    }

    pub fn k(&self) -> usize {
        self.xi1.len()
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn xi(&self) -> Vec<f64> {
        self.xi1.iter().chain(&self.xi2).copied().collect()
    }

    /// The group element `(n_x a_y k_φ; ξ)` this point stands for.
    pub fn to_element(&self) -> GElem {
        GElem {
            mat: Sl2Mat::from_iwasawa(self.x, self.y, self.phi),
            v: self.xi(),
        }
    }

    pub fn from_element(g: &GElem) -> Self {
        let (x, y, phi) = iwasawa_decompose_unchecked(&g.mat);
        let k = g.k();
        Self {
            x,
            y,
            phi,
            xi1: g.v[..k].to_vec(),
            xi2: g.v[k..].to_vec(),
        }
    }

    /// Largest componentwise difference, with `φ` compared on the circle.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let dphi = (self.phi - o.phi).rem_euclid(TAU);
        let dphi = dphi.min(TAU - dphi);
        self.xi1
            .iter()
            .chain(&self.xi2)
            .zip(o.xi1.iter().chain(&o.xi2))
            .fold((self.x - o.x).abs().max((self.y - o.y).abs()).max(dphi), |m, (p, q)| {
                m.max((p - q).abs())
            })
    }
}

/// Iwasawa coordinates `(x, y, φ)` of `M = n_x a_y k_φ`.
pub fn iwasawa_decompose(m: &Sl2Mat) -> Result<(f64, f64, f64)> {
    let det = m.det();
    if (det - 1.0).abs() > DET_TOL {
        return Err(Error::InvalidMatrix { det, tol: DET_TOL });
    }
    Ok(iwasawa_decompose_unchecked(m))
}

fn iwasawa_decompose_unchecked(m: &Sl2Mat) -> (f64, f64, f64) {
    // second row of n_x a_y k_φ is y^{-1/2} (sin φ, cos φ); z = M·i
    let r2 = m.c * m.c + m.d * m.d;
    let phi = normalize_angle(m.c.atan2(m.d));
    let z = m.mobius(Complex64::i());
    (z.re, r2.recip(), phi)
}

/// Left action `(M; v)·(z, φ; ξ) = (Mz, φ + arg(cz + d); v + Mξ)`.
pub fn act(g: &GElem, p: &IwasawaPoint) -> Result<IwasawaPoint> {
    if g.k() != p.k() {
        return Err(Error::Dimension {
            expected: g.k(),
            found: p.k(),
        });
    }
    let z = p.z();
    let j = g.mat.automorphy(z);
    let zn = g.mat.mobius(z);
    let mxi = g.mat.apply_vec(&p.xi());
    let xi: Vec<f64> = g.v.iter().zip(mxi).map(|(a, b)| a + b).collect();
    let k = p.k();
    Ok(IwasawaPoint {
        x: zn.re,
        y: p.y / j.norm_sqr(),
        phi: normalize_angle(p.phi + j.arg()),
        xi1: xi[..k].to_vec(),
        xi2: xi[k..].to_vec(),
    })
}

/// Right translation `p · h`, computed in the group as `point(element(p) h)`.
pub fn right_translate(p: &IwasawaPoint, h: &GElem) -> Result<IwasawaPoint> {
    Ok(IwasawaPoint::from_element(&p.to_element().compose(h)?))
}

/// Euclidean distance from `v` to the nearest point of `Z^k`.
pub fn theta_dist(v: &[f64]) -> f64 {
    v.iter()
        .map(|e| {
            let d = e - e.round();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Which cusp neighbourhood of the fundamental domain a point lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainTag {
    /// `|z - 1| ≥ 1`: the part reaching the cusp at `i∞`, where `y ≥ √3/2`.
    CuspInfinity,
    /// `|z - 1| < 1`: the part reaching the cusp at `1`.
    CuspOne,
}

/// Membership with the boundary thickened by `tol`; the flag reports whether
/// the point lies within `tol` of one of the arcs `|z| = 1`, `|z - 2| = 1`.
pub fn domain_membership(p: &IwasawaPoint, tol: f64) -> Option<(DomainTag, bool)> {
    let z = p.z();
    let r0 = z.norm();
    let r2 = (z - 2.0).norm();
    let inside = r0 > 1.0 - tol
        && r2 > 1.0 - tol
        && (0.0..2.0).contains(&p.x)
        && (0.0..PI).contains(&p.phi)
        && p.xi1.iter().chain(&p.xi2).all(|e| (0.0..1.0).contains(e));
    if !inside {
        return None;
    }
    let on_boundary = (r0 - 1.0).abs() <= tol || (r2 - 1.0).abs() <= tol;
    let tag = if (z - 1.0).norm() >= 1.0 {
        DomainTag::CuspInfinity
    } else {
        DomainTag::CuspOne
    };
    Some((tag, on_boundary))
}

/// Strict membership in `F_Γ = F_{Γ_θ} × [0, π) × [0, 1)^{2k}`, with
/// `F_{Γ_θ} = {|z| > 1, |z - 2| > 1, 0 ≤ Re z < 2}`.
pub fn in_fundamental_domain(p: &IwasawaPoint) -> Option<DomainTag> {
    match domain_membership(p, 0.0) {
        Some((tag, false)) => Some(tag),
        _ => None,
    }
}

/// One letter of a reduction word. Powers count as a single application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    /// `γ₁ = S`.
    S,
    /// `γ₂^j = T^{2j}`.
    T2Pow(i64),
    /// `(T² S)^j`, the parabolic generator fixing the cusp at 1.
    CuspOnePow(i64),
    /// `−I = γ₁²`.
    MinusI,
    /// `γ_{m,n}`.
    Translate { m: Vec<i64>, n: Vec<i64> },
}

/// An element of `Γ` with exact integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IntGamma {
    m: [i64; 4],
    v: Vec<i64>,
}

impl IntGamma {
    fn identity(k: usize) -> Self {
        Self {
            m: [1, 0, 0, 1],
            v: vec![0; 2 * k],
        }
    }

    fn generator(g: &Generator, k: usize) -> Self {
        let lin = |m| Self { m, v: vec![0; 2 * k] };
        match g {
            Generator::S => lin([0, -1, 1, 0]),
            Generator::T2Pow(j) => lin([1, 2 * j, 0, 1]),
            // (T²S)^j = I + j(T²S − I), since T²S − I is nilpotent
            Generator::CuspOnePow(j) => lin([1 + j, -j, *j, 1 - j]),
            Generator::MinusI => lin([-1, 0, 0, -1]),
            Generator::Translate { m, n } => Self {
                m: [1, 0, 0, 1],
                v: m.iter().chain(n).copied().collect(),
            },
        }
    }

    /// `g · self`, or `None` on integer overflow.
    fn left_mul(&self, g: &Self) -> Option<Self> {
        let [a, b, c, d] = g.m;
        let [p, q, r, s] = self.m;
        let mm = [
            a.checked_mul(p)?.checked_add(b.checked_mul(r)?)?,
            a.checked_mul(q)?.checked_add(b.checked_mul(s)?)?,
            c.checked_mul(p)?.checked_add(d.checked_mul(r)?)?,
            c.checked_mul(q)?.checked_add(d.checked_mul(s)?)?,
        ];
        let k = self.v.len() / 2;
        let (v1, v2) = self.v.split_at(k);
        let mut v = Vec::with_capacity(2 * k);
        for i in 0..k {
            v.push(g.v[i].checked_add(a.checked_mul(v1[i])?.checked_add(b.checked_mul(v2[i])?)?)?);
        }
        for i in 0..k {
            v.push(g.v[k + i].checked_add(c.checked_mul(v1[i])?.checked_add(d.checked_mul(v2[i])?)?)?);
        }
        Some(Self { m: mm, v })
    }

    fn to_gelem(&self) -> GElem {
        let [a, b, c, d] = self.m.map(|e| e as f64);
        GElem {
            mat: Sl2Mat { a, b, c, d },
            v: self.v.iter().map(|&e| e as f64).collect(),
        }
    }
}

/// Result of reducing a point into `F_Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub gamma: GElem,
    pub word: Vec<Generator>,
    pub point: IwasawaPoint,
    pub tag: DomainTag,
    /// The reduced point sits within [`BOUNDARY_TOL`] of a boundary arc.
    pub on_boundary: bool,
}

/// Finds `γ ∈ Γ` with `γ·p ∈ F_Γ`.
///
/// The current point is always recomputed as `γ·p` from the exact integer
/// word, so `act(gamma, p) == point` holds bit for bit.
pub fn reduce_to_fundamental_domain(p: &IwasawaPoint) -> Result<Reduction> {
    let k = p.k();
    let mut gamma = IntGamma::identity(k);
    let mut g_f = gamma.to_gelem();
    let mut word: Vec<Generator> = Vec::new();
    let mut cur = p.clone();

    let apply = |g: Generator, gamma: &mut IntGamma, g_f: &mut GElem, word: &mut Vec<Generator>| {
        if word.len() >= MAX_REDUCTION_STEPS {
            return Err(Error::ReductionFailure {
                steps: word.len(),
                word: word.clone(),
            });
        }
        *gamma = gamma
            .left_mul(&IntGamma::generator(&g, k))
            .ok_or_else(|| Error::ReductionFailure {
                steps: word.len(),
                word: word.clone(),
            })?;
        *g_f = gamma.to_gelem();
        word.push(g);
        Ok(())
    };

    loop {
        let z = cur.z();
        let j = -(z.re / 2.0).floor() as i64;
        if j != 0 {
            apply(Generator::T2Pow(j), &mut gamma, &mut g_f, &mut word)?;
            cur = act(&g_f, p)?;
            continue;
        }
        let left = z.norm() < 1.0 - BOUNDARY_TOL;
        let right = (z - 2.0).norm() < 1.0 - BOUNDARY_TOL;
        if !left && !right {
            break;
        }
        let zm1 = z - 1.0;
        if zm1.norm() < 1.0 {
            // w = 1/(z - 1) is translated by 1 under T²S
            let shift = zm1.inv().re.round() as i64;
            if shift != 0 {
                apply(Generator::CuspOnePow(-shift), &mut gamma, &mut g_f, &mut word)?;
                cur = act(&g_f, p)?;
                continue;
            }
        }
        if right {
            apply(Generator::T2Pow(-1), &mut gamma, &mut g_f, &mut word)?;
        }
        apply(Generator::S, &mut gamma, &mut g_f, &mut word)?;
        cur = act(&g_f, p)?;
    }

    if cur.phi >= PI {
        apply(Generator::MinusI, &mut gamma, &mut g_f, &mut word)?;
        cur = act(&g_f, p)?;
    }

    // rounding in v + Mξ can leave a coordinate at exactly 1.0 or just below 0
    for _ in 0..4 {
        let fl = |e: &f64| -(e.floor() as i64);
        let m: Vec<i64> = cur.xi1.iter().map(fl).collect();
        let n: Vec<i64> = cur.xi2.iter().map(fl).collect();
        if m.iter().chain(&n).all(|&e| e == 0) {
            break;
        }
        apply(Generator::Translate { m, n }, &mut gamma, &mut g_f, &mut word)?;
        cur = act(&g_f, p)?;
    }

    match domain_membership(&cur, BOUNDARY_TOL) {
        Some((tag, on_boundary)) => Ok(Reduction {
            gamma: g_f,
            word,
            point: cur,
            tag,
            on_boundary,
        }),
        None => Err(Error::ReductionFailure {
            steps: word.len(),
            word,
        }),
    }
}
