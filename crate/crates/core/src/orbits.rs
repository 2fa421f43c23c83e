//! Exact `Γ_θ`-orbits of rational points on the torus, the minimum `m_k`
//! over a finite orbit, and the good/bad classification of rational pairs.
//!
//! Orbits are closed on integer residues mod the common denominator `q` of
//! the seed, using `S: (ξ₁, ξ₂) ↦ (−ξ₂, ξ₁)` and `T²: (ξ₁, ξ₂) ↦ (ξ₁ + 2ξ₂, ξ₂)`
//! together with their inverses.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest common denominator accepted by the orbit routines.
pub const MAX_DENOMINATOR: u64 = 1 << 32;

/// Cap on the number of states in a coupled orbit.
pub const MAX_ORBIT_STATES: usize = 50_000_000;

/// Builds `num/den` in lowest terms.
pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The representative of `r mod 1` in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// `θ₁(r)`: distance from `r` to the nearest integer.
pub fn theta1(r: &Rational) -> Rational {
    let f = frac(r);
    let g = Rational::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

/// A rational point of the torus `R²/Z²`, stored reduced into `[0, 1)²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPair {
    alpha: Rational,
    beta: Rational,
}

impl TorusPair {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        Self {
            alpha: frac(&alpha),
            beta: frac(&beta),
        }
    }

    pub fn from_ratios(a: i64, p: i64, b: i64, q: i64) -> Self {
        Self::new(rational(a, p), rational(b, q))
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.alpha.to_f64().unwrap_or(f64::NAN),
            self.beta.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `(a, b, q)` with `(α, β) = (a/q, b/q)` and `q` the common denominator.
    pub fn numerators(&self) -> Result<(u64, u64, u64)> {
        let q = common_denominator([&self.alpha, &self.beta])?;
        Ok((scale(&self.alpha, q), scale(&self.beta, q), q))
    }
}

impl std::fmt::Display for TorusPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

fn common_denominator<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Result<u64> {
    let mut q = BigInt::one();
    for r in rs {
        q = q.lcm(r.denom());
    }
    match q.to_u64() {
        Some(q) if q <= MAX_DENOMINATOR => Ok(q),
        _ => Err(Error::Unsupported(format!(
            "common denominator {q} exceeds {MAX_DENOMINATOR}"
        ))),
    }
}

/// `r·q` for `r ∈ [0, 1)` whose denominator divides `q`.
fn scale(r: &Rational, q: u64) -> u64 {
    (frac(r) * BigRational::from_integer(BigInt::from(q)))
        .to_integer()
        .to_u64()
        .expect("residue fits in u64")
}

/// A finite `Γ_θ`-orbit on the torus together with the sets it meets.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub seed: TorusPair,
    /// Sorted orbit points.
    pub points: Vec<TorusPair>,
    /// Points on `L_U = {ξ₂ = 0}`.
    pub u: Vec<TorusPair>,
    /// Points on `L_V^+ = {ξ₂ = ξ₁ + ½}`.
    pub v_plus: Vec<TorusPair>,
    /// Points on `L_V^- = {ξ₂ = ξ₁ − ½}`; the same set as `v_plus` mod 1.
    pub v_minus: Vec<TorusPair>,
    pub m1: Rational,
}

impl OrbitRecord {
    pub fn meets_lines(&self) -> bool {
        !self.u.is_empty() || !self.v_plus.is_empty()
    }
}

type State = Vec<u64>;

fn neighbours(s: &State, q: u64) -> [State; 4] {
    let k = s.len() / 2;
    let map = |f: &dyn Fn(u64, u64) -> (u64, u64)| {
        let mut t = s.clone();
        for i in 0..k {
            let (a, b) = f(s[i], s[k + i]);
            t[i] = a;
            t[k + i] = b;
        }
        t
    };
    [
        map(&|a, b| ((q - b) % q, a)),
        map(&|a, b| (b, (q - a) % q)),
        map(&|a, b| ((a + 2 * b) % q, b)),
        map(&|a, b| ((a + 2 * (q - b)) % q, b)),
    ]
}

fn close(seed: State, q: u64) -> Result<Vec<State>> {
    let mut seen: HashSet<State> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back(seed);
    while let Some(s) = queue.pop_front() {
        for t in neighbours(&s, q) {
            if !seen.contains(&t) {
                if seen.len() >= MAX_ORBIT_STATES {
                    return Err(Error::Unsupported(format!("orbit exceeds {MAX_ORBIT_STATES} states")));
                }
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<State> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Closure of `seed` under `S` and `T²` (and their inverses) mod 1.
pub fn gamma_theta_orbit(seed: &TorusPair) -> Result<OrbitRecord> {
    let (a, b, q) = seed.numerators()?;
    let states = close(vec![a, b], q)?;
    let to_pair = |s: &State| TorusPair::new(rational(s[0] as i64, q as i64), rational(s[1] as i64, q as i64));
    let points: Vec<TorusPair> = states.iter().map(to_pair).collect();
    // ξ₂ − ξ₁ + ½ ≡ 0 ⇔ 2(b − a) + q ≡ 0 mod 2q
    let on_v = |s: &State| (2 * s[1] + 3 * q - 2 * s[0]).is_multiple_of(2 * q);
    let u: Vec<TorusPair> = states.iter().filter(|s| s[1] == 0).map(to_pair).collect();
    let v: Vec<TorusPair> = states.iter().filter(|s| on_v(s)).map(to_pair).collect();
    let m1 = points
        .iter()
        .map(|p| {
            let shifted = &p.beta - &p.alpha + rational(1, 2);
            theta1(&p.beta).min(theta1(&shifted))
        })
        .min()
        .expect("orbit is non-empty");
    Ok(OrbitRecord {
        seed: seed.clone(),
        points,
        u,
        v_plus: v.clone(),
        v_minus: v,
        m1,
    })
}

/// `m₁(α, β)`: the exact minimum of `min(θ₁(ξ₂), θ₁(ξ₂ − ξ₁ + ½))` over the orbit of `(α, β)`.
pub fn m1_exact(alpha: &Rational, beta: &Rational) -> Result<Rational> {
    Ok(gamma_theta_orbit(&TorusPair::new(alpha.clone(), beta.clone()))?.m1)
}

/// `m_k` on rational data, returned through its exact square.
#[derive(Debug, Clone, PartialEq)]
pub struct MkValue {
    pub squared: Rational,
    pub value: f64,
    pub orbit_size: usize,
}

/// `m_k(α, β)` over the orbit of `(α, β) ∈ T^{2k}` under the diagonal action
/// of `Γ_θ` (one shared matrix for every component).
pub fn mk_exact(alpha: &[Rational], beta: &[Rational]) -> Result<MkValue> {
    if alpha.len() != beta.len() {
        return Err(Error::Dimension {
            expected: alpha.len(),
            found: beta.len(),
        });
    }
    if alpha.is_empty() {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let q = common_denominator(alpha.iter().chain(beta))?;
    let seed: State = alpha.iter().chain(beta).map(|r| scale(r, q)).collect();
    let states = close(seed, q)?;
    let k = alpha.len();
    // both squared distances over the common denominator 4q²
    let best = states
        .iter()
        .map(|s| {
            let (xi1, xi2) = s.split_at(k);
            let d_u: u128 = xi2.iter().map(|&b| (2 * b.min(q - b)) as u128).map(|e| e * e).sum();
            let d_v: u128 = xi1
                .iter()
                .zip(xi2)
                .map(|(&a, &b)| {
                    let v = (2 * b + 3 * q - 2 * a) % (2 * q);
                    let e = v.min(2 * q - v) as u128;
                    e * e
                })
                .sum();
            d_u.min(d_v)
        })
        .min()
        .expect("orbit is non-empty");
    let den = BigInt::from(4u128 * q as u128 * q as u128);
    let squared = BigRational::new(BigInt::from(best), den);
    let value = squared.to_f64().unwrap_or(f64::NAN).sqrt();
    Ok(MkValue {
        squared,
        value,
        orbit_size: states.len(),
    })
}

/// The reduced form `(a/q, b/q)` of a pair and its classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub a: u64,
    pub b: u64,
    pub q: u64,
    pub good: bool,
    /// `q/2` when the pair is good.
    pub m: Option<u64>,
    pub reason: Option<String>,
}

/// Good if and only if `a`, `b` are odd and `q = 2m` with `m` odd.
pub fn classify_pair(alpha: &Rational, beta: &Rational) -> Result<PairClass> {
    let (a, b, q) = TorusPair::new(alpha.clone(), beta.clone()).numerators()?;
    if q == 1 {
        return Ok(PairClass {
            a,
            b,
            q,
            good: false,
            m: None,
            reason: Some("orbit meets L_U".into()),
        });
    }
    let good = a % 2 == 1 && b % 2 == 1 && q % 4 == 2;
    let reason = if good {
        None
    } else if a % 2 == 0 || b % 2 == 0 {
        Some("a numerator is even".into())
    } else {
        Some(format!("q = {q} is not twice an odd integer"))
    };
    Ok(PairClass {
        a,
        b,
        q,
        good,
        m: good.then_some(q / 2),
        reason,
    })
}

/// `(m₁(α,β), m₁(α,−β), m₁(−α,β), m₁(−α,−β))`.
pub fn symmetry_m1(alpha: &Rational, beta: &Rational) -> Result<[Rational; 4]> {
    let (na, nb) = (-alpha, -beta);
    Ok([
        m1_exact(alpha, beta)?,
        m1_exact(alpha, &nb)?,
        m1_exact(&na, beta)?,
        m1_exact(&na, &nb)?,
    ])
}

/// The second Jordan totient `J₂(m) = m² ∏_{p | m} (1 − p⁻²)`.
pub fn jordan_totient_j2(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("J2 needs m >= 1".into()));
    }
    let mut n = m;
    let mut out = m as u128 * m as u128;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            out = out / (p as u128 * p as u128) * (p as u128 * p as u128 - 1);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out = out / (n as u128 * n as u128) * (n as u128 * n as u128 - 1);
    }
    u64::try_from(out).map_err(|_| Error::Unsupported(format!("J2({m}) overflows u64")))
}

/// All pairs `(a/2m, b/2m)` with `a`, `b` odd and `gcd(a, b, m) = 1`.
pub fn enumerate_good_pairs(m: u64) -> Result<Vec<TorusPair>> {
    if m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("m = {m} must be odd")));
    }
    let q = 2 * m;
    let mut out = Vec::new();
    for a in (1..q).step_by(2) {
        for b in (1..q).step_by(2) {
            if a.gcd(&b).gcd(&m) == 1 {
                out.push(TorusPair::new(
                    rational(a as i64, q as i64),
                    rational(b as i64, q as i64),
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn r(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    #[test]
    fn orbit_of_one_sixth() {
        let o = gamma_theta_orbit(&TorusPair::new(r(1, 6), r(1, 6))).unwrap();
        let expected: Vec<TorusPair> = [(1, 1), (1, 3), (1, 5), (3, 1), (3, 5), (5, 1), (5, 3), (5, 5)]
            .iter()
            .map(|&(a, b)| TorusPair::new(r(a, 6), r(b, 6)))
            .collect();
        assert_eq!(o.points, expected);
        assert!(!o.meets_lines());
        assert_eq!(o.m1, r(1, 6));
    }

    #[test]
    fn small_orbits() {
        let o = gamma_theta_orbit(&TorusPair::new(r(1, 2), r(1, 2))).unwrap();
        assert_eq!(o.points.len(), 1);
        assert_eq!(o.m1, r(1, 2));
        let o = gamma_theta_orbit(&TorusPair::new(r(0, 1), r(0, 1))).unwrap();
        assert_eq!(o.points.len(), 1);
        assert!(!o.u.is_empty());
        assert!(o.m1.is_zero());
        assert!(m1_exact(&r(1, 3), &r(0, 1)).unwrap().is_zero());
        // inputs outside [0, 1) are reduced first
        assert_eq!(TorusPair::new(r(-5, 6), r(7, 6)), TorusPair::new(r(1, 6), r(1, 6)));
    }

    #[test]
    fn mk_examples() {
        for (a, b) in [(r(1, 6), r(1, 6)), (r(1, 2), r(1, 3)), (r(1, 10), r(3, 10))] {
            let mk = mk_exact(std::slice::from_ref(&a), std::slice::from_ref(&b)).unwrap();
            let m1 = m1_exact(&a, &b).unwrap();
            assert_eq!(mk.squared, &m1 * &m1);
        }
        let mk = mk_exact(&[r(1, 6), r(0, 1)], &[r(1, 6), r(0, 1)]).unwrap();
        assert_eq!(mk.squared, r(1, 36));
        // the coupled orbit of (1/2, 0; 0, 1/2) reaches ξ₂ − ξ₁ + s ∈ Z²
        let mk = mk_exact(&[r(1, 2), r(0, 1)], &[r(0, 1), r(1, 2)]).unwrap();
        assert!(mk.squared.is_zero());
        assert!(mk_exact(&[r(1, 2)], &[]).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = classify_pair(&r(1, 2), &r(1, 6)).unwrap();
        assert_eq!((c.a, c.b, c.q, c.good, c.m), (3, 1, 6, true, Some(3)));
        assert!(!classify_pair(&r(1, 2), &r(1, 3)).unwrap().good);
        let c = classify_pair(&r(1, 2), &r(1, 2)).unwrap();
        assert_eq!((c.a, c.b, c.q, c.good, c.m), (1, 1, 2, true, Some(1)));
        let c = classify_pair(&r(0, 1), &r(3, 1)).unwrap();
        assert!(!c.good && c.reason.as_deref() == Some("orbit meets L_U"));
        assert!(!classify_pair(&r(1, 4), &r(1, 4)).unwrap().good);
    }

    #[test]
    fn symmetry_examples() {
        for (a, b, v) in [(r(1, 6), r(1, 6), r(1, 6)), (r(0, 1), r(0, 1), r(0, 1))] {
            assert!(symmetry_m1(&a, &b).unwrap().iter().all(|e| *e == v));
        }
        let s = symmetry_m1(&r(1, 2), &r(1, 6)).unwrap();
        assert!(s.iter().all(|e| *e == s[0]));
    }

    #[test]
    fn totient_and_enumeration() {
        assert_eq!(jordan_totient_j2(1).unwrap(), 1);
        assert_eq!(jordan_totient_j2(3).unwrap(), 8);
        assert_eq!(jordan_totient_j2(6).unwrap(), 24);
        assert_eq!(enumerate_good_pairs(1).unwrap(), vec![TorusPair::new(r(1, 2), r(1, 2))]);
        assert_eq!(enumerate_good_pairs(3).unwrap().len(), 8);
        assert_eq!(enumerate_good_pairs(5).unwrap().len(), 24);
        assert!(enumerate_good_pairs(4).is_err());
    }

    #[test]
    fn j2_matches_gcd_count() {
        for m in 1..60u64 {
            let count = (0..m)
                .flat_map(|a| (0..m).map(move |b| (a, b)))
                .filter(|&(a, b)| a.gcd(&b).gcd(&m) == 1)
                .count() as u64;
            assert_eq!(jordan_totient_j2(m).unwrap(), count, "m = {m}");
        }
    }

    #[test]
    fn good_pairs_clear_lower_bound() {
        for m in (1u64..=15).step_by(2) {
            let pairs = enumerate_good_pairs(m).unwrap();
            let j2 = jordan_totient_j2(m).unwrap();
            assert_eq!(pairs.len() as u64, j2);
            let m2 = (m * m) as f64;
            assert!(8.0 * m2 / std::f64::consts::PI.powi(2) <= j2 as f64 && j2 as f64 <= m2);
            for p in pairs {
                let c = classify_pair(p.alpha(), p.beta()).unwrap();
                assert!(c.good && c.m == Some(m));
                assert!(m1_exact(p.alpha(), p.beta()).unwrap() >= r(1, 2 * m as i64));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pair() -> impl Strategy<Value = TorusPair> {
            (2i64..=30)
                .prop_flat_map(|q| (0..q, 0..q, Just(q)))
                .prop_map(|(a, b, q)| TorusPair::new(r(a, q), r(b, q)))
        }

        proptest! {
            #[test]
            fn orbit_is_closed_and_m1_constant(seed in pair()) {
                let o = gamma_theta_orbit(&seed).unwrap();
                let set: HashSet<&TorusPair> = o.points.iter().collect();
                prop_assert!(set.contains(&seed));
                for p in &o.points {
                    let s = TorusPair::new(-p.beta().clone(), p.alpha().clone());
                    let t = TorusPair::new(p.alpha() + p.beta() * r(2, 1), p.beta().clone());
                    prop_assert!(set.contains(&s) && set.contains(&t));
                }
                prop_assert_eq!(o.m1.is_zero(), o.meets_lines());
                let other = &o.points[o.points.len() / 2];
                let o2 = gamma_theta_orbit(other).unwrap();
                prop_assert_eq!(o2.points.len(), o.points.len());
                prop_assert_eq!(o2.m1, o.m1);
            }
        }
    }
}
