//! Executable checks: the Weyl-sum/theta identity, `Γ`-invariance,
//! reduction consistency, the classification oracle, the `κ`-shift
//! inequality, `ϑ₃` sup scans and growth-exponent fits. Each suite produces
//! a JSON-serialisable [`Report`].

use std::f64::consts::TAU;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::theta3_constant;
use crate::error::{Error, Result};
use crate::geometry::{act, in_fundamental_domain, reduce_to_fundamental_domain, DomainTag, GElem, IwasawaPoint};
use crate::orbits::{classify_pair, gamma_theta_orbit, rational, Rational, TorusPair};
use crate::theta::{kappa_eta, scaled_theta3, theta_modulus, weyl_heis_act, weyl_sum, Cutoff, TruncationBudget};

pub const DEFAULT_SEED: u64 = 0x5EED;

pub const IDENTITY_TOL: f64 = 1e-9;
pub const INVARIANCE_TOL: f64 = 1e-8;
pub const REDUCTION_TOL: f64 = 1e-7;
pub const REDUCTION_MAX_STEPS: usize = 200;
/// Relative rise between consecutive scales required for a growing verdict.
pub const GROWTH_STEP: f64 = 0.05;
/// Absolute tolerance on each `ϑ₃` evaluation in scans.
pub const SCAN_TOL: f64 = 1e-12;
pub const GOOD_SLOPE_MAX: f64 = 0.6;
pub const BAD_SLOPE_MIN: f64 = 0.8;

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub name: String,
    pub inputs: Value,
    pub observed: Value,
    pub threshold: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub items: Vec<ReportItem>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: &str, items: Vec<ReportItem>) -> Self {
        let passed = items.iter().filter(|i| i.pass).count();
        let total = items.len();
        Self {
            suite: suite.to_string(),
            items,
            summary: Summary {
                total,
                passed,
                failed: total - passed,
                pass: passed == total,
            },
        }
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }
}

fn item(name: &str, inputs: Value, observed: Value, threshold: Value, pass: bool) -> ReportItem {
    ReportItem {
        name: name.to_string(),
        inputs,
        observed,
        threshold,
        pass,
    }
}

/// `|N^{-k/2}|S_N^f| − |Θ_f(x + iN⁻², 0; (α + βx, 0))||`.
pub fn check_identity(
    f: &Cutoff,
    n: u64,
    x: f64,
    alpha: &[f64],
    beta: &[f64],
    budget: &TruncationBudget,
) -> Result<f64> {
    let s = weyl_sum(f, n, x, alpha, beta, budget)?;
    let p = IwasawaPoint::horocycle_lift(n, x, alpha, beta)?;
    let t = theta_modulus(f, &p, budget)?;
    let k = alpha.len() as f64;
    Ok((s.norm() / (n as f64).powf(k / 2.0) - t).abs())
}

/// Generators of `Γ` used by the invariance check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InvarianceGenerator {
    Rho1,
    Rho2,
    Translation { m: Vec<i64>, n: Vec<i64> },
}

impl InvarianceGenerator {
    fn element(&self, k: usize) -> Result<GElem> {
        match self {
            InvarianceGenerator::Rho1 => Ok(GElem::rho1(k)),
            InvarianceGenerator::Rho2 => Ok(GElem::rho2(k)),
            InvarianceGenerator::Translation { m, n } => {
                let to_f = |v: &Vec<i64>| v.iter().map(|&e| e as f64).collect::<Vec<f64>>();
                GElem::translation(&to_f(m), &to_f(n))
            }
        }
    }
}

/// `||Θ_f(ρ·p)| − |Θ_f(p)||`.
pub fn check_invariance(
    f: &Cutoff,
    p: &IwasawaPoint,
    generator: &InvarianceGenerator,
    budget: &TruncationBudget,
) -> Result<f64> {
    let g = generator.element(p.k())?;
    let q = act(&g, p)?;
    Ok((theta_modulus(f, &q, budget)? - theta_modulus(f, p, budget)?).abs())
}

/// Outcome of reducing one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub residual: f64,
    pub steps: usize,
    pub tag: DomainTag,
    pub in_domain: bool,
    pub on_boundary: bool,
}

/// Reduces `p` and compares `|Θ_gauss|` before and after.
pub fn check_reduction(p: &IwasawaPoint, budget: &TruncationBudget) -> Result<ReductionCheck> {
    let r = reduce_to_fundamental_domain(p)?;
    let f = Cutoff::gaussian(p.k());
    let residual = if r.word.is_empty() {
        0.0
    } else {
        (theta_modulus(&f, p, budget)? - theta_modulus(&f, &r.point, budget)?).abs()
    };
    let in_domain = r.on_boundary || in_fundamental_domain(&r.point) == Some(r.tag);
    Ok(ReductionCheck {
        residual,
        steps: r.word.len(),
        tag: r.tag,
        in_domain,
        on_boundary: r.on_boundary,
    })
}

/// Comparison of `classify_pair` against orbit-computed line emptiness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub q_max: u64,
    pub pairs_checked: usize,
    pub good_pairs: usize,
    /// `(pair, classified good, orbit avoids the lines)`.
    pub mismatches: Vec<(String, bool, bool)>,
}

/// Runs the classification oracle over every reduced pair with `1 < q ≤ q_max`.
pub fn check_classification(q_max: u64) -> Result<ClassificationReport> {
    if q_max < 2 {
        return Err(Error::InvalidArgument("q_max must be at least 2".into()));
    }
    let pairs: Vec<(u64, u64, u64)> = (2..=q_max)
        .flat_map(|q| (0..q).flat_map(move |a| (0..q).map(move |b| (a, b, q))))
        .filter(|&(a, b, q)| a.gcd(&b).gcd(&q) == 1)
        .collect();
    let results: Vec<Result<(String, bool, bool)>> = pairs
        .par_iter()
        .map(|&(a, b, q)| {
            let (alpha, beta) = (rational(a as i64, q as i64), rational(b as i64, q as i64));
            let good = classify_pair(&alpha, &beta)?.good;
            let orbit = gamma_theta_orbit(&TorusPair::new(alpha, beta))?;
            Ok((format!("({a}/{q}, {b}/{q})"), good, !orbit.meets_lines()))
        })
        .collect();
    let mut mismatches = Vec::new();
    let mut good_pairs = 0;
    for r in results {
        let (name, good, avoids) = r?;
        good_pairs += good as usize;
        if good != avoids {
            mismatches.push((name, good, avoids));
        }
    }
    Ok(ClassificationReport {
        q_max,
        pairs_checked: pairs.len(),
        good_pairs,
        mismatches,
    })
}

/// One trial of the `κ`-shift inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaShiftTrial {
    pub a: f64,
    pub b: f64,
    pub eta: f64,
    pub shifted: f64,
    pub bound: f64,
}

/// `κ_η(W(a, b) f) ≤ 3^η (1 + a² + b²)^{η/2} κ_η(f)` for the Gaussian.
pub fn kappa_shift_trial(a: f64, b: f64, eta: f64) -> Result<KappaShiftTrial> {
    let g = Cutoff::gaussian(1);
    let base = kappa_eta(&g, eta)?.value;
    let shifted = kappa_eta(&weyl_heis_act(&[a], &[b], &g)?, eta)?.value;
    let bound = 3f64.powf(eta) * (1.0 + a * a + b * b).powf(eta / 2.0) * base;
    Ok(KappaShiftTrial {
        a,
        b,
        eta,
        shifted,
        bound,
    })
}

/// Random trials with `(a, b) ∈ [−3, 3]²` and `η ∈ {1.5, 2, 3}`.
pub fn check_kappa_shift(trials: usize, seed: u64) -> Result<Vec<KappaShiftTrial>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(3 * trials);
    for _ in 0..trials {
        let (a, b) = (rng.gen_range(-3.0..=3.0), rng.gen_range(-3.0..=3.0));
        for eta in [1.5, 2.0, 3.0] {
            out.push(kappa_shift_trial(a, b, eta)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

/// Grid suprema of `ε^{1/4}|ϑ₃(α + βx; x + iε)|` over several `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub pair: (f64, f64),
    /// Scales `ε`, sorted from coarse (large) to fine.
    pub scales: Vec<f64>,
    pub x_range: (f64, f64),
    pub samples: usize,
    pub sup_values: Vec<f64>,
    pub bound: Option<f64>,
    pub verdict: Verdict,
}

/// Uniform grid of `samples` points on `[lo, hi]`, endpoints included.
pub fn x_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}

/// Sup of `ε^{1/4}|ϑ₃(α + βx; x + iε)|` over the grid.
pub fn grid_sup(alpha: f64, beta: f64, eps: f64, xs: &[f64]) -> Result<f64> {
    let vals: Result<Vec<f64>> = xs
        .par_iter()
        .map(|&x| scaled_theta3(alpha, beta, x, eps, SCAN_TOL))
        .collect();
    Ok(vals?.into_iter().fold(0.0, f64::max))
}

/// `Bounded` if every sup is within `bound`; otherwise `Growing` if there are
/// at least three scales and each step rises by more than 5%; otherwise
/// `Inconclusive`.
pub fn verdict(sups: &[f64], bound: Option<f64>) -> Verdict {
    if let Some(b) = bound {
        if sups.iter().all(|s| *s <= b) {
            return Verdict::Bounded;
        }
    }
    let rising = sups.windows(2).all(|w| w[1] > w[0] * (1.0 + GROWTH_STEP));
    if sups.len() >= 3 && rising {
        Verdict::Growing
    } else {
        Verdict::Inconclusive
    }
}

pub fn sup_scan(
    alpha: f64,
    beta: f64,
    scales: &[f64],
    x_range: (f64, f64),
    samples: usize,
    bound: Option<f64>,
) -> Result<ScanResult> {
    if samples < 100 {
        return Err(Error::InvalidArgument("sup_scan needs at least 100 samples".into()));
    }
    if scales.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument("scales must be positive".into()));
    }
    let mut scales = scales.to_vec();
    scales.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let xs = x_grid(x_range.0, x_range.1, samples);
    let sups: Result<Vec<f64>> = scales.iter().map(|&eps| grid_sup(alpha, beta, eps, &xs)).collect();
    let sups = sups?;
    let verdict = verdict(&sups, bound);
    Ok(ScanResult {
        pair: (alpha, beta),
        scales,
        x_range,
        samples,
        sup_values: sups,
        bound,
        verdict,
    })
}

/// Log-log fit of `sup_x |S_N(x; α, β)|` (sharp cut-off) against `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub pair: (f64, f64),
    pub n_list: Vec<u64>,
    pub sups: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares line through `(x_i, y_i)`: `(slope, intercept)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn growth_exponent_scan(
    alpha: f64,
    beta: f64,
    n_list: &[u64],
    x_range: (f64, f64),
    samples: usize,
) -> Result<GrowthFit> {
    if n_list.len() < 2 {
        return Err(Error::InvalidArgument("need at least two values of N".into()));
    }
    let f = Cutoff::sharp_indicator(1);
    let budget = TruncationBudget::default();
    let xs = x_grid(x_range.0, x_range.1, samples);
    let mut sups = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let vals: Result<Vec<f64>> = xs
            .par_iter()
            .map(|&x| Ok(weyl_sum(&f, n, x, &[alpha], &[beta], &budget)?.norm()))
            .collect();
        sups.push(vals?.into_iter().fold(0.0, f64::max));
    }
    let lx: Vec<f64> = n_list.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = sups.iter().map(|s| s.ln()).collect();
    let (slope, intercept) = least_squares(&lx, &ly);
    Ok(GrowthFit {
        pair: (alpha, beta),
        n_list: n_list.to_vec(),
        sups,
        slope,
        intercept,
    })
}

/// Options shared by the suites.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub q_max: u64,
    pub trials: usize,
    pub pair: Option<(Rational, Rational)>,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            q_max: 24,
            trials: 50,
            pair: None,
            samples: 4000,
        }
    }
}

pub const SUITES: [&str; 7] = [
    "identity",
    "invariance",
    "reduction",
    "classify",
    "kappa",
    "sup",
    "growth",
];

/// Runs one named suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Report> {
    match name {
        "identity" => identity_suite(opts),
        "invariance" => invariance_suite(opts),
        "reduction" => reduction_suite(opts),
        "classify" => classify_suite(opts),
        "kappa" => kappa_suite(opts),
        "sup" => sup_suite(opts),
        "growth" => growth_suite(opts),
        other => Err(Error::InvalidArgument(format!(
            "unknown suite '{other}', expected one of {SUITES:?}"
        ))),
    }
}

/// A random rational `a/q` with `q ≤ q_max`, as a float.
fn random_rational(rng: &mut ChaCha8Rng, q_max: i64) -> f64 {
    let q = rng.gen_range(1..=q_max);
    rng.gen_range(0..q) as f64 / q as f64
}

/// The inputs of the identity suite: `(N, x, α, β)`.
pub fn identity_cases(seed: u64, count: usize, k: usize) -> Vec<(u64, f64, Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=50);
            let x = rng.gen_range(0.0..=2.0);
            let alpha = (0..k).map(|_| random_rational(&mut rng, 12)).collect();
            let beta = (0..k).map(|_| random_rational(&mut rng, 12)).collect();
            (n, x, alpha, beta)
        })
        .collect()
}

fn max_residual(f: &Cutoff, cases: &[(u64, f64, Vec<f64>, Vec<f64>)], budget: &TruncationBudget) -> Result<f64> {
    cases.iter().try_fold(0.0_f64, |m, (n, x, a, b)| {
        Ok(m.max(check_identity(f, *n, *x, a, b, budget)?))
    })
}

fn identity_suite(opts: &SuiteOptions) -> Result<Report> {
    let budget = TruncationBudget::default();
    let mut items = Vec::new();
    let families = [
        ("gaussian k=1", Cutoff::gaussian(1), 100usize, IDENTITY_TOL),
        ("gaussian k=2", Cutoff::gaussian(2), 100, IDENTITY_TOL),
        ("sharp k=1", Cutoff::sharp_indicator(1), 100, 1e-12),
        ("ramp(8) k=1", Cutoff::smooth_ramp(8, 1)?, 100, IDENTITY_TOL),
    ];
    for (name, f, count, tol) in families {
        let cases = identity_cases(opts.seed, count, f.k());
        let r = max_residual(&f, &cases, &budget)?;
        items.push(item(
            name,
            json!({"cases": count, "seed": opts.seed}),
            json!(r),
            json!(tol),
            r < tol,
        ));
    }
    Ok(Report::new("identity", items))
}

/// A point with `x ∈ [−2, 2]`, `y ∈ [0.05, 3]`, random `φ` (or `φ = 0`) and `ξ ∈ [−1, 1]^{2k}`.
pub fn random_point(rng: &mut ChaCha8Rng, k: usize, random_phi: bool) -> IwasawaPoint {
    let phi = if random_phi { rng.gen_range(0.0..TAU) } else { 0.0 };
    IwasawaPoint::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(0.05..3.0),
        phi,
        (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    )
    .expect("valid point")
}

fn invariance_suite(opts: &SuiteOptions) -> Result<Report> {
    let budget = TruncationBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let gauss = Cutoff::gaussian(1);
    let ramp = Cutoff::smooth_ramp(8, 1)?;
    let mut worst = [0.0_f64; 5];
    let points = 300;
    for _ in 0..points {
        let p = random_point(&mut rng, 1, true);
        let p0 = IwasawaPoint { phi: 0.0, ..p.clone() };
        let tr = InvarianceGenerator::Translation {
            m: vec![rng.gen_range(-5..=5)],
            n: vec![rng.gen_range(-5..=5)],
        };
        let r = [
            check_invariance(&gauss, &p, &InvarianceGenerator::Rho1, &budget)?,
            check_invariance(&gauss, &p, &InvarianceGenerator::Rho2, &budget)?,
            check_invariance(&gauss, &p, &tr, &budget)?,
            check_invariance(&ramp, &p0, &InvarianceGenerator::Rho2, &budget)?,
            check_invariance(&ramp, &p0, &tr, &budget)?,
        ];
        for (w, v) in worst.iter_mut().zip(r) {
            *w = w.max(v);
        }
    }
    let names = [
        "rho1 gaussian",
        "rho2 gaussian",
        "translation gaussian",
        "rho2 ramp(8)",
        "translation ramp(8)",
    ];
    let items = names
        .iter()
        .zip(worst)
        .map(|(n, w)| {
            item(
                n,
                json!({"points": points, "seed": opts.seed}),
                json!(w),
                json!(INVARIANCE_TOL),
                w < INVARIANCE_TOL,
            )
        })
        .collect();
    Ok(Report::new("invariance", items))
}

/// A horocycle-lift point with `N ∈ [10, 1000]`, `x ∈ [0, 2]` and rational `α`, `β`.
pub fn random_horocycle_point(rng: &mut ChaCha8Rng) -> IwasawaPoint {
    let n = rng.gen_range(10..=1000);
    let x = rng.gen_range(0.0..2.0);
    let (a, b) = (random_rational(rng, 12), random_rational(rng, 12));
    IwasawaPoint::horocycle_lift(n, x, &[a], &[b]).expect("valid point")
}

fn reduction_suite(opts: &SuiteOptions) -> Result<Report> {
    let budget = TruncationBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut items = Vec::new();
    let example = IwasawaPoint::horocycle_lift(100, 2f64.sqrt() - 1.0, &[0.5], &[1.0 / 6.0])?;
    let c = check_reduction(&example, &budget)?;
    items.push(item(
        "sqrt2-1 + 1e-4 i",
        json!({"x": example.x, "y": example.y}),
        json!({"residual": c.residual, "steps": c.steps, "tag": c.tag}),
        json!({"residual": REDUCTION_TOL, "steps": REDUCTION_MAX_STEPS}),
        c.residual < REDUCTION_TOL && c.steps <= REDUCTION_MAX_STEPS && c.in_domain,
    ));
    let inside = IwasawaPoint::new(1.0, 2.0, 0.1, vec![0.3], vec![0.3])?;
    let c = check_reduction(&inside, &budget)?;
    items.push(item(
        "already reduced",
        json!({"x": 1.0, "y": 2.0}),
        json!({"residual": c.residual, "steps": c.steps}),
        json!({"residual": 0.0, "steps": 0}),
        c.residual == 0.0 && c.steps == 0,
    ));
    let (mut worst, mut longest, mut outside) = (0.0_f64, 0usize, 0usize);
    let count = 100;
    for _ in 0..count {
        let c = check_reduction(&random_horocycle_point(&mut rng), &budget)?;
        worst = worst.max(c.residual);
        longest = longest.max(c.steps);
        outside += !c.in_domain as usize;
    }
    items.push(item(
        "random horocycle lifts",
        json!({"points": count, "seed": opts.seed}),
        json!({"max_residual": worst, "max_steps": longest, "outside_domain": outside}),
        json!({"residual": REDUCTION_TOL, "steps": REDUCTION_MAX_STEPS}),
        worst < REDUCTION_TOL && longest <= REDUCTION_MAX_STEPS && outside == 0,
    ));
    Ok(Report::new("reduction", items))
}

fn classify_suite(opts: &SuiteOptions) -> Result<Report> {
    let r = check_classification(opts.q_max)?;
    let fig1 = classify_pair(&rational(1, 2), &rational(1, 6))?.good;
    Ok(Report::new(
        "classify",
        vec![
            item(
                "oracle agreement",
                json!({"q_max": opts.q_max}),
                json!({"pairs": r.pairs_checked, "good": r.good_pairs, "mismatches": r.mismatches}),
                json!({"mismatches": 0}),
                r.mismatches.is_empty(),
            ),
            item(
                "(3/6, 1/6) is good",
                json!({"pair": "(1/2, 1/6)"}),
                json!(fig1),
                json!(true),
                fig1,
            ),
        ],
    ))
}

fn kappa_suite(opts: &SuiteOptions) -> Result<Report> {
    let trials = check_kappa_shift(opts.trials, opts.seed)?;
    let violations: Vec<&KappaShiftTrial> = trials.iter().filter(|t| t.shifted > t.bound).collect();
    let zero: Vec<KappaShiftTrial> = [1.5, 2.0, 3.0]
        .iter()
        .map(|&e| kappa_shift_trial(0.0, 0.0, e))
        .collect::<Result<_>>()?;
    let zero_equal = zero.iter().all(|t| {
        (t.shifted
            - kappa_eta(&Cutoff::gaussian(1), t.eta)
                .map(|k| k.value)
                .unwrap_or(f64::NAN))
        .abs()
            < 1e-12
    });
    let large = kappa_shift_trial(0.0, 10.0, 2.0)?;
    Ok(Report::new(
        "kappa",
        vec![
            item(
                "random shifts",
                json!({"trials": opts.trials, "etas": [1.5, 2.0, 3.0], "seed": opts.seed}),
                json!({"violations": violations.len(), "max_ratio": trials.iter().map(|t| t.shifted / t.bound).fold(0.0, f64::max)}),
                json!({"violations": 0}),
                violations.is_empty(),
            ),
            item(
                "zero shift",
                json!({"a": 0.0, "b": 0.0}),
                json!(zero.iter().map(|t| t.shifted).collect::<Vec<_>>()),
                json!("equal to unshifted"),
                zero_equal,
            ),
            item(
                "large shift b = 10",
                json!({"a": 0.0, "b": 10.0, "eta": 2.0}),
                json!({"shifted": large.shifted, "bound": large.bound}),
                json!("shifted <= bound"),
                large.shifted <= large.bound,
            ),
        ],
    ))
}

/// Scales used for good pairs: the `ε` of the figure plus two fine scales.
pub const GOOD_SCALES: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
/// `N` values whose `ε = N⁻²` are used for bad pairs.
pub const BAD_NS: [u64; 4] = [100, 200, 300, 400];

fn sup_suite(opts: &SuiteOptions) -> Result<Report> {
    let (alpha, beta) = opts.pair.clone().unwrap_or((rational(1, 2), rational(1, 6)));
    let class = classify_pair(&alpha, &beta)?;
    let pair = TorusPair::new(alpha, beta);
    let (a, b) = pair.to_f64();
    let (scan, expected) = if let (true, Some(m)) = (class.good, class.m) {
        let c = theta3_constant(m)?.constant;
        (
            sup_scan(a, b, &GOOD_SCALES, (0.0, 4.0), opts.samples, Some(c))?,
            Verdict::Bounded,
        )
    } else {
        let scales: Vec<f64> = BAD_NS.iter().map(|&n| 1.0 / (n * n) as f64).collect();
        (
            sup_scan(a, b, &scales, (0.2, 0.23), opts.samples, None)?,
            Verdict::Growing,
        )
    };
    let pass = scan.verdict == expected;
    Ok(Report::new(
        "sup",
        vec![item(
            &format!("sup scan {pair}"),
            json!({"pair": pair.to_string(), "scales": scan.scales, "x_range": [scan.x_range.0, scan.x_range.1], "samples": scan.samples}),
            json!({"sups": scan.sup_values, "verdict": scan.verdict}),
            json!({"bound": scan.bound, "expected": expected}),
            pass,
        )],
    ))
}

/// `N` grid of the growth-exponent fits.
pub const GROWTH_NS: [u64; 5] = [64, 128, 256, 512, 1024];
pub const GROWTH_SAMPLES: usize = 8192;

fn growth_suite(opts: &SuiteOptions) -> Result<Report> {
    let _ = opts;
    let good = growth_exponent_scan(0.5, 0.5, &GROWTH_NS, (0.0, 1.0), GROWTH_SAMPLES)?;
    let bad = growth_exponent_scan(0.0, 0.0, &GROWTH_NS, (0.0, 1.0), GROWTH_SAMPLES)?;
    Ok(Report::new(
        "growth",
        vec![
            item(
                "good pair (1/2, 1/2)",
                json!({"n": GROWTH_NS, "x_range": [0.0, 1.0], "samples": GROWTH_SAMPLES}),
                json!({"slope": good.slope, "sups": good.sups}),
                json!({"max_slope": GOOD_SLOPE_MAX}),
                good.slope <= GOOD_SLOPE_MAX,
            ),
            item(
                "bad pair (0, 0)",
                json!({"n": GROWTH_NS, "x_range": [0.0, 1.0], "samples": GROWTH_SAMPLES}),
                json!({"slope": bad.slope, "sups": bad.sups}),
                json!({"min_slope": BAD_SLOPE_MIN}),
                bad.slope >= BAD_SLOPE_MIN,
            ),
        ],
    ))
}
