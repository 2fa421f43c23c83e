#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use theta_bounds::bounds::{implied_constant_k1, theta3_constant, BetaFactor};
use theta_bounds::orbits::{classify_pair, gamma_theta_orbit, jordan_totient_j2, Rational, TorusPair};
use theta_bounds::theta::{kappa_gaussian_closed_form, theta3, weyl_sum, Cutoff, TruncationBudget};
use theta_bounds::verify::{run_suite, SuiteOptions, DEFAULT_SEED, SCAN_TOL};
use theta_bounds::Error;

const THREADS_ENV: &str = "THETA_BOUNDS_THREADS";

#[derive(Parser)]
#[command(
    name = "theta-bounds",
    version,
    about = "Theta sums, rational orbits and explicit uniform bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit of (α, β) under the theta group, with line flags, m₁ and classification.
    Orbit {
        #[arg(long, value_parser = parse_rational)]
        alpha: Rational,
        #[arg(long, value_parser = parse_rational)]
        beta: Rational,
        #[arg(long)]
        json: bool,
    },
    /// CSV of ϑ₃(α + βx; x + iε) over an x grid for each ε.
    Theta3 {
        /// Rational a/q or decimal.
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        beta: f64,
        /// Comma-separated list of ε values.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        /// Grid as lo:hi:n.
        #[arg(long, value_parser = parse_grid)]
        x: Grid,
        /// CSV output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw the (re, im) curves as SVG polylines.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Evaluates S_N^f(x; α, β).
    Weylsum {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        x: f64,
        /// Comma-separated rationals or decimals.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_real, allow_hyphen_values = true)]
        alpha_vec: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_real, allow_hyphen_values = true)]
        beta_vec: Vec<f64>,
        #[arg(long, value_enum, default_value = "gaussian")]
        cutoff: CutoffKind,
        /// Sharpness of the ramp cut-off.
        #[arg(long, default_value_t = 8)]
        ramp_n: u32,
    },
    /// Optimised implied constant and the J₂(m) pair count.
    Constant {
        #[arg(long)]
        m: u64,
        /// Explicit β for the k = 1 constant; the uniform factor 2^{η/2} if omitted.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_enum, default_value = "theta3")]
        target: Target,
        /// Upper end of the η range for the k = 1 target.
        #[arg(long, default_value_t = 4.0 / 3.0)]
        eta_max: f64,
    },
    /// Runs a verification suite and prints its report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 24)]
        qmax: u64,
        /// Pair for the sup suite as α,β.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(Rational, Rational)>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CutoffKind {
    Gaussian,
    Sharp,
    Ramp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    K1,
    Theta3,
}

#[derive(Clone, Copy, Debug)]
struct Grid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid {
    fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|j| self.lo + (self.hi - self.lo) * j as f64 / (self.n - 1) as f64)
            .collect()
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("'{s}' is not a rational a/q: {e}"))
}

fn parse_real(s: &str) -> Result<f64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{s}': {e}"));
    match s.split_once('/') {
        Some((p, q)) => Ok(num(p)? / num(q)?),
        None => num(s),
    }
}

fn parse_pair(s: &str) -> Result<(Rational, Rational), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("'{s}' should be alpha,beta"))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("'{s}' should be lo:hi:n"));
    };
    let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("n: {e}"))?;
    if n == 0 || !(hi >= lo) {
        return Err(format!("'{s}' needs n >= 1 and hi >= lo"));
    }
    Ok(Grid { lo, hi, n })
}

/// Failure of a subcommand: `usage` errors exit with 2, the rest with 1.
struct Failure {
    usage: bool,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let usage = matches!(
            e,
            Error::InvalidArgument(_) | Error::Domain(_) | Error::Dimension { .. }
        );
        Failure {
            usage,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            usage: false,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            usage: false,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { usage: true, message }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got '{v}'");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(if f.usage { 2 } else { 1 })
        }
    }
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Orbit { alpha, beta, json } => cmd_orbit(alpha, beta, json),
        Command::Theta3 {
            alpha,
            beta,
            eps,
            x,
            out,
            svg,
        } => cmd_theta3(alpha, beta, &eps, x, out, svg),
        Command::Weylsum {
            n,
            x,
            alpha_vec,
            beta_vec,
            cutoff,
            ramp_n,
        } => cmd_weylsum(n, x, &alpha_vec, &beta_vec, cutoff, ramp_n),
        Command::Constant {
            m,
            beta,
            target,
            eta_max,
        } => cmd_constant(m, beta, target, eta_max),
        Command::Verify {
            suite,
            seed,
            json,
            qmax,
            pair,
            trials,
            samples,
        } => {
            let opts = SuiteOptions {
                seed,
                q_max: qmax,
                trials,
                pair,
                samples,
            };
            cmd_verify(&suite, &opts, json)
        }
    }
}

fn cmd_orbit(alpha: Rational, beta: Rational, as_json: bool) -> Result<bool, Failure> {
    let seed = TorusPair::new(alpha.clone(), beta.clone());
    let orbit = gamma_theta_orbit(&seed)?;
    let class = classify_pair(&alpha, &beta)?;
    let names = |v: &[TorusPair]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    if as_json {
        let v = json!({
            "seed": seed.to_string(),
            "points": names(&orbit.points),
            "size": orbit.points.len(),
            "meets_u": !orbit.u.is_empty(),
            "meets_v": !orbit.v_plus.is_empty(),
            "m1": orbit.m1.to_string(),
            "good": class.good,
            "m": class.m,
            "reason": class.reason,
        });
        println!("{}", serde_json::to_string_pretty(&v).expect("serialisable"));
    } else {
        println!("seed: {seed}");
        println!("orbit size: {}", orbit.points.len());
        for p in &orbit.points {
            println!("  {p}");
        }
        println!("meets L_U: {}", !orbit.u.is_empty());
        println!("meets L_V: {}", !orbit.v_plus.is_empty());
        println!("m1 = {}", orbit.m1);
        let verdict = if class.good { "good" } else { "bad" };
        match (&class.m, &class.reason) {
            (Some(m), _) => println!("classification: {verdict} (m = {m})"),
            (None, Some(r)) => println!("classification: {verdict} ({r})"),
            (None, None) => println!("classification: {verdict}"),
        }
    }
    Ok(true)
}

struct Row {
    x: f64,
    eps: f64,
    value: Complex64,
}

fn cmd_theta3(
    a: f64,
    b: f64,
    eps: &[f64],
    grid: Grid,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
) -> Result<bool, Failure> {
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0)) {
        return Err(usage(format!("eps must be positive, got {e}")));
    }
    let xs = grid.points();
    let jobs: Vec<(f64, f64)> = eps.iter().flat_map(|&e| xs.iter().map(move |&x| (e, x))).collect();
    let rows: Result<Vec<Row>, Error> = jobs
        .par_iter()
        .map(|&(e, x)| {
            let value = theta3(Complex64::new(a + b * x, 0.0), Complex64::new(x, e), SCAN_TOL)?;
            Ok(Row { x, eps: e, value })
        })
        .collect();
    let rows = rows?;
    let sink: Box<dyn Write> = match &out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["x", "eps", "re", "im", "modulus", "scaled_modulus"])?;
    for r in &rows {
        let m = r.value.norm();
        w.write_record(&[
            r.x.to_string(),
            r.eps.to_string(),
            r.value.re.to_string(),
            r.value.im.to_string(),
            m.to_string(),
            (r.eps.powf(0.25) * m).to_string(),
        ])?;
    }
    w.flush()?;
    if let Some(p) = svg {
        std::fs::write(p, svg_curves(&rows, eps))?;
    }
    Ok(true)
}

/// One polyline of `ε^{1/4}(re, im)` per `ε`.
fn svg_curves(rows: &[Row], eps: &[f64]) -> String {
    const SIZE: f64 = 600.0;
    const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
    let scaled = |r: &Row| r.value * r.eps.powf(0.25);
    let extent = rows.iter().map(|r| scaled(r).norm()).fold(1e-12, f64::max) * 1.05;
    let map = |v: f64| SIZE / 2.0 * (1.0 + v / extent);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let mid = SIZE / 2.0;
    s.push_str(&format!(
        "<line x1=\"0\" y1=\"{mid}\" x2=\"{SIZE}\" y2=\"{mid}\" stroke=\"#bbb\"/>\n"
    ));
    s.push_str(&format!(
        "<line x1=\"{mid}\" y1=\"0\" x2=\"{mid}\" y2=\"{SIZE}\" stroke=\"#bbb\"/>\n"
    ));
    for (i, &e) in eps.iter().enumerate() {
        let pts: Vec<String> = rows
            .iter()
            .filter(|r| r.eps == e)
            .map(|r| {
                let v = scaled(r);
                format!("{:.3},{:.3}", map(v.re), SIZE - map(v.im))
            })
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"0.8\" data-eps=\"{e}\" points=\"{}\"/>\n",
            COLOURS[i % COLOURS.len()],
            pts.join(" ")
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_weylsum(n: u64, x: f64, alpha: &[f64], beta: &[f64], kind: CutoffKind, ramp_n: u32) -> Result<bool, Failure> {
    let k = alpha.len();
    let f = match kind {
        CutoffKind::Gaussian => Cutoff::gaussian(k),
        CutoffKind::Sharp => Cutoff::sharp_indicator(k),
        CutoffKind::Ramp => Cutoff::smooth_ramp(ramp_n, k)?,
    };
    let s = weyl_sum(&f, n, x, alpha, beta, &TruncationBudget::default())?;
    let norm = s.norm() / (n as f64).powf(k as f64 / 2.0);
    println!("S = {} {} {}i", s.re, if s.im < 0.0 { '-' } else { '+' }, s.im.abs());
    println!("|S| = {}", s.norm());
    println!("N^(-k/2)|S| = {norm}");
    Ok(true)
}

fn cmd_constant(m: u64, beta: Option<f64>, target: Target, eta_max: f64) -> Result<bool, Failure> {
    if m.is_multiple_of(2) {
        return Err(usage(format!("m must be odd, got {m}")));
    }
    let r = match target {
        Target::Theta3 => {
            if beta.is_some() {
                return Err(usage("--beta applies to --target k1 only".into()));
            }
            theta3_constant(m)?
        }
        Target::K1 => {
            let factor = beta.map_or(BetaFactor::Uniform, BetaFactor::Explicit);
            implied_constant_k1(m, factor, eta_max, &kappa_gaussian_closed_form)?
        }
    };
    println!("eta* = {:.6}", r.eta_star);
    println!("constant = {:.6}", r.constant);
    println!("local minimum certified: {}", r.local_min_certified);
    println!("J2({m}) = {}", jordan_totient_j2(m)?);
    Ok(true)
}

fn cmd_verify(suite: &str, opts: &SuiteOptions, as_json: bool) -> Result<bool, Failure> {
    let report = run_suite(suite, opts)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
    } else {
        for item in &report.items {
            println!(
                "{} {}: {}",
                if item.pass { "PASS" } else { "FAIL" },
                item.name,
                item.observed
            );
        }
        println!(
            "{}: {}/{} passed",
            report.suite, report.summary.passed, report.summary.total
        );
    }
    Ok(report.pass())
}
