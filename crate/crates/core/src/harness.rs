//! Seeded verification suites for the gamma identities and the properties of
//! `B(r, α)`.
//!
//! Each registered property reduces its check to a single non-negative
//! deviation per sample and passes iff the worst deviation is within the
//! tolerance. Random streams are ChaCha20 seeded with the SHA-256 digest of
//! `(seed, property name)`, so a property's samples do not depend on which
//! other properties run or in what order.

use std::f64::consts::{E, PI};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::asymptotics::{self, AsymptoticPoint, DEFAULT_R_GRID};
use crate::binom::{self, Backend, BinomArgs};
use crate::error::{Error, Result};
use crate::fmt::{decimal, hex};
use crate::gamma::{self, GammaArg, TruncationOrder};

/// Bumped whenever a property's sampling or metric changes.
pub const REGISTRY_VERSION: u32 = 1;

/// Margin from the open-interval boundaries for random `(r, α)`.
pub const DOMAIN_MARGIN: f64 = 1e-3;

/// Required relative step of strictly monotone grids.
pub const STRICT_MARGIN: f64 = 1e-11;

/// The functions under test. [`Kernels::default`] is the library; tests
/// swap entries to check that a property actually catches a fault.
#[derive(Clone, Copy)]
pub struct Kernels {
    pub gamma: fn(f64) -> Result<f64>,
    pub gamma_euler_gauss: fn(f64, u64) -> Result<f64>,
    pub binom: fn(f64, f64) -> Result<f64>,
    /// `exp(ln_binom)`, the ln Γ route without the integer shortcut.
    pub binom_via_ln_gamma: fn(f64, f64) -> Result<f64>,
    pub binom_closed_form: fn(u64, f64) -> Result<f64>,
    pub sinc_pi: fn(f64) -> f64,
    pub asymptotic_ratio: fn(f64, f64) -> Result<f64>,
}

fn lib_gamma(x: f64) -> Result<f64> {
    gamma::gamma(GammaArg::new(x)?)
}

fn lib_gamma_euler_gauss(x: f64, n: u64) -> Result<f64> {
    gamma::gamma_euler_gauss(GammaArg::new(x)?, TruncationOrder::new(n)?)
}

fn lib_binom(r: f64, alpha: f64) -> Result<f64> {
    Ok(binom::binom(BinomArgs::new(r, alpha)?, Backend::StirlingLogGamma)?.value)
}

fn lib_binom_via_ln_gamma(r: f64, alpha: f64) -> Result<f64> {
    Ok(binom::ln_binom(BinomArgs::new(r, alpha)?)?.exp())
}

fn lib_asymptotic_ratio(r: f64, alpha: f64) -> Result<f64> {
    asymptotics::asymptotic_ratio(AsymptoticPoint::new(r, alpha)?)
}

impl Default for Kernels {
    fn default() -> Self {
        Kernels {
            gamma: lib_gamma,
            gamma_euler_gauss: lib_gamma_euler_gauss,
            binom: lib_binom,
            binom_via_ln_gamma: lib_binom_via_ln_gamma,
            binom_closed_form: binom::binom_closed_form,
            sinc_pi: gamma::sinc_pi,
            asymptotic_ratio: lib_asymptotic_ratio,
        }
    }
}

/// Registry entry: a property name with its default sampling and tolerance.
#[derive(Debug, Clone, Copy)]
pub struct PropertyInfo {
    pub name: &'static str,
    pub default_samples: u64,
    pub default_tolerance: f64,
    /// Grid properties always run their full grid.
    pub grid: bool,
    pub summary: &'static str,
}

const fn info(
    name: &'static str,
    default_samples: u64,
    default_tolerance: f64,
    grid: bool,
    summary: &'static str,
) -> PropertyInfo {
    PropertyInfo {
        name,
        default_samples,
        default_tolerance,
        grid,
        summary,
    }
}

/// Every property, in report order.
pub const REGISTRY: &[PropertyInfo] = &[
    info(
        "gamma.factorial_anchor",
        21,
        1e-13,
        true,
        "Γ(1+n) = n! for 0 ≤ n ≤ 20, relative to the exact integer",
    ),
    info(
        "gamma.reduction",
        10_000,
        1e-12,
        false,
        "|Γ(1+x) − xΓ(x)| / Γ(1+x) for x in (0.1, 50)",
    ),
    info(
        "gamma.reflection",
        10_000,
        1e-10,
        false,
        "|Γ(x)Γ(1−x) − π/sin πx| / |π/sin πx| for x in (−5, 5), 1e−3 from integers",
    ),
    info(
        "gamma.euler_gauss_rate",
        9,
        0.075,
        true,
        "|e(10n)/e(n) − 0.125| for x in {0.5, 1.5, π}, n in {1e3, 1e4, 1e5}",
    ),
    info(
        "gamma.euler_gauss_unit",
        1_000,
        f64::MIN_POSITIVE,
        false,
        "|Γ_n(1) − 1| for n log-uniform in [1, 1e7]; must vanish",
    ),
    info(
        "thm1.i.unit_ends",
        10_000,
        1e-13,
        false,
        "B(r,α) > 0 and max(|B(r,0) − 1|, |B(r,r) − 1|) on random args",
    ),
    info(
        "thm1.ii.sinc_slice",
        1_001,
        1e-12,
        true,
        "|B(0,α) − sinc πα| / |sinc πα| on a 1000-point grid in (−1,1), plus α = 0",
    ),
    info(
        "thm1.iii.symmetry",
        10_000,
        1e-12,
        false,
        "|B(r,r−α) − B(r,α)| / B(r,α) on random args",
    ),
    info(
        "thm1.iv.pascal",
        10_000,
        1e-10,
        false,
        "relative Pascal residual for r in (0.1, 60), α in (0.01, r − 0.01)",
    ),
    info(
        "thm1.v.unimodality",
        0,
        1.0 - STRICT_MARGIN,
        true,
        "largest ratio of consecutive values toward the peak r/2, r in {0.5, 1, e, 10, 100}",
    ),
    info(
        "thm1.vi.monotone_r",
        0,
        1.0 - STRICT_MARGIN,
        true,
        "largest ratio of consecutive values along r grids, α in {0.5, 1.7, 10, −0.5, −0.1}",
    ),
    info(
        "thm1.vi.alpha_zero",
        0,
        1e-13,
        true,
        "|B(r,0) − 1| along an r grid in (−1, 100]",
    ),
    info(
        "prop2.equivalence",
        4_200,
        1e-10,
        true,
        "closed form vs ln Γ backend, n in 0..=20, 200 α per n away from integers",
    ),
    info(
        "prop2.factorial_branch",
        231,
        1e-13,
        true,
        "closed form and ln Γ backend vs exact C(n,m), 0 ≤ m ≤ n ≤ 20",
    ),
    info(
        "prop1.convergence",
        20,
        1e-4,
        true,
        "|ratio − 1| at r = 1e5, ∞ unless strictly decreasing over r in {1e2..1e5}",
    ),
    info(
        "cor1.integer_convergence",
        20,
        1e-4,
        true,
        "prop1.convergence through the integer-only scan",
    ),
    info(
        "exact.integer_crosscheck",
        1_891,
        1e-12,
        true,
        "|B(n,m) / C(n,m) − 1| for 0 ≤ m ≤ n ≤ 60, direct and through exp(ln B)",
    ),
];

pub fn lookup(name: &str) -> Result<&'static PropertyInfo> {
    REGISTRY
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProperty(name.to_string()))
}

/// One property run request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCase {
    pub name: String,
    pub sample_count: u64,
    pub tolerance: f64,
    pub seed: u64,
}

impl PropertyCase {
    pub fn new(name: &str, sample_count: u64, tolerance: f64, seed: u64) -> Result<Self> {
        lookup(name)?;
        if sample_count == 0 {
            return Err(Error::InvalidInput(
                "sample_count must be at least 1".into(),
            ));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(PropertyCase {
            name: name.to_string(),
            sample_count,
            tolerance,
            seed,
        })
    }

    /// The registry defaults for `name`.
    pub fn default_for(name: &str, seed: u64) -> Result<Self> {
        let p = lookup(name)?;
        Ok(PropertyCase {
            name: p.name.to_string(),
            sample_count: p.default_samples.max(1),
            tolerance: p.default_tolerance,
            seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub case: PropertyCase,
    pub passed: bool,
    pub worst_deviation: f64,
    /// Arguments at the worst deviation, floats in hex-significand form.
    pub worst_input: String,
    /// Number of checks actually evaluated (the grid size for grid properties).
    pub evaluated: u64,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct Record<'a> {
    name: &'a str,
    passed: bool,
    #[serde(serialize_with = "finite_or_text")]
    worst_deviation: f64,
    worst_input: &'a str,
    elapsed_ms: Option<f64>,
    #[serde(serialize_with = "finite_or_text")]
    tolerance: f64,
    sample_count: u64,
    seed: u64,
}

fn finite_or_text<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&decimal(*x))
    }
}

impl PropertyReport {
    /// One JSON object. `elapsed_ms` is `null` unless `timings` is set, which
    /// keeps the default output byte-deterministic.
    pub fn to_json_line(&self, timings: bool) -> String {
        let record = Record {
            name: &self.case.name,
            passed: self.passed,
            worst_deviation: self.worst_deviation,
            worst_input: &self.worst_input,
            elapsed_ms: timings.then_some(self.elapsed.as_secs_f64() * 1e3),
            tolerance: self.case.tolerance,
            sample_count: self.evaluated,
            seed: self.case.seed,
        };
        serde_json::to_string(&record).expect("record serializes")
    }

    pub fn to_text_line(&self, timings: bool) -> String {
        let mut line = format!(
            "{} {:<26} n={:<6} worst={:<24} tol={:<22} at {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.case.name,
            self.evaluated,
            decimal(self.worst_deviation),
            decimal(self.case.tolerance),
            self.worst_input,
        );
        if timings {
            line.push_str(&format!(" ({:.1} ms)", self.elapsed.as_secs_f64() * 1e3));
        }
        line
    }
}

/// Tracks the largest deviation and the input that produced it. NaN counts
/// as infinite.
struct Worst {
    deviation: f64,
    input: String,
    count: u64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            deviation: 0.0,
            input: String::from("-"),
            count: 0,
        }
    }

    fn observe(&mut self, deviation: f64, input: impl FnOnce() -> String) {
        self.count += 1;
        let d = if deviation.is_nan() {
            f64::INFINITY
        } else {
            deviation
        };
        if d > self.deviation || self.count == 1 {
            self.deviation = d;
            self.input = input();
        }
    }

    /// A failed evaluation counts as an infinite deviation.
    fn observe_result(&mut self, deviation: Result<f64>, input: impl FnOnce() -> String) {
        match deviation {
            Ok(d) => self.observe(d, input),
            Err(e) => self.observe(f64::INFINITY, || format!("{} ({e})", input())),
        }
    }
}

fn rel_dev(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn args_text(pairs: &[(&str, f64)]) -> String {
    let inner: Vec<String> = pairs
        .iter()
        .map(|(k, v)| format!("{k}={}", hex(*v)))
        .collect();
    format!("({})", inner.join(", "))
}

/// Deterministic random source for one property.
pub struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(seed: u64, name: &str) -> Self {
        let mut h = Sha256::new();
        h.update(b"realbinom.harness");
        h.update(seed.to_le_bytes());
        h.update(name.as_bytes());
        Sampler {
            rng: ChaCha20Rng::from_seed(h.finalize().into()),
        }
    }

    /// Uniform in the open interval (lo, hi).
    pub fn open(&mut self, lo: f64, hi: f64) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            let x = lo + (hi - lo) * u;
            if x > lo && x < hi {
                return x;
            }
        }
    }

    /// Valid `(r, α)`: `1 + r` log-uniform on `(δ, 101]`, α uniform on
    /// `(−1 + δ, r + 1 − δ)`.
    pub fn binom_args(&mut self) -> (f64, f64) {
        let (lo, hi) = (DOMAIN_MARGIN.ln(), 101f64.ln());
        let u: f64 = self.rng.random();
        let r = (hi - (hi - lo) * u).exp() - 1.0;
        let r = r.clamp(-1.0 + DOMAIN_MARGIN, 100.0);
        let alpha = self.open(-1.0 + DOMAIN_MARGIN, r + 1.0 - DOMAIN_MARGIN);
        (r, alpha)
    }

    pub fn log_uniform_int(&mut self, lo: u64, hi: u64) -> u64 {
        let (a, b) = ((lo as f64).ln(), ((hi + 1) as f64).ln());
        let u: f64 = self.rng.random();
        ((a + (b - a) * u).exp().floor() as u64).clamp(lo, hi)
    }
}

/// Runs one property.
pub fn run_property(case: &PropertyCase) -> Result<PropertyReport> {
    run_property_with(case, &Kernels::default())
}

pub fn run_property_with(case: &PropertyCase, k: &Kernels) -> Result<PropertyReport> {
    lookup(&case.name)?;
    let start = Instant::now();
    let mut rng = Sampler::new(case.seed, &case.name);
    let n = case.sample_count;
    let mut w = Worst::new();
    match case.name.as_str() {
        "gamma.factorial_anchor" => factorial_anchor(k, &mut w),
        "gamma.reduction" => reduction(k, &mut rng, n, &mut w),
        "gamma.reflection" => reflection(k, &mut rng, n, &mut w),
        "gamma.euler_gauss_rate" => euler_gauss_rate(k, &mut w),
        "gamma.euler_gauss_unit" => euler_gauss_unit(k, &mut rng, n, &mut w),
        "thm1.i.unit_ends" => unit_ends(k, &mut rng, n, &mut w),
        "thm1.ii.sinc_slice" => sinc_slice(k, &mut w),
        "thm1.iii.symmetry" => symmetry(k, &mut rng, n, &mut w),
        "thm1.iv.pascal" => pascal(k, &mut rng, n, &mut w),
        "thm1.v.unimodality" => unimodality(k, &mut w),
        "thm1.vi.monotone_r" => monotone_r(k, &mut w),
        "thm1.vi.alpha_zero" => alpha_zero(k, &mut w),
        "prop2.equivalence" => prop2_equivalence(k, &mut w),
        "prop2.factorial_branch" => prop2_factorial(k, &mut w),
        "prop1.convergence" => asymptotic_convergence(k, false, &mut w),
        "cor1.integer_convergence" => asymptotic_convergence(k, true, &mut w),
        "exact.integer_crosscheck" => integer_crosscheck(k, &mut w),
        other => return Err(Error::UnknownProperty(other.to_string())),
    }
    Ok(PropertyReport {
        passed: w.deviation <= case.tolerance,
        worst_deviation: w.deviation,
        worst_input: w.input,
        evaluated: w.count,
        elapsed: start.elapsed(),
        case: case.clone(),
    })
}

/// Every registered property with its defaults, in registry order.
pub fn run_all(seed: u64) -> Vec<PropertyReport> {
    run_matching("", seed).expect("empty prefix matches the registry")
}

/// Properties whose name starts with `prefix`; an empty match is an error.
pub fn run_matching(prefix: &str, seed: u64) -> Result<Vec<PropertyReport>> {
    let cases: Vec<PropertyCase> = REGISTRY
        .iter()
        .filter(|p| p.name.starts_with(prefix))
        .map(|p| PropertyCase::default_for(p.name, seed))
        .collect::<Result<_>>()?;
    if cases.is_empty() {
        return Err(Error::UnknownProperty(format!("{prefix}*")));
    }
    cases.par_iter().map(run_property).collect()
}

fn exact_f64(n: i64, m: i64) -> f64 {
    binom::binom_exact_integer(n, m)
        .expect("valid integer pair")
        .to_f64()
        .expect("finite")
}

// ---- gamma identities -------------------------------------------------

fn factorial_anchor(k: &Kernels, w: &mut Worst) {
    let mut fact: u128 = 1;
    for n in 0..=20u32 {
        if n > 0 {
            fact *= n as u128;
        }
        let x = 1.0 + n as f64;
        w.observe_result((k.gamma)(x).map(|g| rel_dev(g, fact as f64)), || {
            args_text(&[("x", x)])
        });
    }
}

fn reduction(k: &Kernels, rng: &mut Sampler, n: u64, w: &mut Worst) {
    for _ in 0..n {
        let x = rng.open(0.1, 50.0);
        let dev = (|| {
            let up = (k.gamma)(1.0 + x)?;
            Ok(((up - x * (k.gamma)(x)?) / up).abs())
        })();
        w.observe_result(dev, || args_text(&[("x", x)]));
    }
}

fn reflection(k: &Kernels, rng: &mut Sampler, n: u64, w: &mut Worst) {
    let mut done = 0;
    while done < n {
        let x = rng.open(-5.0, 5.0);
        if (x - x.round()).abs() < 1e-3 {
            continue;
        }
        done += 1;
        let want = PI / (PI * x).sin();
        let dev = (|| Ok(((k.gamma)(x)? * (k.gamma)(1.0 - x)? - want).abs() / want.abs()))();
        w.observe_result(dev, || args_text(&[("x", x)]));
    }
}

fn euler_gauss_rate(k: &Kernels, w: &mut Worst) {
    for x in [0.5, 1.5, PI] {
        for n in [1_000u64, 10_000, 100_000] {
            let dev = (|| {
                let exact = (k.gamma)(x)?;
                let e =
                    |m: u64| -> Result<f64> { Ok(((k.gamma_euler_gauss)(x, m)? - exact).abs()) };
                Ok((e(10 * n)? / e(n)? - 0.125).abs())
            })();
            w.observe_result(dev, || format!("(x={}, n={n})", hex(x)));
        }
    }
}

fn euler_gauss_unit(k: &Kernels, rng: &mut Sampler, n: u64, w: &mut Worst) {
    for _ in 0..n {
        let order = rng.log_uniform_int(1, 10_000_000);
        w.observe_result(
            (k.gamma_euler_gauss)(1.0, order).map(|v| (v - 1.0).abs()),
            || format!("(x=0x1p+0, n={order})"),
        );
    }
}

// ---- properties of B(r, α) ---------------------------------------------

fn unit_ends(k: &Kernels, rng: &mut Sampler, n: u64, w: &mut Worst) {
    for _ in 0..n {
        let (r, a) = rng.binom_args();
        let dev = (|| {
            let v = (k.binom)(r, a)?;
            if !(v > 0.0 && v.is_finite()) {
                return Ok(f64::INFINITY);
            }
            let lo = ((k.binom)(r, 0.0)? - 1.0).abs();
            let hi = ((k.binom)(r, r)? - 1.0).abs();
            Ok(lo.max(hi))
        })();
        w.observe_result(dev, || args_text(&[("r", r), ("alpha", a)]));
    }
}

fn sinc_slice(k: &Kernels, w: &mut Worst) {
    w.observe_result((k.binom)(0.0, 0.0).map(|v| (v - 1.0).abs()), || {
        args_text(&[("r", 0.0), ("alpha", 0.0)])
    });
    for i in 0..1000 {
        let a = -1.0 + (i as f64 + 0.5) * (2.0 / 1000.0);
        let s = (k.sinc_pi)(a);
        w.observe_result((k.binom)(0.0, a).map(|v| rel_dev(v, s)), || {
            args_text(&[("r", 0.0), ("alpha", a)])
        });
    }
}

fn symmetry(k: &Kernels, rng: &mut Sampler, n: u64, w: &mut Worst) {
    for _ in 0..n {
        let (r, a) = rng.binom_args();
        let dev = (|| {
            let args = BinomArgs::new(r, a)?;
            let pair = binom::symmetry_pair(args);
            Ok(rel_dev((k.binom)(r, pair.alpha())?, (k.binom)(r, a)?))
        })();
        w.observe_result(dev, || args_text(&[("r", r), ("alpha", a)]));
    }
}

fn pascal(k: &Kernels, rng: &mut Sampler, n: u64, w: &mut Worst) {
    for _ in 0..n {
        let r = rng.open(0.1, 60.0);
        let a = rng.open(0.01, r - 0.01);
        let dev = (|| {
            let whole = (k.binom)(r, a)?;
            Ok(((whole - (k.binom)(r - 1.0, a - 1.0)? - (k.binom)(r - 1.0, a)?) / whole).abs())
        })();
        w.observe_result(dev, || args_text(&[("r", r), ("alpha", a)]));
    }
}

/// Feeds the consecutive-value ratio `smaller / larger` of a sequence that
/// must be strictly increasing (`increasing`) or decreasing; a ratio at or
/// above `1 − STRICT_MARGIN` breaks strictness with margin.
fn monotone_steps(
    values: &[(f64, Result<f64>)],
    increasing: bool,
    label: impl Fn(f64, f64) -> String,
    w: &mut Worst,
) {
    for pair in values.windows(2) {
        let (x0, ref v0) = pair[0];
        let (x1, ref v1) = pair[1];
        let dev = match (v0, v1) {
            (Ok(a), Ok(b)) => Ok(if increasing { a / b } else { b / a }),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        };
        w.observe_result(dev, || label(x0, x1));
    }
}

pub(crate) fn unimodality_grid(r: f64) -> (Vec<f64>, Vec<f64>) {
    let h = (1e-3f64).max(r * 1e-3);
    let peak = binom::peak_location(r);
    let mut up: Vec<f64> = (0..)
        .map(|i| peak - i as f64 * h)
        .take_while(|&a| a > -1.0 + 0.5 * h)
        .collect();
    up.reverse();
    let down: Vec<f64> = (0..)
        .map(|i| peak + i as f64 * h)
        .take_while(|&a| a < r + 1.0 - 0.5 * h)
        .collect();
    (up, down)
}

fn unimodality(k: &Kernels, w: &mut Worst) {
    for r in [0.5, 1.0, E, 10.0, 100.0] {
        let (up, down) = unimodality_grid(r);
        let eval = |grid: &[f64]| -> Vec<(f64, Result<f64>)> {
            grid.iter().map(|&a| (a, (k.binom)(r, a))).collect()
        };
        let label =
            |a0: f64, a1: f64| format!("(r={}, alpha={}, alpha_next={})", hex(r), hex(a0), hex(a1));
        monotone_steps(&eval(&up), true, label, w);
        monotone_steps(&eval(&down), false, label, w);
    }
}

/// `r` grid with spacing 0.01 starting just above `max(α, α − 1, −1)`.
pub(crate) fn r_grid(alpha: f64) -> Vec<f64> {
    let start = alpha.max(-1.0) + 0.01;
    (0..5_000).map(|i| start + 0.01 * i as f64).collect()
}

fn monotone_r(k: &Kernels, w: &mut Worst) {
    for alpha in [0.5, 1.7, 10.0, -0.5, -0.1] {
        let values: Vec<(f64, Result<f64>)> = r_grid(alpha)
            .into_iter()
            .map(|r| (r, (k.binom)(r, alpha)))
            .collect();
        let label =
            |r0: f64, r1: f64| format!("(alpha={}, r={}, r_next={})", hex(alpha), hex(r0), hex(r1));
        monotone_steps(&values, alpha > 0.0, label, w);
    }
}

fn alpha_zero(k: &Kernels, w: &mut Worst) {
    for i in 0..10_100 {
        let r = -0.99 + 0.01 * i as f64;
        w.observe_result((k.binom)(r, 0.0).map(|v| (v - 1.0).abs()), || {
            args_text(&[("r", r), ("alpha", 0.0)])
        });
    }
}

/// 200 points per `n` spread over `(−1, n + 1)`, each at least 1e−4 from
/// every integer.
pub(crate) fn prop2_alpha_grid(n: u64) -> Vec<f64> {
    let width = n as f64 + 2.0;
    (0..200)
        .map(|j| {
            let a = -1.0 + (j as f64 + 0.5) * width / 200.0;
            let d = a - a.round();
            if d.abs() < 1e-4 {
                a.round() + 1e-4f64.copysign(d)
            } else {
                a
            }
        })
        .collect()
}

fn prop2_equivalence(k: &Kernels, w: &mut Worst) {
    for n in 0..=20u64 {
        for a in prop2_alpha_grid(n) {
            let dev = (|| {
                Ok(rel_dev(
                    (k.binom_closed_form)(n, a)?,
                    (k.binom)(n as f64, a)?,
                ))
            })();
            w.observe_result(dev, || args_text(&[("n", n as f64), ("alpha", a)]));
        }
    }
}

fn prop2_factorial(k: &Kernels, w: &mut Worst) {
    for n in 0..=20i64 {
        for m in 0..=n {
            let exact = exact_f64(n, m);
            let dev = (|| {
                let cf = (k.binom_closed_form)(n as u64, m as f64)?;
                let eq5 = (k.binom)(n as f64, m as f64)?;
                Ok(rel_dev(cf, exact).max(rel_dev(eq5, exact)))
            })();
            w.observe_result(dev, || format!("(n={n}, m={m})"));
        }
    }
}

fn asymptotic_convergence(k: &Kernels, integer_only: bool, w: &mut Worst) {
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let rows: Result<Vec<(f64, f64)>> = if integer_only {
            asymptotics::convergence_scan(alpha, &DEFAULT_R_GRID, true).and_then(|rep| {
                rep.rows
                    .iter()
                    .map(|row| Ok((row.r, ((k.asymptotic_ratio)(row.r, alpha)? - 1.0).abs())))
                    .collect()
            })
        } else {
            DEFAULT_R_GRID
                .iter()
                .map(|&r| Ok((r, ((k.asymptotic_ratio)(r, alpha)? - 1.0).abs())))
                .collect()
        };
        let rows = match rows {
            Ok(rows) => rows,
            Err(e) => {
                w.observe(f64::INFINITY, || format!("(alpha={}) {e}", hex(alpha)));
                continue;
            }
        };
        let decreasing = rows.windows(2).all(|p| p[1].1 < p[0].1);
        let (r, last) = *rows.last().expect("non-empty grid");
        // one check per row; only the final abs_dev is compared to the bound
        w.count += rows.len() as u64 - 1;
        if decreasing {
            w.observe(last, || args_text(&[("r", r), ("alpha", alpha)]));
        } else {
            w.observe(f64::INFINITY, || {
                format!("(alpha={}) abs_dev not strictly decreasing", hex(alpha))
            });
        }
    }
}

fn integer_crosscheck(k: &Kernels, w: &mut Worst) {
    for n in 0..=60i64 {
        for m in 0..=n {
            let exact = exact_f64(n, m);
            w.observe_result(
                (k.binom)(n as f64, m as f64).map(|v| rel_dev(v, exact)),
                || format!("(n={n}, m={m})"),
            );
            w.observe_result(
                (k.binom_via_ln_gamma)(n as f64, m as f64).map(|v| rel_dev(v, exact)),
                || format!("(n={n}, m={m}, route=ln-gamma)"),
            );
        }
    }
}
