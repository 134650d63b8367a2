//! The real binomial coefficient `B(r, α)` and its structural identities.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::gamma::{
    ln_gamma, ln_gamma_euler_gauss, sin_pi, sinc_pi_with, GammaArg, TruncationOrder,
};

/// Static relative error floor of the log-gamma backend.
const STIRLING_ERR_FLOOR: f64 = 5e-13;

/// Largest `n` accepted by [`binom_exact_integer`].
pub const EXACT_INTEGER_MAX_N: i64 = 1000;

/// A pair `(r, α)` with `r > −1` and `−1 < α < r + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomArgs {
    r: f64,
    alpha: f64,
}

impl BinomArgs {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        if !r.is_finite() || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "arguments must be finite, got r = {r}, alpha = {alpha}"
            )));
        }
        if r <= -1.0 {
            return Err(Error::domain(format!("r = {r} violates r > -1")));
        }
        if alpha <= -1.0 {
            return Err(Error::domain(format!(
                "alpha = {alpha} violates alpha > -1"
            )));
        }
        if alpha >= r + 1.0 {
            return Err(Error::domain(format!(
                "alpha = {alpha} violates alpha < r + 1 = {}",
                r + 1.0
            )));
        }
        Ok(BinomArgs { r, alpha })
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The three gamma arguments `1 + r`, `1 + α`, `1 + (r − α)`.
    ///
    /// `r − α` is formed before adding 1 so that `α = r` yields exactly 1.
    #[inline]
    fn gamma_arguments(&self) -> [f64; 3] {
        [1.0 + self.r, 1.0 + self.alpha, 1.0 + (self.r - self.alpha)]
    }
}

/// Evaluation strategy for [`binom`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// ln Γ differences through the Stirling series.
    #[default]
    StirlingLogGamma,
    /// Ratio of truncated Euler-Gauss products; first-order accurate in 1/n.
    EulerGauss(TruncationOrder),
    /// Elementary closed form, integer `r` only.
    ClosedFormProp2,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::StirlingLogGamma => f.write_str("stirling-loggamma"),
            Backend::EulerGauss(n) => write!(f, "euler-gauss:{}", n.get()),
            Backend::ClosedFormProp2 => f.write_str("closed-form-prop2"),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stirling-loggamma" | "stirling" => Ok(Backend::StirlingLogGamma),
            "closed-form-prop2" | "closed-form" => Ok(Backend::ClosedFormProp2),
            _ => {
                let order = s
                    .strip_prefix("euler-gauss:")
                    .or_else(|| {
                        s.strip_prefix("euler-gauss(")
                            .and_then(|t| t.strip_suffix(')'))
                    })
                    .ok_or_else(|| Error::InvalidInput(format!("unknown backend `{s}`")))?;
                let n: u64 = order.parse().map_err(|_| {
                    Error::InvalidInput(format!("bad euler-gauss truncation order `{order}`"))
                })?;
                TruncationOrder::new(n)
                    .map(Backend::EulerGauss)
                    .map_err(|_| Error::InvalidInput("euler-gauss order must be >= 1".into()))
            }
        }
    }
}

/// One evaluation of `B(r, α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub log_value: f64,
    pub backend: Backend,
    /// Conservative bound on the relative error of `value`.
    pub err_estimate: f64,
}

fn from_log(log_value: f64, backend: Backend, err_estimate: f64) -> Result<EvalResult> {
    let value = log_value.exp();
    if value.is_infinite() {
        return Err(Error::Overflow { log_value });
    }
    if value == 0.0 {
        return Err(Error::Underflow { log_value });
    }
    Ok(EvalResult {
        value,
        log_value,
        backend,
        err_estimate,
    })
}

/// `B(r, α) = Γ(1 + r) / (Γ(1 + α) Γ(1 + r − α))` with the chosen backend.
///
/// The log value is always computed first; a value outside the f64 range is
/// reported as [`Error::Overflow`] / [`Error::Underflow`] carrying the log.
pub fn binom(args: BinomArgs, backend: Backend) -> Result<EvalResult> {
    binom_with(args, backend, &Tolerances::DEFAULT)
}

fn ln_gamma_terms(args: &BinomArgs) -> Result<(f64, f64, f64)> {
    let [top, lo_a, lo_b] = args.gamma_arguments();
    Ok((ln_gamma(top)?, ln_gamma(lo_a)?, ln_gamma(lo_b)?))
}

/// `ln B(r, α)` through ln Γ; never overflows for finite arguments.
pub fn ln_binom(args: BinomArgs) -> Result<f64> {
    let (lt, la, lb) = ln_gamma_terms(&args)?;
    Ok(lt - la - lb)
}

pub fn binom_with(args: BinomArgs, backend: Backend, tol: &Tolerances) -> Result<EvalResult> {
    let [top, lo_a, lo_b] = args.gamma_arguments();
    match backend {
        Backend::StirlingLogGamma => {
            let (r, alpha) = (args.r(), args.alpha());
            if r.fract() == 0.0 && alpha.fract() == 0.0 && r <= EXACT_INTEGER_MAX_N as f64 {
                // Both non-negative integers here: the nearest f64 to C(r, α).
                let value = integer_binom_f64(r as u64, alpha as u64);
                return Ok(EvalResult {
                    value,
                    log_value: value.ln(),
                    backend,
                    err_estimate: f64::EPSILON / 2.0,
                });
            }
            let (lt, la, lb) = ln_gamma_terms(&args)?;
            let log_value = lt - la - lb;
            let err = STIRLING_ERR_FLOOR.max(4.0 * f64::EPSILON * (lt.abs() + la.abs() + lb.abs()));
            from_log(log_value, backend, err)
        }
        Backend::EulerGauss(n) => {
            let ln_eg = |x: f64| -> Result<f64> {
                Ok(ln_gamma_euler_gauss(GammaArg::with_tolerances(x, tol)?, n).ln_abs)
            };
            let (lt, la, lb) = (ln_eg(top)?, ln_eg(lo_a)?, ln_eg(lo_b)?);
            let log_value = lt - la - lb;
            // Γ_n(x) / Γ(x) = 1 − x(x − 1)/(2n) + O(1/n²), doubled for safety.
            let truncation: f64 = [top, lo_a, lo_b]
                .iter()
                .map(|x| (x * (x - 1.0)).abs())
                .sum::<f64>()
                / n.get() as f64;
            let rounding = 4.0 * f64::EPSILON * (lt.abs() + la.abs() + lb.abs());
            from_log(
                log_value,
                backend,
                truncation + rounding + STIRLING_ERR_FLOOR,
            )
        }
        Backend::ClosedFormProp2 => {
            let r = args.r();
            let n = r.round();
            if n < 0.0 || (r - n).abs() > tol.integer_snap {
                return Err(Error::BackendMismatch {
                    backend: backend.to_string(),
                    r,
                });
            }
            let (value, err) = closed_form(n as u64, args.alpha(), tol)?;
            Ok(EvalResult {
                value,
                log_value: value.ln(),
                backend,
                err_estimate: err,
            })
        }
    }
}

/// `B(n, α)` for integer `n ≥ 0` through elementary functions:
///
/// * `sin πα / (πα)` when `n = 0`, `α ≠ 0`;
/// * `n! / ((n − α)(n − 1 − α) ⋯ (1 − α)) · sin πα / (πα)` when `n ≥ 1` and
///   α is not one of `0, 1, …, n`;
/// * `n! / (α! (n − α)!)` when α is one of `0, 1, …, n`.
///
/// α within `integer_snap` of an integer in `0..=n` takes the last branch.
pub fn binom_closed_form(n: u64, alpha: f64) -> Result<f64> {
    closed_form(n, alpha, &Tolerances::DEFAULT).map(|(v, _)| v)
}

pub fn binom_closed_form_with(n: u64, alpha: f64, tol: &Tolerances) -> Result<f64> {
    closed_form(n, alpha, tol).map(|(v, _)| v)
}

fn closed_form(n: u64, alpha: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    let nf = n as f64;
    if !alpha.is_finite() || alpha <= -1.0 || alpha >= nf + 1.0 {
        return Err(Error::domain(format!(
            "alpha = {alpha} violates -1 < alpha < n + 1 = {}",
            nf + 1.0
        )));
    }
    let nearest = alpha.round();
    let dist = (alpha - nearest).abs();
    if dist < tol.integer_snap && nearest >= 0.0 && nearest <= nf {
        let m = nearest as u64;
        return Ok((integer_binom_f64(n, m), 2.0 * f64::EPSILON));
    }

    let sinc = sinc_pi_with(alpha, tol);
    let (value, base_err) = if n == 0 {
        (sinc, 4.0 * f64::EPSILON)
    } else if n <= 170 {
        // n! / ∏_{j=1}^{n} (j − α) as a running product of j / (j − α)
        let prod: f64 = (1..=n)
            .map(|j| {
                let j = j as f64;
                j / (j - alpha)
            })
            .product();
        (prod * sinc, (2 * n + 4) as f64 * f64::EPSILON)
    } else {
        let mut ln_abs = 0.0;
        let mut negative = false;
        for j in 1..=n {
            let d = j as f64 - alpha;
            negative ^= d < 0.0;
            ln_abs += (j as f64 / d.abs()).ln();
        }
        ln_abs += sinc.abs().ln();
        negative ^= sinc < 0.0;
        let v = ln_abs.exp();
        if v.is_infinite() {
            return Err(Error::Overflow { log_value: ln_abs });
        }
        let err = 4.0 * f64::EPSILON * (n as f64).max(ln_abs.abs());
        (if negative { -v } else { v }, err)
    };

    let err = if dist < tol.conditioning_band {
        base_err / sin_pi(alpha).abs()
    } else {
        base_err
    };
    Ok((value, err))
}

/// `C(n, m)` as the nearest f64; exact big-integer arithmetic below the
/// [`EXACT_INTEGER_MAX_N`] limit, ln Γ beyond it.
fn integer_binom_f64(n: u64, m: u64) -> f64 {
    if n as i64 <= EXACT_INTEGER_MAX_N {
        let exact = binom_exact_integer(n as i64, m as i64).expect("0 <= m <= n checked");
        return exact.to_f64().unwrap_or(f64::INFINITY);
    }
    let nf = n as f64;
    let mf = m as f64;
    let ln = ln_gamma(nf + 1.0).unwrap()
        - ln_gamma(mf + 1.0).unwrap()
        - ln_gamma(nf - mf + 1.0).unwrap();
    ln.exp()
}

/// Exact `n! / (m! (n − m)!)` for `0 ≤ m ≤ n ≤ 1000`.
pub fn binom_exact_integer(n: i64, m: i64) -> Result<BigUint> {
    if !(0..=EXACT_INTEGER_MAX_N).contains(&n) {
        return Err(Error::domain(format!(
            "n = {n} violates 0 <= n <= {EXACT_INTEGER_MAX_N}"
        )));
    }
    if m < 0 || m > n {
        return Err(Error::domain(format!("m = {m} violates 0 <= m <= n = {n}")));
    }
    let k = m.min(n - m) as u64;
    let n = n as u64;
    // c_i = c_{i−1} (n − k + i) / i stays integral at every step.
    let mut c = BigUint::one();
    for i in 1..=k {
        c *= n - k + i;
        c /= i;
    }
    Ok(c)
}

/// The symmetric partner `(r, r − α)`; `B` takes the same value on both.
pub fn symmetry_pair(args: BinomArgs) -> BinomArgs {
    let r = args.r();
    let mut alpha = r - args.alpha();
    // Rounding of r − α can land one ulp outside the open interval.
    loop {
        match BinomArgs::new(r, alpha) {
            Ok(pair) => return pair,
            Err(_) if alpha <= -1.0 => alpha = alpha.next_up(),
            Err(_) => alpha = alpha.next_down(),
        }
    }
}

/// Relative Pascal residual `[B(r, α) − B(r − 1, α − 1) − B(r − 1, α)] / B(r, α)`
/// for `r > 0`, `0 < α < r`.
pub fn pascal_residual(r: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("r = {r} violates r > 0")));
    }
    if !(alpha > 0.0 && alpha < r) {
        return Err(Error::domain(format!(
            "alpha = {alpha} violates 0 < alpha < r = {r}"
        )));
    }
    let b = |r: f64, a: f64| -> Result<f64> {
        Ok(binom(BinomArgs::new(r, a)?, Backend::StirlingLogGamma)?.value)
    };
    let whole = b(r, alpha)?;
    let left = b(r - 1.0, alpha - 1.0)?;
    let right = b(r - 1.0, alpha)?;
    Ok((whole - left - right) / whole)
}

/// The maximiser `r / 2` of `α ↦ B(r, α)`.
pub fn peak_location(r: f64) -> f64 {
    r / 2.0
}
