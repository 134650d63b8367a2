//! Large-`r` behaviour of `B(r, rα)` for a fixed fraction `0 < α < 1`.
//!
//! ```text
//! B(r, rα) ~ (2π α (1 − α) r)^{−1/2} · α^{−αr} · (1 − α)^{−(1−α) r}
//! ```
//!
//! Everything is evaluated in log space: the right-hand side alone exceeds
//! the f64 range near `r ≈ 750` at `α = 1/2`.

use std::f64::consts::PI;

use crate::binom::{ln_binom, BinomArgs};
use crate::error::{Error, Result};

/// Geometric default grid for convergence scans.
pub const DEFAULT_R_GRID: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPoint {
    r: f64,
    alpha: f64,
}

impl AsymptoticPoint {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!(
                "alpha = {alpha} violates 0 < alpha < 1"
            )));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::domain(format!("r = {r} violates r > 0")));
        }
        Ok(AsymptoticPoint { r, alpha })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// A quantity known through its logarithm; `value` is `exp(log_value)` and
/// may be `+∞` when that exceeds the f64 range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub log_value: f64,
    pub value: f64,
}

/// Right-hand side of the asymptotic equality.
pub fn stirling_rhs(p: AsymptoticPoint) -> LogValue {
    let (r, a) = (p.r, p.alpha);
    let b = 1.0 - a;
    let log_value = -0.5 * (2.0 * PI * a * b * r).ln() - r * (a * a.ln() + b * b.ln());
    LogValue {
        log_value,
        value: log_value.exp(),
    }
}

/// `B(r, rα) / RHS(r, α)`; tends to 1 as `r → ∞`.
pub fn asymptotic_ratio(p: AsymptoticPoint) -> Result<f64> {
    let ln_lhs = ln_binom(BinomArgs::new(p.r, p.r * p.alpha)?)?;
    Ok((ln_lhs - stirling_rhs(p).log_value).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub r: f64,
    pub ratio: f64,
    /// `|ratio − 1|`
    pub abs_dev: f64,
}

/// Rows of a convergence scan, in strictly increasing `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub alpha: f64,
    /// Only integer `r` were admitted.
    pub integer_only: bool,
}

impl ConvergenceReport {
    /// `abs_dev` never increases from one row to the next.
    pub fn is_non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].abs_dev <= w[0].abs_dev)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].abs_dev < w[0].abs_dev)
    }

    pub fn last(&self) -> &ConvergenceRow {
        self.rows.last().expect("reports are never empty")
    }
}

/// Evaluates the asymptotic ratio along `r_values`.
pub fn convergence_scan(
    alpha: f64,
    r_values: &[f64],
    integer_only: bool,
) -> Result<ConvergenceReport> {
    if r_values.is_empty() {
        return Err(Error::InvalidInput("r_values must not be empty".into()));
    }
    if let Some(w) = r_values.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(format!(
            "r_values must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    if integer_only {
        if let Some(r) = r_values.iter().find(|r| r.fract() != 0.0) {
            return Err(Error::InvalidInput(format!(
                "integer-only scan got non-integer r = {r}"
            )));
        }
    }
    let rows = r_values
        .iter()
        .map(|&r| {
            let ratio = asymptotic_ratio(AsymptoticPoint::new(r, alpha)?)?;
            Ok(ConvergenceRow {
                r,
                ratio,
                abs_dev: (ratio - 1.0).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        rows,
        alpha,
        integer_only,
    })
}
