//! Γ and ln Γ on the real line minus the poles `{0, −1, −2, …}`.
//!
//! The production path is a Stirling series with upward argument shifting.
//! [`gamma_euler_gauss`] evaluates the finite Euler-Gauss product instead;
//! it converges only like `1/n` and exists for reference and convergence
//! studies.

use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::factorial_table::FACTORIAL;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Arguments below this are shifted upward before the asymptotic series is
/// applied.
const SHIFT_THRESHOLD: f64 = 10.0;

/// Largest x with Γ(x) representable as f64.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// `B_{2k} / (2k (2k − 1))` for k = 1..=8. At x ≥ 10 the first omitted term
/// is below 1e−19.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// A finite argument of Γ away from the poles.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GammaArg(f64);

impl GammaArg {
    pub fn new(x: f64) -> Result<Self> {
        Self::with_tolerances(x, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(x: f64, tol: &Tolerances) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain(format!("gamma argument {x} is not finite")));
        }
        let nearest = x.round();
        if nearest <= 0.0 && (x - nearest).abs() < tol.pole_exclusion {
            return Err(Error::Pole(x));
        }
        Ok(GammaArg(x))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for GammaArg {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        GammaArg::new(x)
    }
}

/// Truncation index `n ≥ 1` of the Euler-Gauss product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationOrder(u64);

impl TruncationOrder {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("truncation order must be at least 1"));
        }
        Ok(TruncationOrder(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for TruncationOrder {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        TruncationOrder::new(n)
    }
}

/// Positive integer `x ≤ 171` as an index into the factorial table.
#[inline]
fn small_positive_integer(x: f64) -> Option<usize> {
    ((1.0..=171.0).contains(&x) && x == x.floor()).then_some(x as usize)
}

/// Σ c_k / x^{2k−1}.
#[inline]
fn stirling_series(x: f64) -> f64 {
    let w = 1.0 / (x * x);
    let poly = STIRLING
        .iter()
        .rev()
        .fold(0.0f64, |acc, &c| acc.mul_add(w, c));
    poly / x
}

/// ln Γ(x) for x ≥ SHIFT_THRESHOLD.
#[inline]
fn ln_gamma_asymptotic(x: f64) -> f64 {
    (x - 0.5).mul_add(x.ln(), -x) + (HALF_LN_2PI + stirling_series(x))
}

/// Shifts `x` up past the threshold; returns the shifted argument and the
/// product of the skipped factors `x (x + 1) ⋯`.
#[inline]
fn shift_up(x: f64) -> (f64, f64) {
    let mut z = x;
    let mut prod = 1.0;
    while z < SHIFT_THRESHOLD {
        prod *= z;
        z += 1.0;
    }
    (z, prod)
}

/// Natural logarithm of Γ(x) for `x > 0`.
///
/// Absolute error is below `1e−13 + 4ε·|ln Γ(x)|`: the leading term is the
/// relative-error floor of Γ itself while ln Γ is small, the second is the
/// representation limit of the returned f64 for large x.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!(
            "ln_gamma requires a finite x > 0, got {x}"
        )));
    }
    if let Some(n) = small_positive_integer(x) {
        return Ok(FACTORIAL[n - 1].ln());
    }
    if x >= SHIFT_THRESHOLD {
        return Ok(ln_gamma_asymptotic(x));
    }
    let (z, prod) = shift_up(x);
    Ok(ln_gamma_asymptotic(z) - prod.ln())
}

/// Γ(x) for `10 ≤ x ≤ GAMMA_MAX_ARG`, evaluated as a product so the
/// relative error stays at a few ulps.
fn gamma_asymptotic(x: f64) -> f64 {
    let half_power = x.powf(0.5 * (x - 0.5));
    SQRT_2PI * half_power * (half_power * (-x).exp()) * stirling_series(x).exp()
}

fn gamma_positive(x: f64) -> Result<f64> {
    if let Some(n) = small_positive_integer(x) {
        return Ok(FACTORIAL[n - 1]);
    }
    let value = if x > GAMMA_MAX_ARG {
        f64::INFINITY
    } else if x >= SHIFT_THRESHOLD {
        gamma_asymptotic(x)
    } else {
        let (z, prod) = shift_up(x);
        gamma_asymptotic(z) / prod
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow {
            log_value: ln_gamma(x)?,
        })
    }
}

/// Γ(x) on ℝ minus the poles.
///
/// Negative arguments go through the reflection formula
/// `Γ(x) = π / (sin(πx) Γ(1 − x))`.
pub fn gamma(x: GammaArg) -> Result<f64> {
    let x = x.get();
    if x > 0.0 {
        return gamma_positive(x);
    }
    let s = sin_pi(x);
    let mirror = 1.0 - x;
    if mirror <= GAMMA_MAX_ARG {
        let value = PI / (s * gamma_positive(mirror)?);
        if value.is_finite() {
            return Ok(value);
        }
        let log_value = PI.ln() - s.abs().ln() - ln_gamma(mirror)?;
        return Err(Error::Overflow { log_value });
    }
    // Γ(1 − x) overflows; the quotient is tiny.
    let ln_abs = PI.ln() - s.abs().ln() - ln_gamma(mirror)?;
    Ok(ln_abs.exp().copysign(s))
}

/// `ln |Γ_n(x)|` together with the sign of `Γ_n(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub ln_abs: f64,
    pub negative: bool,
}

impl SignedLog {
    pub fn value(self) -> Result<f64> {
        let v = self.ln_abs.exp();
        if v.is_infinite() {
            return Err(Error::Overflow {
                log_value: self.ln_abs,
            });
        }
        Ok(if self.negative { -v } else { v })
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// The truncated Euler-Gauss product
/// `Γ_n(x) = (n − 1)! nˣ / (x (x + 1) ⋯ (x + n − 1))` in log space.
///
/// Rewritten as `nˣ / x · ∏_{k=1}^{n−1} k / (x + k)` so every factor is a
/// `ln(1 + x/k)` term of moderate size; the sign is the parity of the
/// negative factors. For positive integer x = m the product telescopes to
/// `(m − 1)! ∏_{j=0}^{m−1} n / (n + j)`, which is evaluated directly.
pub fn ln_gamma_euler_gauss(x: GammaArg, n: TruncationOrder) -> SignedLog {
    let x = x.get();
    let n = n.get();
    let nf = n as f64;

    if x >= 1.0 && x == x.floor() && x <= 170.0 {
        let m = x as usize;
        let prod: f64 = (0..m).map(|j| nf / (nf + j as f64)).product();
        return SignedLog {
            ln_abs: (FACTORIAL[m - 1] * prod).ln(),
            negative: false,
        };
    }

    let mut negative = x < 0.0;
    let mut acc = CompensatedSum::default();
    acc.add(x * nf.ln());
    acc.add(-x.abs().ln());
    for k in 1..n {
        let kf = k as f64;
        let t = x / kf;
        let term = if t > -1.0 {
            t.ln_1p()
        } else {
            negative = !negative;
            ((-x - kf) / kf).ln()
        };
        acc.add(-term);
    }
    SignedLog {
        ln_abs: acc.total(),
        negative,
    }
}

/// Value of the truncated Euler-Gauss product; tends to Γ(x) like `1/n`.
pub fn gamma_euler_gauss(x: GammaArg, n: TruncationOrder) -> Result<f64> {
    ln_gamma_euler_gauss(x, n).value()
}

/// `sin(πx)` with exact argument reduction, so the result keeps full
/// relative accuracy next to the integer zeros.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let nearest = x.round();
    let frac = x - nearest;
    let s = (PI * frac).sin();
    if (nearest * 0.5).fract() != 0.0 {
        -s
    } else {
        s
    }
}

/// `sin(πx) / (πx)`, continuous through `x = 0` where it equals 1.
pub fn sinc_pi(x: f64) -> f64 {
    sinc_pi_with(x, &Tolerances::DEFAULT)
}

pub fn sinc_pi_with(x: f64, tol: &Tolerances) -> f64 {
    let a = x.abs();
    if a < tol.sinc_taylor_crossover {
        let y = (PI * a) * (PI * a);
        // 1 − y/3! + y²/5! − y³/7! + y⁴/9!
        let poly = y.mul_add(1.0 / 362_880.0, -1.0 / 5040.0);
        let poly = y.mul_add(poly, 1.0 / 120.0);
        let poly = y.mul_add(poly, -1.0 / 6.0);
        y.mul_add(poly, 1.0)
    } else {
        sin_pi(a) / (PI * a)
    }
}
