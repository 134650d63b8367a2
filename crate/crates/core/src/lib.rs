//! Binomial coefficients of real arguments.
//!
//! `B(r, α) = Γ(1 + r) / (Γ(1 + α) Γ(1 + r − α))` on the domain `r > −1`,
//! `−1 < α < r + 1`, together with the structural identities it satisfies
//! (symmetry, Pascal recurrence, unimodality, monotonicity in `r`), the
//! elementary closed form for integer `r`, and the Stirling-type asymptotic
//! `B(r, rα) ~ (2πα(1−α)r)^{−1/2} α^{−αr} (1−α)^{−(1−α)r}`.
//!
//! The [`harness`] module turns each of those statements into a seeded,
//! reproducible numerical check; the `realbinom` binary exposes evaluation,
//! CSV slicing, verification and convergence studies.

// `!(x > lo)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod binom;
pub mod cli;
pub mod config;
mod error;
mod factorial_table;
pub mod fmt;
pub mod gamma;
pub mod harness;

pub use asymptotics::{
    asymptotic_ratio, convergence_scan, stirling_rhs, AsymptoticPoint, ConvergenceReport,
    ConvergenceRow, LogValue,
};
pub use binom::{
    binom, binom_closed_form, binom_exact_integer, ln_binom, pascal_residual, peak_location,
    symmetry_pair, Backend, BinomArgs, EvalResult,
};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use gamma::{gamma, gamma_euler_gauss, ln_gamma, sin_pi, sinc_pi, GammaArg, TruncationOrder};
