//! Numerical thresholds shared by the evaluators.

/// Tolerances that steer branch selection and argument validation.
///
/// [`Tolerances::DEFAULT`] is what every plain entry point uses; the
/// `*_with` variants accept an override.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Arguments of Γ closer than this to a non-positive integer are
    /// rejected as poles.
    pub pole_exclusion: f64,
    /// Below this `|x|`, `sinc_pi` uses its Taylor polynomial.
    pub sinc_taylor_crossover: f64,
    /// `|α − round(α)|` below this routes the closed form to its factorial
    /// branch; `|r − round(r)|` below this makes the closed-form backend
    /// applicable.
    pub integer_snap: f64,
    /// Between `integer_snap` and this distance from an integer, the closed
    /// form is still evaluated through `sin πα` but its error estimate is
    /// inflated by `1 / |sin πα|`.
    pub conditioning_band: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        pole_exclusion: 1e-12,
        sinc_taylor_crossover: 1e-2,
        integer_snap: 1e-9,
        conditioning_band: 1e-4,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
