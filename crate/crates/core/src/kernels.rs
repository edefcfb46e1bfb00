//! Scalar kernels of the gap equation.
//!
//! Every integrand used by the solver is assembled from the functions in this
//! module. They are total on `η ≥ 0` and stay finite at the removable
//! singularity `η = 0`, where the closed forms degenerate into `0/0`. Below a
//! switch threshold the closed forms are replaced by truncated even Taylor
//! series; above `LARGE_ETA` the hyperbolic functions are dropped in favour of
//! their saturated tails so that `cosh²η` is never formed.

use crate::error::{GapError, Result};

/// Below this argument `g` is evaluated from its Taylor series.
pub const G_SERIES_THRESHOLD: f64 = 0.125;

/// Below this argument `G` is evaluated from its Taylor series.
///
/// The closed form of `G` subtracts two terms that agree to `O(η²)` *after*
/// `g` itself has already cancelled, so it needs a larger switch point than `g`.
pub const CAP_G_SERIES_THRESHOLD: f64 = 0.25;

/// Above this argument `cosh²η` would overflow; tails are used instead.
pub const LARGE_ETA: f64 = 350.0;

/// Taylor coefficients of `g` in powers of `η²`, through `η¹²`.
const G_SERIES: [f64; 7] = [
    -2.0 / 3.0,
    8.0 / 15.0,
    -34.0 / 105.0,
    496.0 / 2835.0,
    -2764.0 / 31185.0,
    87376.0 / 2027025.0,
    -1859138.0 / 91216125.0,
];

/// Taylor coefficients of `G` in powers of `η²`, through `η²⁰`.
const CAP_G_SERIES: [f64; 11] = [
    -16.0 / 15.0,
    136.0 / 105.0,
    -992.0 / 945.0,
    22112.0 / 31185.0,
    -174752.0 / 405405.0,
    7436552.0 / 30405375.0,
    -204946624.0 / 1550674125.0,
    14203557184.0 / 206239658625.0,
    -151107728672.0 / 4331032831125.0,
    911419934896.0 / 52736693884875.0,
    -941930695305664.0 / 112065474505359375.0,
];

/// Dimensionless scaled energy `η = √(ξ² + Y) / (2 k_B T)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Eta(f64);

impl Eta {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Eta(value))
        } else {
            Err(GapError::Domain(format!(
                "eta must be finite and non-negative, got {value}"
            )))
        }
    }

    /// Builds an `Eta` from a value the caller has already proven to be a
    /// finite non-negative number (for example `sqrt(..) / positive`).
    #[inline]
    pub(crate) fn from_nonneg(value: f64) -> Self {
        debug_assert!(value >= 0.0 && !value.is_nan(), "eta = {value}");
        Eta(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

fn even_series(coeffs: &[f64], x: f64) -> f64 {
    let x2 = x * x;
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x2 + c)
}

/// `tanh(η)/η`, with the value `1` at `η = 0`.
#[inline]
pub fn tanh_over_eta(eta: Eta) -> f64 {
    let x = eta.0;
    if x == 0.0 {
        1.0
    } else {
        x.tanh() / x
    }
}

/// `sech²η`, evaluated as `4t/(1+t)²` with `t = e^{-2η}`; never overflows.
#[inline]
pub fn sech2(eta: Eta) -> f64 {
    let t = (-2.0 * eta.0).exp();
    let d = 1.0 + t;
    4.0 * t / (d * d)
}

/// `1 − tanh η`, evaluated as `2t/(1+t)` with `t = e^{-2η}`.
#[inline]
pub fn tanh_complement(eta: Eta) -> f64 {
    let t = (-2.0 * eta.0).exp();
    2.0 * t / (1.0 + t)
}

/// The closed form of `g`, valid (but cancellation-prone) for `η > 0`.
#[inline]
pub fn fn_g_direct(x: f64) -> f64 {
    let s2 = sech2(Eta::from_nonneg(x));
    (s2 - x.tanh() / x) / (x * x)
}

/// The closed form of `G`, valid (but cancellation-prone) for `η > 0`.
#[inline]
pub fn fn_cap_g_direct(x: f64) -> f64 {
    let s2 = sech2(Eta::from_nonneg(x));
    (3.0 * fn_g(Eta::from_nonneg(x)) + 2.0 * x.tanh() * s2 / x) / (x * x)
}

/// Truncated Taylor series of `g`.
#[inline]
pub fn fn_g_series(x: f64) -> f64 {
    even_series(&G_SERIES, x)
}

/// Truncated Taylor series of `G`.
#[inline]
pub fn fn_cap_g_series(x: f64) -> f64 {
    even_series(&CAP_G_SERIES, x)
}

/// `g(η) = (sech²η − tanhη/η)/η²`, `g(0) = −2/3`. Strictly negative.
pub fn fn_g(eta: Eta) -> f64 {
    let x = eta.0;
    if x < G_SERIES_THRESHOLD {
        fn_g_series(x)
    } else if x > LARGE_ETA {
        -1.0 / (x * x * x)
    } else {
        fn_g_direct(x)
    }
}

/// `G(η) = (3g(η) + 2 tanhη sech²η/η)/η²`, `G(0) = −16/15`.
///
/// `G` is related to `g` by `g'(η) = −η G(η)`.
#[allow(non_snake_case)]
pub fn fn_G(eta: Eta) -> f64 {
    let x = eta.0;
    if x < CAP_G_SERIES_THRESHOLD {
        fn_cap_g_series(x)
    } else if x > LARGE_ETA {
        3.0 * fn_g(eta) / (x * x)
    } else {
        fn_cap_g_direct(x)
    }
}

/// The gap-equation kernel `h` in reduced variables.
///
/// For `tau > 0` this is `tanh(√(ε²+y)/(2τ)) / √(ε²+y)`, evaluated as
/// `tanh_over_eta(η)/(2τ)` so that `ε² + y → 0` stays finite. For `tau = 0`
/// it is `1/√(ε²+y)`, which requires `y > 0`.
pub fn kernel_h(tau: f64, y: f64, eps: f64) -> Result<f64> {
    if !(tau >= 0.0 && y >= 0.0 && tau.is_finite() && y.is_finite()) {
        return Err(GapError::Domain(format!(
            "kernel h needs finite tau >= 0 and y >= 0, got ({tau}, {y})"
        )));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(GapError::Domain(format!(
            "reduced energy must lie in [0, 1], got {eps}"
        )));
    }
    if tau == 0.0 {
        if y == 0.0 {
            return Err(GapError::Domain(
                "kernel h is undefined at the corner (T, Y) = (0, 0)".into(),
            ));
        }
        return Ok(1.0 / (eps * eps + y).sqrt());
    }
    Ok(h_positive_tau(tau, y, eps))
}

#[inline]
pub(crate) fn h_positive_tau(tau: f64, y: f64, eps: f64) -> f64 {
    let two_tau = 2.0 * tau;
    let eta = Eta::from_nonneg((eps * eps + y).sqrt() / two_tau);
    tanh_over_eta(eta) / two_tau
}
