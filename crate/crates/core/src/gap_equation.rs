//! The one-variable gap function `F(τ, y)` and its partial derivatives.
//!
//! Everything here works in reduced variables: `ε = ξ/ħω_D ∈ [0, 1]`,
//! `τ = k_B T/ħω_D` and `y = Y/(ħω_D)²`. In these units
//!
//! ```text
//! F(τ, y)  = ∫₀¹ h(τ, y, ε) dε − 1/λ
//! F_τ      = −1/(2τ²)      ∫₀¹ sech²η dε
//! F_y      =  1/(16τ³)     ∫₀¹ g(η) dε
//! F_ττ     =  1/τ³         ∫₀¹ (1 − η tanh η) sech²η dε
//! F_τy     =  1/(8τ⁴)      ∫₀¹ tanh η sech²η / η dε
//! F_yy     = −1/(128τ⁵)    ∫₀¹ G(η) dε
//! ```
//!
//! with `η = √(ε² + y)/(2τ)`. On the `τ = 0` edge the `τ`-derivatives vanish
//! and the `y`-derivatives have closed forms, so no quadrature is done there.
//! Multiplying by the physical scales (`k_B/ħω_D` per `τ`, `1/(ħω_D)²` per `y`)
//! recovers the partials in physical units.

use serde::{Deserialize, Serialize};

use crate::error::{GapError, Result};
use crate::kernels::{self, Eta};
use crate::quadrature::{integrate_breakpoints, QuadratureConfig};

/// Physical inputs. Energies share one user unit, `boltzmann` converts
/// temperature to that unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Dimensionless coupling `λ = U₀N₀`.
    pub coupling: f64,
    /// Debye energy `ħω_D`.
    pub debye_energy: f64,
    /// Boltzmann constant `k_B` in energy per temperature.
    pub boltzmann: f64,
}

impl MaterialParams {
    pub fn new(coupling: f64, debye_energy: f64, boltzmann: f64) -> Result<Self> {
        let params = MaterialParams {
            coupling,
            debye_energy,
            boltzmann,
        };
        params.validate()?;
        Ok(params)
    }

    /// Reduced units: `ħω_D = k_B = 1`, so temperatures are `τ` and squared
    /// gaps are `y`.
    pub fn reduced(coupling: f64) -> Result<Self> {
        Self::new(coupling, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("coupling", self.coupling),
            ("debye_energy", self.debye_energy),
            ("boltzmann", self.boltzmann),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(GapError::InvalidConfig(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        if !self.coupling.is_normal() || !(1.0 / self.coupling).is_finite() {
            return Err(GapError::InvalidConfig(format!(
                "coupling {} is too small to invert",
                self.coupling
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn inverse_coupling(&self) -> f64 {
        1.0 / self.coupling
    }

    /// `τ = k_B T / ħω_D`.
    #[inline]
    pub fn reduce_temperature(&self, temperature: f64) -> f64 {
        self.boltzmann * temperature / self.debye_energy
    }

    #[inline]
    pub fn physical_temperature(&self, tau: f64) -> f64 {
        tau * self.debye_energy / self.boltzmann
    }
}

/// Which piece of the closed domain a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `0 < τ < τ_c`, `0 < y < 2δ₀²`.
    W1,
    /// `τ = 0`, `0 < y < 2δ₀²`.
    W2,
    /// `y = 0`, `0 < τ < τ_c`.
    W3,
    /// `τ = τ_c`, `0 < y < 2δ₀²`.
    W4,
    /// The zero-temperature root `(0, δ₀²)`.
    Boundary0,
    /// The transition point `(τ_c, 0)`.
    BoundaryTc,
}

/// The reduced domain `0 ≤ τ ≤ τ_c`, `0 ≤ y < 2δ₀²` minus the corner `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedDomain {
    pub tau_c: f64,
    pub delta0: f64,
}

impl ReducedDomain {
    pub fn new(tau_c: f64, delta0: f64) -> Result<Self> {
        if !(tau_c > 0.0 && tau_c.is_finite() && delta0 > 0.0 && delta0.is_finite()) {
            return Err(GapError::InvalidConfig(format!(
                "reduced domain needs positive tau_c and delta0, got ({tau_c}, {delta0})"
            )));
        }
        Ok(ReducedDomain { tau_c, delta0 })
    }

    /// Exclusive upper bound `2δ₀²` on `y`.
    #[inline]
    pub fn y_max(&self) -> f64 {
        2.0 * self.delta0 * self.delta0
    }

    pub fn point(&self, tau: f64, y: f64) -> Result<ReducedPoint> {
        if !(tau.is_finite() && y.is_finite()) {
            return Err(GapError::Domain(format!("non-finite point ({tau}, {y})")));
        }
        if tau < 0.0 || tau > self.tau_c {
            return Err(GapError::Domain(format!(
                "tau = {tau:e} outside [0, tau_c = {:e}]",
                self.tau_c
            )));
        }
        if y < 0.0 || y >= self.y_max() {
            return Err(GapError::Domain(format!(
                "y = {y:e} outside [0, 2 delta0^2 = {:e})",
                self.y_max()
            )));
        }
        let region = match (tau == 0.0, y == 0.0, tau == self.tau_c) {
            (true, true, _) => {
                return Err(GapError::Domain(
                    "the corner (0, 0) is excluded from the domain".into(),
                ))
            }
            (true, false, _) if y == self.delta0 * self.delta0 => Region::Boundary0,
            (true, false, _) => Region::W2,
            (false, true, true) => Region::BoundaryTc,
            (false, true, false) => Region::W3,
            (false, false, true) => Region::W4,
            (false, false, false) => Region::W1,
        };
        Ok(ReducedPoint { tau, y, region })
    }
}

/// A validated point of the reduced domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    tau: f64,
    y: f64,
    region: Region,
}

impl ReducedPoint {
    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn region(&self) -> Region {
        self.region
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialDerivatives {
    pub f: f64,
    pub f_t: f64,
    pub f_y: f64,
    pub f_tt: f64,
    pub f_ty: f64,
    pub f_yy: f64,
}

/// The five `ε`-integrals that every partial derivative is built from, at a
/// point with `τ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelIntegrals {
    /// `∫ sech²η dε`
    pub sech2: f64,
    /// `∫ g(η) dε`
    pub g: f64,
    /// `∫ η tanh η sech²η dε`
    pub eta_tanh_sech2: f64,
    /// `∫ tanh η sech²η / η dε`
    pub tanh_sech2_over_eta: f64,
    /// `∫ G(η) dε`
    pub cap_g: f64,
}

#[inline]
fn eta(tau: f64, y: f64, eps: f64) -> Eta {
    Eta::from_nonneg((eps * eps + y).sqrt() / (2.0 * tau))
}

fn integral_of(tau: f64, y: f64, qc: &QuadratureConfig, phi: impl Fn(Eta) -> f64) -> Result<f64> {
    scaled_integral_of(tau, y, qc, 0, phi)
}

/// Integrates `(2τ)^{-power}·phi` and undoes the factor afterwards. `g` and
/// `G` decay like `η^{-3}` and `η^{-5}`, so their plain integrals shrink like
/// `τ³` and `τ⁵` when cold and would fall below the absolute tolerance.
fn scaled_integral_of(
    tau: f64,
    y: f64,
    qc: &QuadratureConfig,
    power: i32,
    phi: impl Fn(Eta) -> f64,
) -> Result<f64> {
    let breaks = energy_breaks(tau, y);
    let scale = (2.0 * tau).powi(-power);
    if !(scale.is_finite() && scale > 0.0) {
        return Ok(integrate_breakpoints(|e| phi(eta(tau, y, e)), &breaks, qc)?.value);
    }
    Ok(integrate_breakpoints(|e| scale * phi(eta(tau, y, e)), &breaks, qc)?.value / scale)
}

/// Initial partition of `[0, 1]` for integrands in `ε` at `(τ, y)`.
///
/// The kernels vary on the scale `√(ε² + y) ~ 2τ`, which for small `τ` and
/// `y` is far narrower than the spacing of the Kronrod nodes. Geometric
/// breakpoints from `min(2τ, √y)` upward make every scale visible.
pub(crate) fn energy_breaks(tau: f64, y: f64) -> Vec<f64> {
    let root_y = y.sqrt();
    let start = match (tau > 0.0, root_y > 0.0) {
        (true, true) => (2.0 * tau).min(root_y),
        (true, false) => 2.0 * tau,
        _ => root_y,
    };
    let mut breaks = vec![0.0];
    let mut e = start;
    while e < 0.5 && e > 0.0 {
        breaks.push(e);
        e *= 4.0;
    }
    breaks.push(1.0);
    breaks
}

fn require_positive_tau(tau: f64) -> Result<()> {
    if tau > 0.0 {
        Ok(())
    } else {
        Err(GapError::Domain(format!(
            "kernel integrals need tau > 0, got {tau}"
        )))
    }
}

pub fn sech2_integral(tau: f64, y: f64, qc: &QuadratureConfig) -> Result<f64> {
    require_positive_tau(tau)?;
    integral_of(tau, y, qc, kernels::sech2)
}

pub fn g_integral(tau: f64, y: f64, qc: &QuadratureConfig) -> Result<f64> {
    require_positive_tau(tau)?;
    scaled_integral_of(tau, y, qc, 3, kernels::fn_g)
}

pub fn eta_tanh_sech2_integral(tau: f64, y: f64, qc: &QuadratureConfig) -> Result<f64> {
    require_positive_tau(tau)?;
    integral_of(tau, y, qc, |n| {
        n.value() * n.value().tanh() * kernels::sech2(n)
    })
}

pub fn tanh_sech2_over_eta_integral(tau: f64, y: f64, qc: &QuadratureConfig) -> Result<f64> {
    require_positive_tau(tau)?;
    integral_of(tau, y, qc, |n| {
        kernels::tanh_over_eta(n) * kernels::sech2(n)
    })
}

pub fn cap_g_integral(tau: f64, y: f64, qc: &QuadratureConfig) -> Result<f64> {
    require_positive_tau(tau)?;
    scaled_integral_of(tau, y, qc, 5, kernels::fn_G)
}

impl KernelIntegrals {
    pub fn at(tau: f64, y: f64, qc: &QuadratureConfig) -> Result<Self> {
        Ok(KernelIntegrals {
            sech2: sech2_integral(tau, y, qc)?,
            g: g_integral(tau, y, qc)?,
            eta_tanh_sech2: eta_tanh_sech2_integral(tau, y, qc)?,
            tanh_sech2_over_eta: tanh_sech2_over_eta_integral(tau, y, qc)?,
            cap_g: cap_g_integral(tau, y, qc)?,
        })
    }
}

/// `∫₀¹ h(τ, y, ε) dε`, without checking the domain.
pub(crate) fn kernel_integral(tau: f64, y: f64, qc: &QuadratureConfig) -> Result<f64> {
    if tau == 0.0 {
        if y <= 0.0 {
            return Err(GapError::Domain(
                "the corner (0, 0) is excluded from the domain".into(),
            ));
        }
        let breaks = energy_breaks(0.0, y);
        return Ok(integrate_breakpoints(|e| 1.0 / (e * e + y).sqrt(), &breaks, qc)?.value);
    }
    let breaks = energy_breaks(tau, y);
    Ok(integrate_breakpoints(|e| kernels::h_positive_tau(tau, y, e), &breaks, qc)?.value)
}

/// `F_y(0, y) = −1/(2 y √(1 + y))`.
#[inline]
pub fn d_y_zero_temperature(y: f64) -> f64 {
    -1.0 / (2.0 * y * (1.0 + y).sqrt())
}

/// `F_yy(0, y) = (2 + 3y)/(4 y² (1 + y)^{3/2})`, the `y`-derivative of
/// [`d_y_zero_temperature`].
#[inline]
pub fn d_yy_zero_temperature(y: f64) -> f64 {
    (2.0 + 3.0 * y) / (4.0 * y * y * (1.0 + y).powf(1.5))
}

/// `F(τ, y) = ∫₀¹ h dε − 1/λ`.
pub fn value(p: &ReducedPoint, params: &MaterialParams, qc: &QuadratureConfig) -> Result<f64> {
    Ok(kernel_integral(p.tau, p.y, qc)? - params.inverse_coupling())
}

pub fn d_t(p: &ReducedPoint, _params: &MaterialParams, qc: &QuadratureConfig) -> Result<f64> {
    if p.tau == 0.0 {
        return Ok(0.0);
    }
    let tau = p.tau;
    Ok(-sech2_integral(tau, p.y, qc)? / (2.0 * tau * tau))
}

pub fn d_y(p: &ReducedPoint, _params: &MaterialParams, qc: &QuadratureConfig) -> Result<f64> {
    if p.tau == 0.0 {
        return Ok(d_y_zero_temperature(p.y));
    }
    let tau = p.tau;
    Ok(g_integral(tau, p.y, qc)? / (16.0 * tau * tau * tau))
}

pub fn d_tt(p: &ReducedPoint, _params: &MaterialParams, qc: &QuadratureConfig) -> Result<f64> {
    if p.tau == 0.0 {
        return Ok(0.0);
    }
    let tau = p.tau;
    let s = sech2_integral(tau, p.y, qc)?;
    let e = eta_tanh_sech2_integral(tau, p.y, qc)?;
    Ok((s - e) / tau.powi(3))
}

pub fn d_ty(p: &ReducedPoint, _params: &MaterialParams, qc: &QuadratureConfig) -> Result<f64> {
    if p.tau == 0.0 {
        return Ok(0.0);
    }
    let tau = p.tau;
    Ok(tanh_sech2_over_eta_integral(tau, p.y, qc)? / (8.0 * tau.powi(4)))
}

pub fn d_yy(p: &ReducedPoint, _params: &MaterialParams, qc: &QuadratureConfig) -> Result<f64> {
    if p.tau == 0.0 {
        return Ok(d_yy_zero_temperature(p.y));
    }
    let tau = p.tau;
    Ok(-cap_g_integral(tau, p.y, qc)? / (128.0 * tau.powi(5)))
}

/// `F` and all five partials, sharing the kernel integrals.
pub fn partials(
    p: &ReducedPoint,
    params: &MaterialParams,
    qc: &QuadratureConfig,
) -> Result<PartialDerivatives> {
    let f = value(p, params, qc)?;
    if p.tau == 0.0 {
        return Ok(PartialDerivatives {
            f,
            f_t: 0.0,
            f_y: d_y_zero_temperature(p.y),
            f_tt: 0.0,
            f_ty: 0.0,
            f_yy: d_yy_zero_temperature(p.y),
        });
    }
    let tau = p.tau;
    let k = KernelIntegrals::at(tau, p.y, qc)?;
    Ok(PartialDerivatives {
        f,
        f_t: -k.sech2 / (2.0 * tau * tau),
        f_y: k.g / (16.0 * tau.powi(3)),
        f_tt: (k.sech2 - k.eta_tanh_sech2) / tau.powi(3),
        f_ty: k.tanh_sech2_over_eta / (8.0 * tau.powi(4)),
        f_yy: -k.cap_g / (128.0 * tau.powi(5)),
    })
}
