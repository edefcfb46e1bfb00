//! Transition temperature, the squared-gap curve `f(T)` and its derivatives.
//!
//! All solving happens in reduced units (see [`crate::gap_equation`]); the
//! physical scales are applied once, when a [`GapSolution`] or [`GapPoint`]
//! is built:
//!
//! ```text
//! f   = (ħω_D)² · y
//! f'  = k_B ħω_D · dy/dτ
//! f'' = k_B²     · d²y/dτ²
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{GapError, Result};
use crate::gap_equation::{self, KernelIntegrals, MaterialParams, ReducedDomain};
use crate::kernels::{self, Eta};
use crate::parallel;
use crate::quadrature::{integrate, integrate_breakpoints, QuadratureConfig};
use crate::roots::brent;

/// Temperatures within this fraction of `T_c` of an endpoint use the exact
/// endpoint values.
pub const ENDPOINT_FRACTION: f64 = 1e-12;

/// Below `COLD_FRACTION · τ_c` the gap is solved through the thermal deficit
/// (see [`GapProblem::solve_reduced`]).
pub const COLD_FRACTION: f64 = 0.3;

/// Argument above which `sinh` is replaced by `e^x / 2`.
const SINH_ASYMPTOTIC: f64 = 700.0;

/// Upper limit of the Definition-1 integral handled by plain quadrature; past
/// it `tanh η = 1` to double precision and the remainder is a logarithm.
const TC_LOG_SPLIT: f64 = 40.0;

/// Largest `ħω_D/(2k_B T_c)` searched for.
const TC_MAX_ARGUMENT: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Tolerance on `|F|` at an accepted root.
    pub residual_tol: f64,
    /// Relative tolerance on the root bracket.
    pub y_tol: f64,
    pub max_iterations: usize,
    /// Relative step for finite-difference verification.
    pub fd_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            residual_tol: 1e-9,
            y_tol: 1e-14,
            max_iterations: 200,
            fd_step: 1e-3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tol > 0.0 && self.residual_tol.is_finite()) {
            return Err(GapError::InvalidConfig(format!(
                "residual_tol must be positive, got {}",
                self.residual_tol
            )));
        }
        if !(self.y_tol > 4.0 * f64::EPSILON && self.y_tol < 1.0) {
            return Err(GapError::InvalidConfig(format!(
                "y_tol must lie in (4 eps, 1), got {}",
                self.y_tol
            )));
        }
        if self.max_iterations == 0 {
            return Err(GapError::InvalidConfig(
                "max_iterations must be positive".into(),
            ));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1.0) {
            return Err(GapError::InvalidConfig(format!(
                "fd_step must lie in (0, 1), got {}",
                self.fd_step
            )));
        }
        Ok(())
    }
}

/// `1/sinh(x)`, switching to `2e^{-x}` once `sinh` would overflow.
fn inverse_sinh(x: f64) -> f64 {
    if x > SINH_ASYMPTOTIC {
        2.0 * (-x).exp()
    } else {
        1.0 / x.sinh()
    }
}

/// `δ₀ = 1/sinh(1/λ)`, the reduced zero-temperature gap.
pub fn reduced_delta0(coupling: f64) -> f64 {
    inverse_sinh(1.0 / coupling)
}

/// `Δ₀ = ħω_D / sinh(1/λ)`.
pub fn delta0(params: &MaterialParams) -> f64 {
    params.debye_energy * reduced_delta0(params.coupling)
}

/// `∫₀^x tanh(η)/η dη` for `x > 0`.
pub fn tc_integral(x: f64, qc: &QuadratureConfig) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(GapError::Domain(format!(
            "upper limit must be positive, got {x}"
        )));
    }
    let upto = x.min(TC_LOG_SPLIT);
    let head = integrate(
        |s| upto * kernels::tanh_over_eta(Eta::from_nonneg(upto * s)),
        qc,
    )?
    .value;
    if x <= TC_LOG_SPLIT {
        Ok(head)
    } else {
        // (1 - tanh η)/η < 2e^{-80}/40 on the tail
        Ok(head + (x / TC_LOG_SPLIT).ln())
    }
}

/// Reduced transition temperature `τ_c`, the root of
/// `∫₀^{1/(2τ_c)} tanh(η)/η dη = 1/λ`.
pub fn reduced_transition_temperature(
    coupling: f64,
    cfg: &SolverConfig,
    qc: &QuadratureConfig,
) -> Result<f64> {
    let target = 1.0 / coupling;
    if !(target.is_finite() && target > 0.0) {
        return Err(GapError::InvalidConfig(format!(
            "invalid coupling {coupling}"
        )));
    }
    let excess = |x: f64| -> Result<f64> { Ok(tc_integral(x, qc)? - target) };

    // bracket x = ħω_D/(2k_B T_c) by doubling / halving
    let mut lo = 1.0;
    let mut f_lo = excess(lo)?;
    while f_lo > 0.0 {
        lo *= 0.5;
        if lo < 1e-150 {
            return Err(GapError::NoBracket(format!(
                "coupling {coupling} is too strong to bracket"
            )));
        }
        f_lo = excess(lo)?;
    }
    let mut hi = 2.0 * lo;
    let mut f_hi = excess(hi)?;
    while f_hi < 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        if hi > TC_MAX_ARGUMENT {
            return Err(GapError::NoBracket(format!(
                "coupling {coupling} needs hbar*omega_D/(2 k_B T_c) > {TC_MAX_ARGUMENT:e}"
            )));
        }
        f_hi = excess(hi)?;
    }

    // solve in ln x, where the integral has slope tanh(x) ~ 1
    let root = brent(
        |s: f64| excess(s.exp()),
        lo.ln(),
        hi.ln(),
        f_lo,
        f_hi,
        |_| cfg.y_tol,
        cfg.max_iterations,
    )?;
    if root.fx.abs() > cfg.residual_tol {
        return Err(GapError::ResidualTooLarge {
            tau: 0.5 * (-root.x).exp(),
            residual: root.fx.abs(),
            tol: cfg.residual_tol,
        });
    }
    Ok(0.5 * (-root.x).exp())
}

/// Physical transition temperature `T_c`.
pub fn transition_temperature(
    params: &MaterialParams,
    cfg: &SolverConfig,
    qc: &QuadratureConfig,
) -> Result<f64> {
    params.validate()?;
    let tau_c = reduced_transition_temperature(params.coupling, cfg, qc)?;
    Ok(params.physical_temperature(tau_c))
}

/// A solved temperature sample without derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSolution {
    pub temperature: f64,
    pub tau: f64,
    /// Reduced squared gap.
    pub y: f64,
    /// Squared gap `Y = Δ²` in energy².
    pub f: f64,
    pub delta: f64,
    pub residual: f64,
}

/// A solved temperature sample with `f'` and `f''`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub temperature: f64,
    pub tau: f64,
    pub y: f64,
    pub f: f64,
    pub delta: f64,
    /// energy² per temperature
    pub f_prime: f64,
    /// energy² per temperature²
    pub f_second: f64,
    pub residual: f64,
}

/// `f'(T_c)` and `f''(T_c)` in reduced and physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointDerivatives {
    pub y_prime_tc: f64,
    pub y_second_tc: f64,
    pub fprime_tc: f64,
    pub fsecond_tc: f64,
}

/// The curve-wide constants of a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConstants {
    pub t_c: f64,
    pub tau_c: f64,
    pub delta0: f64,
    pub delta0_reduced: f64,
    pub fprime_tc: f64,
    pub fsecond_tc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub params: MaterialParams,
    pub constants: SweepConstants,
    pub points: Vec<GapPoint>,
}

/// Temperature grid of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Grid {
    /// `T_i = T_c·√sin(πi/(2(n−1)))`: clustered toward `T_c`, sparse in the
    /// exponentially flat region near `T = 0`.
    Chebyshev(usize),
    Uniform(usize),
    Explicit(Vec<f64>),
}

impl Grid {
    pub fn temperatures(&self, t_c: f64) -> Result<Vec<f64>> {
        let spaced = |n: usize, map: &dyn Fn(f64) -> f64| -> Result<Vec<f64>> {
            if n < 2 {
                return Err(GapError::InvalidConfig(format!(
                    "a sweep grid needs at least 2 points, got {n}"
                )));
            }
            let last = (n - 1) as f64;
            Ok((0..n)
                .map(|i| match i {
                    0 => 0.0,
                    i if i == n - 1 => t_c,
                    i => t_c * map(i as f64 / last),
                })
                .collect())
        };
        let temps = match self {
            Grid::Chebyshev(n) => spaced(*n, &|s| (0.5 * std::f64::consts::PI * s).sin().sqrt())?,
            Grid::Uniform(n) => spaced(*n, &|s| s)?,
            Grid::Explicit(ts) => ts.clone(),
        };
        if temps.is_empty() {
            return Err(GapError::InvalidConfig("empty temperature grid".into()));
        }
        for (i, &t) in temps.iter().enumerate() {
            if !(t.is_finite() && (0.0..=t_c).contains(&t)) {
                return Err(GapError::Domain(format!(
                    "grid temperature [{i}] = {t} outside [0, T_c = {t_c}]"
                )));
            }
        }
        if temps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GapError::InvalidConfig(
                "grid temperatures must be strictly increasing".into(),
            ));
        }
        Ok(temps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Location {
    Zero,
    Interior,
    Critical,
}

/// A parameter set together with its transition temperature and zero
/// temperature gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapProblem {
    params: MaterialParams,
    solver: SolverConfig,
    quad: QuadratureConfig,
    domain: ReducedDomain,
}

impl GapProblem {
    pub fn new(
        params: MaterialParams,
        solver: SolverConfig,
        quad: QuadratureConfig,
    ) -> Result<Self> {
        params.validate()?;
        solver.validate()?;
        quad.validate()?;
        let tau_c = reduced_transition_temperature(params.coupling, &solver, &quad)?;
        let domain = ReducedDomain::new(tau_c, reduced_delta0(params.coupling))?;
        Ok(GapProblem {
            params,
            solver,
            quad,
            domain,
        })
    }

    pub fn params(&self) -> &MaterialParams {
        &self.params
    }

    pub fn solver_config(&self) -> &SolverConfig {
        &self.solver
    }

    pub fn quadrature_config(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn domain(&self) -> &ReducedDomain {
        &self.domain
    }

    pub fn t_c(&self) -> f64 {
        self.params.physical_temperature(self.domain.tau_c)
    }

    pub fn delta0(&self) -> f64 {
        self.params.debye_energy * self.domain.delta0
    }

    fn delta0_squared(&self) -> f64 {
        let d = self.delta0();
        d * d
    }

    /// Same problem with different tolerances; `T_c` is not recomputed.
    pub fn with_configs(&self, solver: SolverConfig, quad: QuadratureConfig) -> Result<Self> {
        solver.validate()?;
        quad.validate()?;
        Ok(GapProblem {
            solver,
            quad,
            ..*self
        })
    }

    fn locate(&self, tau: f64) -> Location {
        let tau_c = self.domain.tau_c;
        if tau <= ENDPOINT_FRACTION * tau_c {
            Location::Zero
        } else if tau >= (1.0 - ENDPOINT_FRACTION) * tau_c {
            Location::Critical
        } else {
            Location::Interior
        }
    }

    fn reduce_checked(&self, temperature: f64) -> Result<f64> {
        let tau = self.params.reduce_temperature(temperature);
        let tau_c = self.domain.tau_c;
        if !(tau.is_finite() && tau >= 0.0 && tau <= tau_c * (1.0 + ENDPOINT_FRACTION)) {
            return Err(GapError::Domain(format!(
                "temperature {temperature} outside [0, T_c = {}]",
                self.t_c()
            )));
        }
        Ok(tau.min(tau_c))
    }

    fn residual_at(&self, tau: f64, y: f64) -> Result<f64> {
        let p = self.domain.point(tau, y)?;
        Ok(gap_equation::value(&p, &self.params, &self.quad)?.abs())
    }

    /// `F(τ, y)` on `[0, τ_c] × [0, 2δ₀²)`.
    fn gap_function(&self, tau: f64, y: f64) -> Result<f64> {
        let p = self.domain.point(tau, y)?;
        gap_equation::value(&p, &self.params, &self.quad)
    }

    /// `∫₀¹ (1 − tanh η)/√(ε²+y) dε`, the amount by which temperature lowers
    /// the kernel integral below its `τ = 0` value `asinh(1/√y)`.
    fn thermal_deficit(&self, tau: f64, y: f64) -> Result<f64> {
        let two_tau = 2.0 * tau;
        let breaks = gap_equation::energy_breaks(tau, y);
        Ok(integrate_breakpoints(
            |e| {
                let s = (e * e + y).sqrt();
                kernels::tanh_complement(Eta::from_nonneg(s / two_tau)) / s
            },
            &breaks,
            &self.quad,
        )?
        .value)
    }

    /// Cold branch: the gap equation reads `asinh(1/√y) = 1/λ + D(τ, y)`,
    /// so `y = 1/sinh²(1/λ + D)`. The map contracts strongly while `D` is
    /// small and by construction never returns `y > δ₀²`.
    fn solve_cold(&self, tau: f64) -> Result<f64> {
        let inv = self.params.inverse_coupling();
        let mut y = self.domain.delta0 * self.domain.delta0;
        let mut last_step = f64::INFINITY;
        for _ in 0..self.solver.max_iterations {
            let d = inverse_sinh(inv + self.thermal_deficit(tau, y)?);
            let next = d * d;
            let step = (next - y).abs();
            if step <= self.solver.y_tol * next {
                return Ok(next);
            }
            if step >= last_step {
                break;
            }
            last_step = step;
            y = next;
        }
        Err(GapError::NotConverged {
            iterations: self.solver.max_iterations,
            width: last_step,
        })
    }

    fn solve_bracketed(&self, tau: f64) -> Result<f64> {
        let tol = self.solver.residual_tol;
        let f_lo = self.gap_function(tau, 0.0)?;
        if f_lo <= 0.0 {
            if -f_lo <= tol {
                return Ok(0.0);
            }
            return Err(GapError::BracketFailure {
                tau,
                reason: format!("F(tau, 0) = {f_lo:e} <= 0"),
            });
        }

        let y0 = self.domain.delta0 * self.domain.delta0;
        let mut hi = y0;
        let mut f_hi = self.gap_function(tau, hi)?;
        for widen in [1e-9, 1e-6, 1e-3, 0.5, 0.99] {
            if f_hi < 0.0 {
                break;
            }
            hi = y0 * (1.0 + widen);
            f_hi = self.gap_function(tau, hi)?;
        }
        if f_hi >= 0.0 {
            return Err(GapError::BracketFailure {
                tau,
                reason: format!("F(tau, {hi:e}) = {f_hi:e} >= 0"),
            });
        }

        let y_tol = self.solver.y_tol;
        let root = brent(
            |y| self.gap_function(tau, y),
            0.0,
            hi,
            f_lo,
            f_hi,
            |y| y_tol * y.abs() + f64::MIN_POSITIVE,
            self.solver.max_iterations,
        )?;
        Ok(root.x)
    }

    /// Solves `F(τ, y) = 0` for `y` at reduced temperature `τ`. Returns
    /// `(y, |F|)`.
    pub fn solve_reduced(&self, tau: f64) -> Result<(f64, f64)> {
        if !(tau >= 0.0 && tau <= self.domain.tau_c) {
            return Err(GapError::Domain(format!(
                "tau = {tau} outside [0, tau_c = {}]",
                self.domain.tau_c
            )));
        }
        let y = match self.locate(tau) {
            Location::Zero => {
                let y0 = self.domain.delta0 * self.domain.delta0;
                return Ok((y0, self.residual_at(0.0, y0)?));
            }
            Location::Critical => return Ok((0.0, self.residual_at(self.domain.tau_c, 0.0)?)),
            Location::Interior if tau <= COLD_FRACTION * self.domain.tau_c => {
                match self.solve_cold(tau) {
                    Ok(y) => y,
                    Err(_) => self.solve_bracketed(tau)?,
                }
            }
            Location::Interior => self.solve_bracketed(tau)?,
        };
        let residual = self.residual_at(tau, y)?;
        if residual > self.solver.residual_tol {
            return Err(GapError::ResidualTooLarge {
                tau,
                residual,
                tol: self.solver.residual_tol,
            });
        }
        Ok((y, residual))
    }

    /// `f(T)` at a physical temperature `0 ≤ T ≤ T_c`.
    pub fn solve(&self, temperature: f64) -> Result<GapSolution> {
        let tau = self.reduce_checked(temperature)?;
        let (y, residual) = self.solve_reduced(tau)?;
        let w = self.params.debye_energy;
        let d0_sq = self.delta0_squared();
        let (f, delta) = match self.locate(tau) {
            Location::Zero => (d0_sq, self.delta0()),
            Location::Critical => (0.0, 0.0),
            Location::Interior => {
                let f = (y * w * w).min(d0_sq);
                (f, f.sqrt())
            }
        };
        Ok(GapSolution {
            temperature,
            tau,
            y,
            f,
            delta,
            residual,
        })
    }

    fn edge_integrals(&self) -> Result<KernelIntegrals> {
        KernelIntegrals::at(self.domain.tau_c, 0.0, &self.quad)
    }

    /// `f'(T_c)` and `f''(T_c)` from their closed forms in the kernel
    /// integrals at `(T_c, 0)`, where `η₀ = ε/(2τ_c)`.
    pub fn endpoint_derivatives(&self) -> Result<EndpointDerivatives> {
        let k = self.edge_integrals()?;
        let tau_c = self.domain.tau_c;
        let g = k.g;
        let y_prime_tc = 8.0 * tau_c * k.sech2 / g;
        let y_second_tc = 16.0 * (k.eta_tanh_sech2 - k.sech2) / g
            - 32.0 * k.sech2 * k.tanh_sech2_over_eta / (g * g)
            + 8.0 * k.sech2 * k.sech2 * k.cap_g / (g * g * g);
        let (kb, w) = (self.params.boltzmann, self.params.debye_energy);
        Ok(EndpointDerivatives {
            y_prime_tc,
            y_second_tc,
            fprime_tc: kb * w * y_prime_tc,
            fsecond_tc: kb * kb * y_second_tc,
        })
    }

    /// Reduced `(dy/dτ, d²y/dτ²)` at an interior solution, by implicit
    /// differentiation of `F(τ, y(τ)) = 0`.
    pub fn reduced_derivatives_interior(&self, tau: f64, y: f64) -> Result<(f64, f64)> {
        let p = self.domain.point(tau, y)?;
        let pd = gap_equation::partials(&p, &self.params, &self.quad)?;
        if pd.f_y.abs() < 10.0 * f64::EPSILON {
            return Err(GapError::DegenerateDerivative(pd.f_y.abs()));
        }
        let fy = pd.f_y;
        let ft = pd.f_t;
        let first = -ft / fy;
        let second =
            (-pd.f_tt * fy * fy + 2.0 * pd.f_ty * ft * fy - pd.f_yy * ft * ft) / (fy * fy * fy);
        Ok((first, second))
    }

    /// Physical `(f'(T), f''(T))` at a solved point.
    pub fn derivatives(&self, solved: &GapSolution) -> Result<(f64, f64)> {
        let (kb, w) = (self.params.boltzmann, self.params.debye_energy);
        match self.locate(solved.tau) {
            Location::Zero => Ok((0.0, 0.0)),
            Location::Critical => {
                let e = self.endpoint_derivatives()?;
                Ok((e.fprime_tc, e.fsecond_tc))
            }
            Location::Interior => {
                let (d1, d2) = self.reduced_derivatives_interior(solved.tau, solved.y)?;
                Ok((kb * w * d1, kb * kb * d2))
            }
        }
    }

    pub fn f_prime(&self, solved: &GapSolution) -> Result<f64> {
        let (kb, w) = (self.params.boltzmann, self.params.debye_energy);
        match self.locate(solved.tau) {
            Location::Zero => Ok(0.0),
            Location::Critical => {
                let k = self.edge_integrals()?;
                Ok(kb * w * 8.0 * self.domain.tau_c * k.sech2 / k.g)
            }
            Location::Interior => {
                let p = self.domain.point(solved.tau, solved.y)?;
                let ft = gap_equation::d_t(&p, &self.params, &self.quad)?;
                let fy = gap_equation::d_y(&p, &self.params, &self.quad)?;
                if fy.abs() < 10.0 * f64::EPSILON {
                    return Err(GapError::DegenerateDerivative(fy.abs()));
                }
                Ok(kb * w * (-ft / fy))
            }
        }
    }

    pub fn f_second(&self, solved: &GapSolution) -> Result<f64> {
        Ok(self.derivatives(solved)?.1)
    }

    /// Solve plus derivatives.
    pub fn point(&self, temperature: f64) -> Result<GapPoint> {
        let s = self.solve(temperature)?;
        let (f_prime, f_second) = self.derivatives(&s)?;
        Ok(GapPoint {
            temperature: s.temperature,
            tau: s.tau,
            y: s.y,
            f: s.f,
            delta: s.delta,
            f_prime,
            f_second,
            residual: s.residual,
        })
    }

    pub fn constants(&self) -> Result<SweepConstants> {
        let e = self.endpoint_derivatives()?;
        Ok(SweepConstants {
            t_c: self.t_c(),
            tau_c: self.domain.tau_c,
            delta0: self.delta0(),
            delta0_reduced: self.domain.delta0,
            fprime_tc: e.fprime_tc,
            fsecond_tc: e.fsecond_tc,
        })
    }

    /// Solves every grid temperature, in parallel when the `parallel`
    /// feature is enabled.
    pub fn sweep(&self, grid: &Grid) -> Result<SweepResult> {
        let temps = grid.temperatures(self.t_c())?;
        let points = parallel::map_ordered(&temps, |_, &t| self.point(t));
        self.collect_sweep(points)
    }

    /// [`GapProblem::sweep`] on the calling thread only.
    pub fn sweep_sequential(&self, grid: &Grid) -> Result<SweepResult> {
        let temps = grid.temperatures(self.t_c())?;
        let points = parallel::map_sequential(&temps, |_, &t| self.point(t));
        self.collect_sweep(points)
    }

    fn collect_sweep(&self, results: Vec<Result<GapPoint>>) -> Result<SweepResult> {
        let mut points = Vec::with_capacity(results.len());
        let mut failures = Vec::new();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(p) => points.push(p),
                Err(e) => failures.push((i, e)),
            }
        }
        if !failures.is_empty() {
            return Err(GapError::Sweep(failures));
        }
        let d0_sq = self.delta0_squared();
        for (i, w) in points.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            // Ties are only possible where f has rounded to Δ₀².
            let flat_tie = a.f == b.f && a.f == d0_sq;
            if !(b.f < a.f || flat_tie) {
                return Err(GapError::Sweep(vec![(
                    i + 1,
                    GapError::Domain(format!(
                        "f is not decreasing: f({}) = {:e} after f({}) = {:e}",
                        b.temperature, b.f, a.temperature, a.f
                    )),
                )]));
            }
        }
        Ok(SweepResult {
            params: self.params,
            constants: self.constants()?,
            points,
        })
    }
}

/// `−f'(T_c)·(T_c − T)`, the linear law for `f` just below `T_c`.
pub fn asymptote_near_tc(temperature: f64, constants: &SweepConstants) -> f64 {
    -constants.fprime_tc * (constants.t_c - temperature)
}

/// `f(T)` divided by [`asymptote_near_tc`]; the limit `1` is returned at `T_c`.
pub fn asymptote_ratio(point: &GapPoint, constants: &SweepConstants) -> f64 {
    let a = asymptote_near_tc(point.temperature, constants);
    if a == 0.0 && point.f == 0.0 {
        1.0
    } else {
        point.f / a
    }
}

/// A derivative that may diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Slope {
    Finite(f64),
    Divergent,
}

impl Slope {
    pub fn finite(self) -> Option<f64> {
        match self {
            Slope::Finite(v) => Some(v),
            Slope::Divergent => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaDerivatives {
    pub delta: f64,
    pub delta_prime: Slope,
    pub delta_second: Slope,
}

/// `Δ = √f` with `Δ' = f'/(2√f)` and `Δ'' = f''/(2√f) − f'²/(4f^{3/2})`.
/// At `T = T_c` (`f = 0`) both derivatives are reported as divergent.
pub fn delta_and_derivative(point: &GapPoint) -> DeltaDerivatives {
    if point.f <= 0.0 {
        return DeltaDerivatives {
            delta: 0.0,
            delta_prime: Slope::Divergent,
            delta_second: Slope::Divergent,
        };
    }
    if point.temperature == 0.0 {
        return DeltaDerivatives {
            delta: point.delta,
            delta_prime: Slope::Finite(0.0),
            delta_second: Slope::Finite(0.0),
        };
    }
    let root = point.f.sqrt();
    let first = point.f_prime / (2.0 * root);
    let second =
        point.f_second / (2.0 * root) - point.f_prime * point.f_prime / (4.0 * point.f * root);
    DeltaDerivatives {
        delta: root,
        delta_prime: Slope::Finite(first),
        delta_second: Slope::Finite(second),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // 80-digit references for lambda = 0.3 (reduced units)
    const TAU_C_03: f64 = 0.040_449_525_190_890_079_793_8;
    const Y_HALF_TC_03: f64 = 0.004_674_089_332_531_656_321;
    const YP_TC_03: f64 = -0.381_022_158_242_717_772_155;
    const YPP_TC_03: f64 = -15.475_755_612_957_752_777;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn problem(coupling: f64) -> GapProblem {
        GapProblem::new(
            MaterialParams::reduced(coupling).unwrap(),
            SolverConfig::default(),
            QuadratureConfig::new(1e-15, 1e-13, 60).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn delta0_values() {
        let p = MaterialParams::reduced(1.0 / 1f64.asinh()).unwrap();
        assert_eq!(delta0(&p), 1.0);
        assert!(rel(reduced_delta0(0.3), 0.071_438_902_256_246_705_463) < 1e-15);
        let tiny = reduced_delta0(1.0 / 720.0);
        assert!(tiny > 0.0 && tiny < 1e-300);
        // monotone in the coupling
        let mut prev = 0.0;
        for i in 1..100 {
            let d = reduced_delta0(i as f64 * 0.02);
            assert!(d > prev);
            prev = d;
        }
        // overflow branch agrees with the direct one where both are valid
        assert!(rel(inverse_sinh(700.0), 2.0 * (-700f64).exp()) < 1e-15);
    }

    #[test]
    fn tc_integral_branches_agree() {
        let qc = QuadratureConfig::new(1e-15, 1e-13, 60).unwrap();
        let below = tc_integral(TC_LOG_SPLIT, &qc).unwrap();
        let direct = integrate(
            |s| 80.0 * kernels::tanh_over_eta(Eta::from_nonneg(80.0 * s)),
            &qc,
        )
        .unwrap()
        .value;
        let split = tc_integral(80.0, &qc).unwrap();
        assert!((split - direct).abs() < 1e-12);
        assert!((split - below - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn transition_temperature_reference() {
        let tau_c = reduced_transition_temperature(
            0.3,
            &SolverConfig::default(),
            &QuadratureConfig::new(1e-15, 1e-13, 60).unwrap(),
        )
        .unwrap();
        assert!(rel(tau_c, TAU_C_03) < 1e-12);
    }

    #[test]
    fn weak_coupling_has_no_bracket() {
        let err = reduced_transition_temperature(
            0.001,
            &SolverConfig::default(),
            &QuadratureConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err.name(), "NoBracket");
    }

    #[test]
    fn physical_units_scale() {
        let reduced = problem(0.3);
        let p = GapProblem::new(
            MaterialParams::new(0.3, 30.0, 0.086_173_332_62).unwrap(),
            SolverConfig::default(),
            QuadratureConfig::new(1e-15, 1e-13, 60).unwrap(),
        )
        .unwrap();
        assert_eq!(p.domain().tau_c, reduced.domain().tau_c);
        assert!(rel(p.t_c(), TAU_C_03 * 30.0 / 0.086_173_332_62) < 1e-12);
        assert!(rel(p.delta0(), 30.0 * 0.071_438_902_256_246_705_463) < 1e-15);
    }

    #[test]
    fn endpoints_are_exact() {
        let p = problem(0.3);
        let zero = p.solve(0.0).unwrap();
        assert_eq!(zero.f, p.delta0() * p.delta0());
        assert_eq!(zero.delta, p.delta0());
        let top = p.solve(p.t_c()).unwrap();
        assert_eq!(top.f, 0.0);
        assert!(zero.residual < 1e-12 && top.residual < 1e-12);
        assert_eq!(p.f_prime(&zero).unwrap(), 0.0);
        assert_eq!(p.f_second(&zero).unwrap(), 0.0);
        assert!(p.solve(p.t_c() * 1.01).is_err());
        assert!(p.solve(-1.0).is_err());
    }

    #[test]
    fn half_tc_reference() {
        let p = problem(0.3);
        let s = p.solve(0.5 * p.t_c()).unwrap();
        assert!(rel(s.y, Y_HALF_TC_03) < 1e-11, "{}", s.y);
        assert!(s.residual <= 1e-9);
    }

    #[test]
    fn cold_and_bracketed_branches_agree() {
        let p = problem(0.3);
        for frac in [0.2, 0.25, 0.3] {
            let tau = frac * p.domain().tau_c;
            let cold = p.solve_cold(tau).unwrap();
            let bracket = p.solve_bracketed(tau).unwrap();
            assert!(rel(cold, bracket) < 1e-12, "{frac}: {cold} vs {bracket}");
        }
    }

    #[test]
    fn endpoint_derivative_references() {
        let p = problem(0.3);
        let e = p.endpoint_derivatives().unwrap();
        assert!(rel(e.y_prime_tc, YP_TC_03) < 1e-10);
        assert!(rel(e.y_second_tc, YPP_TC_03) < 1e-8);
        let top = p.solve(p.t_c()).unwrap();
        assert_eq!(p.f_prime(&top).unwrap(), e.fprime_tc);
        assert!(e.fprime_tc < 0.0);
    }

    #[test]
    fn f_prime_matches_derivatives() {
        let p = problem(0.3);
        let s = p.solve(0.7 * p.t_c()).unwrap();
        let a = p.f_prime(&s).unwrap();
        let (b, _) = p.derivatives(&s).unwrap();
        assert!(rel(a, b) < 1e-14);
    }

    #[test]
    fn asymptote_basics() {
        let p = problem(0.3);
        let c = p.constants().unwrap();
        assert_eq!(asymptote_near_tc(c.t_c, &c), 0.0);
        assert!(asymptote_near_tc(0.5 * c.t_c, &c) > 0.0);
        let top = p.point(c.t_c).unwrap();
        assert_eq!(asymptote_ratio(&top, &c), 1.0);
    }

    #[test]
    fn delta_derivatives_at_ends() {
        let p = problem(0.3);
        let zero = delta_and_derivative(&p.point(0.0).unwrap());
        assert_eq!(zero.delta, p.delta0());
        assert_eq!(zero.delta_prime, Slope::Finite(0.0));
        assert_eq!(zero.delta_second, Slope::Finite(0.0));
        let top = delta_and_derivative(&p.point(p.t_c()).unwrap());
        assert_eq!(top.delta, 0.0);
        assert_eq!(top.delta_prime, Slope::Divergent);
        let mid = delta_and_derivative(&p.point(0.5 * p.t_c()).unwrap());
        assert!(mid.delta_prime.finite().unwrap() < 0.0);
    }

    #[test]
    fn grids() {
        let t = Grid::Chebyshev(5).temperatures(2.0).unwrap();
        assert_eq!(t[0], 0.0);
        assert_eq!(t[4], 2.0);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(
            Grid::Uniform(3).temperatures(2.0).unwrap(),
            vec![0.0, 1.0, 2.0]
        );
        assert!(Grid::Uniform(1).temperatures(2.0).is_err());
        assert!(Grid::Explicit(vec![0.0, 0.5, 0.5])
            .temperatures(1.0)
            .is_err());
        assert!(Grid::Explicit(vec![0.0, 1.5]).temperatures(1.0).is_err());
    }

    #[test]
    fn three_point_sweep() {
        let p = problem(0.3);
        let r = p
            .sweep(&Grid::Explicit(vec![0.0, 0.5 * p.t_c(), p.t_c()]))
            .unwrap();
        assert_eq!(r.points.len(), 3);
        assert_eq!(r.points[0].f, p.delta0() * p.delta0());
        assert_eq!(r.points[2].f, 0.0);
        assert!(r.points[1].f < r.points[0].f && r.points[2].f < r.points[1].f);
    }

    #[test]
    fn sweep_is_reproducible() {
        let p = problem(0.5);
        let a = p.sweep(&Grid::Chebyshev(12)).unwrap();
        let b = p.sweep(&Grid::Chebyshev(12)).unwrap();
        let c = p.sweep_sequential(&Grid::Chebyshev(12)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn invalid_configs() {
        let mut s = SolverConfig {
            y_tol: 1e-17,
            ..SolverConfig::default()
        };
        assert!(s.validate().is_err());
        s = SolverConfig::default();
        s.max_iterations = 0;
        assert!(s.validate().is_err());
    }
}
