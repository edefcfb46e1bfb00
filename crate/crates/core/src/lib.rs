//! Numerical solution of the continuum BCS gap equation
//!
//! ```text
//! 1 = λ ∫₀^{ħω_D} tanh(√(ξ²+Δ²)/(2k_BT)) / √(ξ²+Δ²) dξ
//! ```
//!
//! for the squared gap `f(T) = Δ(T)²` on `0 ≤ T ≤ T_c`, with `f'` and `f''`
//! from implicit differentiation and closed forms at both endpoints.
//!
//! ```
//! use bcs_gap::{GapProblem, MaterialParams, QuadratureConfig, SolverConfig};
//!
//! let problem = GapProblem::new(
//!     MaterialParams::reduced(0.3).unwrap(),
//!     SolverConfig::default(),
//!     QuadratureConfig::default(),
//! )
//! .unwrap();
//! let half = problem.point(0.5 * problem.t_c()).unwrap();
//! assert!(half.f > 0.0 && half.f < problem.delta0().powi(2));
//! assert!(half.f_prime < 0.0);
//! ```

pub mod error;
pub mod gap_equation;
pub mod kernels;
pub mod parallel;
pub mod quadrature;
pub mod roots;
pub mod solver;
pub mod verify;

pub use error::{GapError, Result};
pub use gap_equation::{MaterialParams, PartialDerivatives, ReducedDomain, ReducedPoint, Region};
pub use quadrature::{
    integrate, integrate_breakpoints, integrate_interval, QuadratureConfig, QuadratureResult,
};
pub use solver::{
    asymptote_near_tc, asymptote_ratio, delta0, delta_and_derivative, transition_temperature,
    DeltaDerivatives, GapPoint, GapProblem, GapSolution, Grid, Slope, SolverConfig, SweepConstants,
    SweepResult,
};
