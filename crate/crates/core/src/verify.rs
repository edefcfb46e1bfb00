//! Self-check suite run by the `verify` command.
//!
//! Every check measures one number and compares it with a limit, so that a
//! report can show how much room each property has. The suite re-solves the
//! problem with tight quadrature settings so that finite-difference checks are
//! not swamped by integration noise.

use serde::Serialize;

use crate::error::Result;
use crate::gap_equation::{self, MaterialParams};
use crate::kernels::{self, Eta};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::solver::{delta_and_derivative, GapProblem, Grid, SolverConfig};

/// Quadrature settings used by the suite.
pub const VERIFY_QUADRATURE: QuadratureConfig = QuadratureConfig {
    abs_tol: 1e-15,
    rel_tol: 1e-13,
    max_subdivisions: 60,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    /// Measured value; passes when `measured <= limit`.
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(id: u32, name: &'static str, measured: f64, limit: f64) -> Self {
        Check {
            id,
            name,
            measured,
            limit,
            passed: measured <= limit,
        }
    }

    /// `limit − measured`; negative on failure.
    pub fn margin(&self) -> f64 {
        self.limit - self.measured
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn count(flags: impl Iterator<Item = bool>) -> f64 {
    flags.filter(|&bad| bad).count() as f64
}

/// Richardson extrapolation of `d(h)` for a sequence `h, h/2, h/4, …` with
/// an error expansion in powers of `h^step`.
fn richardson(values: &[f64], step: i32) -> f64 {
    let mut table = values.to_vec();
    let mut factor = 2f64.powi(step);
    while table.len() > 1 {
        table = table
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 2f64.powi(step);
    }
    table[0]
}

fn kernel_checks(out: &mut Vec<Check>) {
    let grid_bad = count((0..200).map(|i| {
        let x = 10f64.powf(-6.0 + 8.0 * i as f64 / 199.0);
        kernels::fn_g(Eta::from_nonneg(x)) >= 0.0
    }));
    let exact_bad = count(
        [
            kernels::fn_g(Eta::from_nonneg(0.0)) != -2.0 / 3.0,
            kernels::fn_G(Eta::from_nonneg(0.0)) != -16.0 / 15.0,
        ]
        .into_iter(),
    );
    out.push(Check::at_most(
        1,
        "kernel exactness (violations)",
        grid_bad + exact_bad,
        0.0,
    ));

    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let x = 0.1 + (20.0 - 0.1) * i as f64 / 199.0;
        let h = 1e-5 * x;
        let fd = (kernels::fn_g(Eta::from_nonneg(x + h)) - kernels::fn_g(Eta::from_nonneg(x - h)))
            / (2.0 * h);
        let eg = x * kernels::fn_G(Eta::from_nonneg(x));
        worst = worst.max((fd + eg).abs() / eg.abs().max(1.0));
    }
    out.push(Check::at_most(
        2,
        "kernel calculus g' = -eta G",
        worst,
        1e-6,
    ));
}

fn quadrature_checks(out: &mut Vec<Check>) -> Result<()> {
    let cfg = QuadratureConfig::default();
    let mut honesty: f64 = 0.0;
    let mut estimate: f64 = 0.0;
    let c = integrate(|_| 1.0, &cfg)?;
    honesty = honesty.max((c.value - 1.0).abs() - c.error_estimate);
    estimate = estimate.max(c.error_estimate);
    for tau in [0.25, 0.05, 0.01, 1e-3] {
        let r = integrate(|e: f64| 1.0 / (e / (2.0 * tau)).cosh().powi(2), &cfg)?;
        let exact = 2.0 * tau * (1.0 / (2.0 * tau)).tanh();
        honesty = honesty.max((r.value - exact).abs() - r.error_estimate);
        estimate = estimate.max(r.error_estimate);
    }
    out.push(Check::at_most(
        3,
        "quadrature |err| - estimate",
        honesty,
        0.0,
    ));
    out.push(Check::at_most(
        3,
        "quadrature error estimate",
        estimate,
        1e-10,
    ));
    Ok(())
}

fn boundary_checks(p: &GapProblem, out: &mut Vec<Check>) -> Result<()> {
    let d = p.domain();
    let params = p.params();
    let qc = p.quadrature_config();
    let at_tc = gap_equation::value(&d.point(d.tau_c, 0.0)?, params, qc)?;
    let at_zero = gap_equation::value(&d.point(0.0, d.delta0 * d.delta0)?, params, qc)?;
    out.push(Check::at_most(
        4,
        "boundary roots |F|",
        at_tc.abs().max(at_zero.abs()),
        1e-9,
    ));
    let unit = crate::solver::reduced_delta0(1.0 / 1f64.asinh());
    out.push(Check::at_most(
        4,
        "delta0 = 1 at 1/asinh(1) (|diff|)",
        (unit - 1.0).abs(),
        0.0,
    ));

    let y0: f64 = 0.25;
    let quad = -0.5 * integrate(|e| (e * e + y0).powf(-1.5), qc)?.value;
    let closed = gap_equation::d_y_zero_temperature(y0);
    out.push(Check::at_most(
        5,
        "zero-temperature F_Y closed form",
        (quad - closed).abs(),
        1e-10,
    ));
    Ok(())
}

fn sweep_checks(p: &GapProblem, out: &mut Vec<Check>) -> Result<()> {
    let sweep = p.sweep(&Grid::Chebyshev(64))?;
    let pts = &sweep.points;
    let d0_sq = p.delta0() * p.delta0();
    let mut bad = count(pts.windows(2).map(|w| w[1].f >= w[0].f || w[1].f.is_nan()));
    bad += count([pts[0].f != d0_sq, pts[pts.len() - 1].f != 0.0].into_iter());
    out.push(Check::at_most(
        6,
        "64-point sweep monotone, exact ends (violations)",
        bad,
        0.0,
    ));

    let lambda = p.params().coupling;
    let mut worst: f64 = 0.0;
    for pt in pts.iter().filter(|pt| pt.temperature > 0.0) {
        let integral = gap_equation::kernel_integral(pt.tau, pt.y, p.quadrature_config())?;
        worst = worst.max((lambda * integral - 1.0).abs());
    }
    out.push(Check::at_most(
        7,
        "gap-equation residual |lambda I - 1|",
        worst,
        1e-8,
    ));
    Ok(())
}

fn derivative_checks(p: &GapProblem, out: &mut Vec<Check>) -> Result<()> {
    let t_c = p.t_c();
    let f = |t: f64| -> Result<f64> { Ok(p.solve(t)?.f) };
    let (mut worst1, mut worst2): (f64, f64) = (0.0, 0.0);
    for i in 0..20 {
        let t = t_c * (0.25 + 0.70 * i as f64 / 19.0);
        let pt = p.point(t)?;
        let f0 = pt.f;
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        for k in 0..3 {
            let h = 0.02 * t_c / 2f64.powi(k);
            let (fp, fm) = (f(t + h)?, f(t - h)?);
            d1.push((fp - fm) / (2.0 * h));
            d2.push((fp - 2.0 * f0 + fm) / (h * h));
        }
        worst1 = worst1.max(rel(pt.f_prime, richardson(&d1, 2)));
        worst2 = worst2.max(rel(pt.f_second, richardson(&d2, 2)));
    }
    out.push(Check::at_most(
        8,
        "f' vs central differences (rel)",
        worst1,
        1e-6,
    ));
    out.push(Check::at_most(
        8,
        "f'' vs second differences (rel)",
        worst2,
        1e-5,
    ));

    let e = p.endpoint_derivatives()?;
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for k in 4..=9 {
        let pt = p.point(t_c * (1.0 - 2f64.powi(-k)))?;
        d1.push(pt.f_prime);
        d2.push(pt.f_second);
    }
    out.push(Check::at_most(
        9,
        "f'(T_c) closed form vs extrapolation (rel)",
        rel(e.fprime_tc, richardson(&d1, 1)),
        1e-6,
    ));
    out.push(Check::at_most(
        9,
        "f''(T_c) closed form vs extrapolation (rel)",
        rel(e.fsecond_tc, richardson(&d2, 1)),
        1e-4,
    ));
    out.push(Check::at_most(
        9,
        "f'(T_c) < 0 (value)",
        e.fprime_tc,
        -f64::MIN_POSITIVE,
    ));
    Ok(())
}

fn endpoint_law_checks(p: &GapProblem, out: &mut Vec<Check>) -> Result<()> {
    let c = p.constants()?;
    let t_c = c.t_c;

    // ratio f / (−f'(T_c)(T_c − T)) against 1 ± 5·2^{-k}
    let mut worst: f64 = 0.0;
    let mut previous = f64::INFINITY;
    let mut non_monotone = 0.0;
    for k in 4..=12 {
        let t = t_c * (1.0 - 2f64.powi(-k));
        let dev = (p.solve(t)?.f / crate::solver::asymptote_near_tc(t, &c) - 1.0).abs();
        worst = worst.max(dev / (5.0 * 2f64.powi(-k)));
        if dev >= previous {
            non_monotone += 1.0;
        }
        previous = dev;
    }
    out.push(Check::at_most(
        10,
        "asymptote deviation / (5 2^-k)",
        worst,
        1.0,
    ));
    out.push(Check::at_most(
        10,
        "asymptote improvement (violations)",
        non_monotone,
        0.0,
    ));

    let cold = p.solve(0.05 * t_c)?;
    let d0_sq = c.delta0 * c.delta0;
    out.push(Check::at_most(
        11,
        "flatness |f(0.05 T_c) - D0^2| / D0^2",
        (cold.f - d0_sq).abs() / d0_sq,
        1e-8,
    ));
    let zero = p.point(0.0)?;
    out.push(Check::at_most(
        11,
        "f'(0), f''(0) (max abs)",
        zero.f_prime.abs().max(zero.f_second.abs()),
        0.0,
    ));

    let limit = (-c.fprime_tc).sqrt() / 2.0;
    let mut worst: f64 = 0.0;
    for k in 6..=12 {
        let t = t_c * (1.0 - 2f64.powi(-k));
        let dd = delta_and_derivative(&p.point(t)?);
        let slope = dd.delta_prime.finite().unwrap_or(f64::INFINITY);
        worst = worst.max((slope.abs() * (t_c - t).sqrt() / limit - 1.0).abs());
    }
    out.push(Check::at_most(
        12,
        "|D'| sqrt(T_c - T) vs sqrt(-f'(T_c))/2 (rel)",
        worst,
        0.1,
    ));
    Ok(())
}

/// Dense scan over `y` for the sign change of `F(τ, ·)`, refined by bisection.
fn scan_root(p: &GapProblem, tau: f64) -> Result<f64> {
    let d = p.domain();
    let params = p.params();
    let qc = p.quadrature_config();
    let f = |y: f64| -> Result<f64> { gap_equation::value(&d.point(tau, y)?, params, qc) };
    let top = d.delta0 * d.delta0;
    let n = 2000;
    let mut lo = 0.0;
    let mut f_lo = f(lo)?;
    let mut hi = top;
    for i in 1..=n {
        let y = top * i as f64 / n as f64;
        let fy = f(y)?;
        if fy.signum() != f_lo.signum() {
            hi = y;
            break;
        }
        lo = y;
        f_lo = fy;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        let fm = f(mid)?;
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn oracle_and_scale_checks(p: &GapProblem, out: &mut Vec<Check>) -> Result<()> {
    let tau = 0.5 * p.domain().tau_c;
    let (y, _) = p.solve_reduced(tau)?;
    let scanned = scan_root(p, tau)?;
    out.push(Check::at_most(
        13,
        "bracketing vs dense scan at T_c/2 (rel y)",
        rel(y, scanned),
        1e-8,
    ));

    let params = p.params();
    let doubled =
        MaterialParams::new(params.coupling, 2.0 * params.debye_energy, params.boltzmann)?;
    let q = GapProblem::new(doubled, *p.solver_config(), *p.quadrature_config())?;
    let mut worst = rel(q.t_c(), 2.0 * p.t_c()).max(rel(q.delta0(), 2.0 * p.delta0()));
    for frac in [0.2, 0.5, 0.9] {
        let a = p.solve_reduced(frac * p.domain().tau_c)?.0;
        let b = q.solve_reduced(frac * q.domain().tau_c)?.0;
        worst = worst.max(rel(a, b));
    }
    out.push(Check::at_most(14, "scale covariance (rel)", worst, 1e-12));
    Ok(())
}

/// Runs the whole suite for the coupling and units of `problem`.
pub fn run_suite(problem: &GapProblem) -> Result<Vec<Check>> {
    let p = problem.with_configs(SolverConfig::default(), VERIFY_QUADRATURE)?;
    let mut out = Vec::new();
    kernel_checks(&mut out);
    quadrature_checks(&mut out)?;
    boundary_checks(&p, &mut out)?;
    sweep_checks(&p, &mut out)?;
    derivative_checks(&p, &mut out)?;
    endpoint_law_checks(&p, &mut out)?;
    oracle_and_scale_checks(&p, &mut out)?;
    Ok(out)
}
