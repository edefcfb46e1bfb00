//! Reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's quadrature or root finding: the gap
//! integral is recomputed with fixed composite Gauss–Legendre rules on panels
//! graded geometrically toward `ε = 0`, and roots are found by bisection.

#![allow(dead_code)]

use std::sync::OnceLock;

/// Reference values computed once with 80-digit arithmetic.
pub mod reference {
    pub const TAU_C_01: f64 = 5.147_743_300_599_928_444_69e-5;
    pub const TAU_C_03: f64 = 0.040_449_525_190_890_079_793_802_283_203;
    pub const TAU_C_05: f64 = 0.153_513_470_718_560_338_470;
    pub const DELTA0_01: f64 = 9.079_985_971_212_216_283_37e-5;
    pub const DELTA0_03: f64 = 0.071_438_902_256_246_705_463_240_755_702;
    pub const DELTA0_05: f64 = 0.275_720_564_771_783_207_758;
    /// `y(τ_c/2)` at λ = 0.3.
    pub const Y_HALF_03: f64 = 0.004_674_089_332_531_656_321_026_313_704_8;
    /// `dy/dτ` and `d²y/dτ²` at `τ_c`, λ = 0.3.
    pub const YP_TC_03: f64 = -0.381_022_158_242_717_772_155_32;
    pub const YPP_TC_03: f64 = -15.475_755_612_957_752_777_109;
    pub const G_AT_1: f64 = -0.341_619_814_341_738_818_72;
    pub const G_AT_03: f64 = -0.621_167_551_985_264_625_07;
    pub const CAP_G_AT_2: f64 = -0.060_103_220_043_750_365_407;
    pub const CAP_G_AT_03: f64 = -0.958_108_095_751_252_401_71;
}

const GL_ORDER: usize = 20;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

/// `∫_a^b φ` split into `pieces` equal panels of `GL_ORDER` points each.
pub fn gl(phi: &dyn Fn(f64) -> f64, a: f64, b: f64, pieces: usize) -> f64 {
    let w = (b - a) / pieces as f64;
    let mut sum = 0.0;
    for j in 0..pieces {
        let lo = a + j as f64 * w;
        let (c, h) = (lo + 0.5 * w, 0.5 * w);
        for &(x, wt) in gauss_legendre() {
            sum += wt * h * phi(c + h * x);
        }
    }
    sum
}

/// `∫_0^1 φ` on panels `[0, s], [s, 2s], [2s, 4s], …` with `s = scale/64`.
pub fn graded(phi: &dyn Fn(f64) -> f64, scale: f64) -> f64 {
    let mut edges = vec![0.0];
    let mut e = (scale / 64.0).min(0.5);
    while e < 1.0 {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(1.0);
    edges.windows(2).map(|w| gl(phi, w[0], w[1], 4)).sum()
}

/// `∫₀¹ tanh(√(ε²+y)/(2τ))/√(ε²+y) dε`.
pub fn gap_integral(tau: f64, y: f64) -> f64 {
    let phi = |e: f64| {
        let s = (e * e + y).sqrt();
        if tau == 0.0 {
            1.0 / s
        } else if s == 0.0 {
            1.0 / (2.0 * tau)
        } else {
            (s / (2.0 * tau)).tanh() / s
        }
    };
    let scale = match (tau > 0.0, y > 0.0) {
        (true, true) => (2.0 * tau).min(y.sqrt()),
        (true, false) => 2.0 * tau,
        _ => y.sqrt(),
    };
    graded(&phi, scale)
}

/// Oracle for `F(τ, y) = ∫ h − 1/λ`.
pub fn gap_function(lambda: f64, tau: f64, y: f64) -> f64 {
    gap_integral(tau, y) - 1.0 / lambda
}

pub fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        let fm = f(mid);
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Oracle `τ_c` from `∫₀^{1/(2τ_c)} tanh(η)/η dη = 1/λ`, bisected in `ln τ`.
pub fn transition_oracle(lambda: f64) -> f64 {
    let integral = |x: f64| -> f64 {
        let upto = x.min(40.0);
        let phi = |s: f64| if s == 0.0 { 1.0 } else { s.tanh() / s };
        let mut sum = 0.0;
        let pieces = (upto.ceil() as usize).max(1) * 2;
        sum += gl(&phi, 0.0, upto, pieces);
        if x > 40.0 {
            sum += (x / 40.0).ln();
        }
        sum
    };
    let f = |ln_tau: f64| integral(0.5 / ln_tau.exp()) - 1.0 / lambda;
    bisect(&f, (1e-250f64).ln(), 10f64.ln()).exp()
}

/// Dense scan of `y ↦ F(τ, y)` at spacing `step` over `[0, top]`, returning
/// every bracket with a sign change.
pub fn sign_changes(lambda: f64, tau: f64, top: f64, step: f64) -> Vec<(f64, f64)> {
    let n = (top / step).ceil() as usize;
    let mut out = Vec::new();
    let mut prev_y = 0.0;
    let mut prev = gap_function(lambda, tau, 0.0);
    for i in 1..=n {
        let y = (i as f64 * step).min(top);
        let v = gap_function(lambda, tau, y);
        if (v > 0.0) != (prev > 0.0) {
            out.push((prev_y, y));
        }
        prev_y = y;
        prev = v;
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Richardson table for samples at `h, h/2, h/4, …` with error terms in
/// powers `h^p, h^{2p}, …`.
pub fn richardson(samples: &[f64], p: i32) -> f64 {
    let mut t = samples.to_vec();
    let mut factor = 2f64.powi(p);
    while t.len() > 1 {
        t = t
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 2f64.powi(p);
    }
    t[0]
}
