//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|value|)`. No interval is bisected more
//! than `max_subdivisions` times; when every interval that is still too coarse
//! has hit that depth the call fails with [`GapError::ToleranceNotReached`]
//! instead of returning an untrusted value.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{GapError, Result};

/// Hard cap on the number of live intervals, independent of depth.
const MAX_SEGMENTS: usize = 50_000;

// Kronrod abscissae on [-1, 1] (non-negative half); odd indices are the
// 10-point Gauss abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any interval.
    pub max_subdivisions: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 60,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: u32) -> Result<Self> {
        let cfg = QuadratureConfig {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(GapError::InvalidConfig(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(GapError::InvalidConfig(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(GapError::InvalidConfig(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// The acceptance threshold for an integral of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
    /// Bisection cannot lower an error that is pure rounding.
    at_floor: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest error first; ties broken by position for run-to-run stability.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One application of the 21-point Kronrod rule with the QUADPACK error
/// heuristic. Returns `(value, error, at_roundoff_floor)`.
fn gk21<F: Fn(f64) -> f64>(phi: &F, a: f64, b: f64) -> (f64, f64, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = phi(center);

    let mut res_k = WGK[10] * f_center;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = phi(center - dx);
        let f2 = phi(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();

    if res_asc != 0.0 && error != 0.0 {
        let scale = (200.0 * error / res_asc).powf(1.5);
        error = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    let mut at_floor = false;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        at_floor = error <= floor;
        error = error.max(floor);
    }

    (value, error, at_floor)
}

fn segment<F: Fn(f64) -> f64>(phi: &F, a: f64, b: f64, depth: u32) -> Result<Segment> {
    let (value, error, at_floor) = gk21(phi, a, b);
    if !(value.is_finite() && error.is_finite()) {
        return Err(GapError::Domain(format!(
            "integrand is not finite on [{a:e}, {b:e}]"
        )));
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        depth,
        at_floor,
    })
}

/// Integrates `phi` over the reduced energy interval `[0, 1]`.
pub fn integrate<F: Fn(f64) -> f64>(phi: F, config: &QuadratureConfig) -> Result<QuadratureResult> {
    integrate_interval(phi, 0.0, 1.0, config)
}

/// Integrates `phi` over `[a, b]` with `a < b`.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    phi: F,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult> {
    integrate_breakpoints(phi, &[a, b], config)
}

/// Integrates `phi` over `[points[0], points[last]]`, starting from the
/// partition given by the strictly increasing `points`.
pub fn integrate_breakpoints<F: Fn(f64) -> f64>(
    phi: F,
    points: &[f64],
    config: &QuadratureConfig,
) -> Result<QuadratureResult> {
    config.validate()?;
    if points.len() < 2
        || points.iter().any(|p| !p.is_finite())
        || points.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(GapError::Domain(format!(
            "breakpoints {points:?} do not form a finite forward partition"
        )));
    }

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    for w in points.windows(2) {
        heap.push(segment(&phi, w[0], w[1], 0)?);
    }
    let mut subdivisions = 0usize;

    loop {
        let (value, error) = totals(heap.iter().chain(frozen.iter()));
        let target = config.target(value);
        if error <= target {
            let mut all: Vec<Segment> = heap.into_iter().chain(frozen).collect();
            all.sort_by(|x, y| x.a.total_cmp(&y.a));
            let (value, error) = totals(all.iter());
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                subdivisions_used: subdivisions,
            });
        }

        let worst = match heap.pop() {
            Some(s) if heap.len() + frozen.len() < MAX_SEGMENTS => s,
            _ => {
                return Err(GapError::ToleranceNotReached {
                    value,
                    error_estimate: error,
                    target,
                    subdivisions,
                })
            }
        };

        let mid = 0.5 * (worst.a + worst.b);
        let depth = worst.depth + 1;
        subdivisions += 1;
        for child in [
            segment(&phi, worst.a, mid, depth)?,
            segment(&phi, mid, worst.b, depth)?,
        ] {
            if child.at_floor
                || depth >= config.max_subdivisions
                || !(worst.a < mid && mid < worst.b)
            {
                frozen.push(child);
            } else {
                heap.push(child);
            }
        }
    }
}

fn totals<'a>(segments: impl Iterator<Item = &'a Segment>) -> (f64, f64) {
    segments.fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}
