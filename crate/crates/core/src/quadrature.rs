//! Adaptive Gauss–Kronrod integration on finite and semi-infinite intervals.
//!
//! Every energy in this crate is an integral over imaginary frequency (and
//! sometimes over a second wave-vector variable) whose integrand decays
//! exponentially. The integrators here are globally adaptive: the panel with
//! the largest error estimate is bisected until the total estimate meets
//! `max(rel_tol * |value|, abs_tol)` or the subdivision budget runs out.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand is not finite at x = {x:e} (value {value})")]
    NonFinite { x: f64, value: f64 },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Rate of the exponential falloff of a semi-infinite integrand,
    /// `f(x) ~ exp(-decay_scale * (x - a))`. Sets where `[a, inf)` is folded
    /// onto the unit interval.
    pub decay_scale: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_subdivisions: 2000,
            decay_scale: 1.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0) {
            return Err(QuadError::InvalidConfig("rel_tol must be > 0"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(QuadError::InvalidConfig("abs_tol must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadError::InvalidConfig("max_subdivisions must be >= 1"));
        }
        if !(self.decay_scale > 0.0 && self.decay_scale.is_finite()) {
            return Err(QuadError::InvalidConfig("decay_scale must be finite and > 0"));
        }
        Ok(())
    }

    pub fn with_decay_scale(mut self, decay_scale: f64) -> Self {
        self.decay_scale = decay_scale;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Configuration for an integral nested inside another one: an order of
    /// magnitude tighter so the outer tolerance dominates.
    pub fn nested(&self) -> Self {
        Self {
            rel_tol: (self.rel_tol * 0.1).max(1e-14),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl IntegralResult {
    /// Combines the provenance of two independent integrals whose values are
    /// added (`sign = 1`) or subtracted (`sign = -1`).
    pub fn combine(self, other: IntegralResult, sign: f64) -> IntegralResult {
        IntegralResult {
            value: self.value + sign * other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            converged: self.converged && other.converged,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scaled(self, factor: f64) -> IntegralResult {
        IntegralResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
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
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_330_770,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn checked<F, E>(f: &mut F, x: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadError::NonFinite { x, value: v }.into())
    }
}

fn gauss_kronrod<F, E>(f: &mut F, a: f64, b: f64) -> Result<Panel, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = (fc * WGK[10]).abs();
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        kronrod += w * (f1 + f2);
        abs_sum += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let roundoff = 50.0 * f64::EPSILON * abs_sum * half.abs();
    let error = ((kronrod - gauss) * half).abs().max(roundoff);
    Ok(Panel { a, b, value, error })
}

const EVALS_PER_PANEL: usize = 21;

fn adaptive<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    cfg.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidInterval { a, b }.into());
    }
    let first = gauss_kronrod(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = EVALS_PER_PANEL;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    let tolerance = |v: f64| (cfg.rel_tol * v.abs()).max(cfg.abs_tol);
    while error > tolerance(value) && subdivisions < cfg.max_subdivisions {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        // Panel below floating-point resolution; further bisection is noise.
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs()
        {
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        evaluations += 2 * EVALS_PER_PANEL;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(IntegralResult {
        value,
        error_estimate: error,
        converged: error <= tolerance(value),
        evaluations,
    })
}

/// `∫_a^b f(x) dx` for a fallible integrand; the integrand's own error type
/// is passed through.
pub fn try_integrate_finite<F, E>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    adaptive(f, a, b, cfg)
}

/// `∫_a^b f(x) dx`. A non-finite value at any node is reported with its
/// abscissa; integrable endpoint singularities are fine because the nodes
/// never touch the endpoints.
pub fn integrate_finite<F>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    adaptive(|x| Ok::<f64, QuadError>(f(x)), a, b, cfg)
}

/// `∫_a^∞ f(x) dx` for a fallible integrand, via
/// `x = a + t / (s (1 - t))` with `s = cfg.decay_scale`.
pub fn try_integrate_semi_infinite<F, E>(
    mut f: F,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    cfg.validate()?;
    if !a.is_finite() {
        return Err(QuadError::InvalidInterval { a, b: f64::INFINITY }.into());
    }
    let s = cfg.decay_scale;
    let mapped = |t: f64| -> Result<f64, E> {
        let one_minus = 1.0 - t;
        if one_minus <= 0.0 {
            return Ok(0.0);
        }
        let x = a + t / (s * one_minus);
        if x.is_infinite() {
            return Ok(0.0);
        }
        let v = f(x)?;
        if !v.is_finite() {
            return Err(QuadError::NonFinite { x, value: v }.into());
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(v / (s * one_minus * one_minus))
    };
    adaptive(mapped, 0.0, 1.0, cfg)
}

/// `∫_a^∞ f(x) dx` for an integrand decaying roughly like
/// `exp(-cfg.decay_scale * x)` (algebraic decay faster than `1/x` also works).
pub fn integrate_semi_infinite<F>(
    mut f: F,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok::<f64, QuadError>(f(x)), a, cfg)
}

/// `∫_0^∞ du ∫_u^∞ dκ f(u, κ)`, evaluated as nested semi-infinite rules in
/// `(u, t = κ - u)`. The inner integrals run at a tighter tolerance; if any of
/// them fails to converge the outer result is flagged as not converged.
pub fn try_integrate_2d_wedge<F, E>(
    mut f: F,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, E>
where
    F: FnMut(f64, f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    cfg.validate()?;
    let inner_cfg = cfg.nested();
    // The outer rule gets half the budget; the inner errors take the rest.
    let outer_cfg = cfg.with_rel_tol(0.5 * cfg.rel_tol);
    let inner_ok = Cell::new(true);
    let inner_evals = Cell::new(0usize);
    let worst_inner_rel = Cell::new(0.0f64);
    let outer = try_integrate_semi_infinite(
        |u| -> Result<f64, E> {
            let r = try_integrate_semi_infinite(|t| f(u, u + t), 0.0, &inner_cfg)?;
            inner_ok.set(inner_ok.get() && r.converged);
            inner_evals.set(inner_evals.get() + r.evaluations);
            if r.value != 0.0 {
                worst_inner_rel.set(worst_inner_rel.get().max(r.error_estimate / r.value.abs()));
            }
            Ok(r.value)
        },
        0.0,
        &outer_cfg,
    )?;
    let error_estimate = outer.error_estimate + worst_inner_rel.get() * outer.value.abs();
    Ok(IntegralResult {
        value: outer.value,
        error_estimate,
        converged: inner_ok.get()
            && error_estimate <= (cfg.rel_tol * outer.value.abs()).max(cfg.abs_tol),
        evaluations: outer.evaluations + inner_evals.get(),
    })
}

pub fn integrate_2d_wedge<F>(mut f: F, cfg: &QuadratureConfig) -> Result<IntegralResult, QuadError>
where
    F: FnMut(f64, f64) -> f64,
{
    try_integrate_2d_wedge(|u, k| Ok::<f64, QuadError>(f(u, k)), cfg)
}
