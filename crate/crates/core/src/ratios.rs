//! Long-range PWS/exact ratios as functions of the static permittivity.
//!
//! In the long-range limit only the static responses matter and every energy
//! is a pure power of the separation, so each ratio is evaluated at `L = 1`.
//! The plate polarizability comes from `ε(0)` through Clausius–Mossotti, and
//! the atom's polarizability cancels.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    exact_atom_plate_long_range, exact_atom_slab, exact_plate_plate_long_range, exact_slab_slab,
    exact_small_sphere_perfect_mirror,
};
use crate::materials::{MaterialModel, Response};
use crate::pws::{pws_long_range, GeometryKind, GeometrySpec};
use crate::quadrature::QuadratureConfig;

/// Sphere ratios use the small-sphere anchor at or above this `L/R`.
pub const SMALL_SPHERE_L_OVER_R: f64 = 1e3;
/// Sphere ratios use the plate–plate anchor at or below this `L/R`.
pub const LARGE_SPHERE_L_OVER_R: f64 = 1e-2;

const SCAN_POINTS: usize = 32;
const GOLDEN_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub geometry: GeometryKind,
    pub eps0: f64,
    /// Thickness over separation (both slabs for slab–slab).
    pub e_rel: Option<f64>,
    /// Surface separation over sphere radius.
    pub l_over_r: Option<f64>,
    /// PWS energy at `L = 1` (unit plate density, unit atom polarizability).
    pub pws: f64,
    pub exact: Option<f64>,
    /// `None` where no exact value is available.
    pub ratio: Option<f64>,
    /// Set when `ε(0) = 1` and the ratio is the limit value 1.
    pub by_continuity: bool,
    /// Relative error estimate of the ratio from the quadratures.
    pub quad_error: f64,
    pub converged: bool,
}

/// Static permittivity as a material with unit density; `∞` is a perfect mirror.
pub fn material_from_eps(eps0: f64) -> Result<MaterialModel> {
    Ok(MaterialModel::static_eps(eps0)?)
}

/// The `u = 0` response of a material, which is all the long-range limit sees.
pub fn static_limit(m: &MaterialModel) -> MaterialModel {
    let response = match m.response {
        Response::LorentzEps { eps0, .. } => Response::Static { eps0 },
        Response::LorentzAlpha { a0, .. } => Response::StaticAlpha { a0 },
        r => r,
    };
    MaterialModel { response, ..*m }
}

fn reference_atom() -> MaterialModel {
    MaterialModel { response: Response::StaticAlpha { a0: 1.0 }, number_density: 1.0 }
}

fn eps_of(m: &MaterialModel) -> Result<f64> {
    Ok(m.eps_iu(0.0)?)
}

fn point(kind: GeometryKind, eps0: f64, e_rel: Option<f64>, l_over_r: Option<f64>) -> RatioPoint {
    RatioPoint {
        geometry: kind,
        eps0,
        e_rel,
        l_over_r,
        pws: 0.0,
        exact: None,
        ratio: None,
        by_continuity: false,
        quad_error: 0.0,
        converged: true,
    }
}

fn with_exact(mut p: RatioPoint, pws: f64, exact: crate::pws::EnergyResult) -> RatioPoint {
    p.pws = pws;
    p.exact = Some(exact.value);
    p.ratio = Some(pws / exact.value);
    p.quad_error = exact.error_estimate() / exact.value.abs();
    p.converged = exact.converged();
    p
}

fn vacuum(mut p: RatioPoint) -> RatioPoint {
    p.ratio = Some(1.0);
    p.by_continuity = true;
    p
}

/// Long-range ratio for a plate or slab material `m` in the given geometry.
/// `e_rel` is required for the slab geometries and ignored otherwise.
pub fn ratio_long_range(
    kind: GeometryKind,
    m: &MaterialModel,
    e_rel: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<RatioPoint> {
    let m = static_limit(m);
    let eps0 = eps_of(&m)?;
    let atom = reference_atom();
    let need_e = || {
        e_rel
            .filter(|e| *e > 0.0 && e.is_finite())
            .ok_or_else(|| Error::Usage(format!("{kind} ratio needs a relative thickness > 0")))
    };
    let p = match kind {
        GeometryKind::AtomPlate | GeometryKind::PlatePlate => point(kind, eps0, None, None),
        GeometryKind::AtomSlab | GeometryKind::SlabSlab => point(kind, eps0, Some(need_e()?), None),
        GeometryKind::SpherePlate => {
            return Err(Error::Usage("sphere ratios take l_over_r; use ratio_sphere_pws_limits".into()))
        }
        GeometryKind::AtomAtom | GeometryKind::SphereSlab => {
            return Err(Error::Usage(format!("no long-range ratio for {kind}")))
        }
    };
    if eps0 == 1.0 {
        return Ok(vacuum(p));
    }
    Ok(match kind {
        GeometryKind::AtomPlate => {
            let pws = pws_long_range(GeometrySpec::AtomPlate { l: 1.0 }, &m, &atom)?.value;
            with_exact(p, pws, exact_atom_plate_long_range(&m, &atom, 1.0, cfg)?)
        }
        GeometryKind::AtomSlab => {
            let e = need_e()?;
            let pws = pws_long_range(GeometrySpec::AtomSlab { l: 1.0, e_a: e }, &m, &atom)?.value;
            with_exact(p, pws, exact_atom_slab(&m, &atom, 1.0, e, cfg)?)
        }
        GeometryKind::PlatePlate => {
            let pws = pws_long_range(GeometrySpec::PlatePlate { l: 1.0 }, &m, &m)?.value;
            with_exact(p, pws, exact_plate_plate_long_range(&m, &m, 1.0, cfg)?)
        }
        GeometryKind::SlabSlab => {
            let e = need_e()?;
            let g = GeometrySpec::SlabSlab { l: 1.0, e_a: e, e_b: e };
            let pws = pws_long_range(g, &m, &m)?.value;
            with_exact(p, pws, exact_slab_slab(&m, &m, 1.0, e, e, cfg)?)
        }
        _ => unreachable!("filtered above"),
    })
}

pub fn ratio_atom_plate_lr(eps0: f64, cfg: &QuadratureConfig) -> Result<RatioPoint> {
    ratio_long_range(GeometryKind::AtomPlate, &material_from_eps(eps0)?, None, cfg)
}

pub fn ratio_atom_slab_lr(eps0: f64, e_rel: f64, cfg: &QuadratureConfig) -> Result<RatioPoint> {
    ratio_long_range(GeometryKind::AtomSlab, &material_from_eps(eps0)?, Some(e_rel), cfg)
}

pub fn ratio_plate_plate_lr(eps0: f64, cfg: &QuadratureConfig) -> Result<RatioPoint> {
    ratio_long_range(GeometryKind::PlatePlate, &material_from_eps(eps0)?, None, cfg)
}

pub fn ratio_slab_slab_lr(eps0: f64, e_rel: f64, cfg: &QuadratureConfig) -> Result<RatioPoint> {
    ratio_long_range(GeometryKind::SlabSlab, &material_from_eps(eps0)?, Some(e_rel), cfg)
}

/// Sphere–plate ratio where it is known without the exact sphere energy.
///
/// The PWS energy (sphere of radius 1, gap `l_over_r`) is always returned.
/// For `l_over_r ≥ 10³` the ratio is the small-sphere one: against the
/// dipolar perfect-mirror result for a perfect mirror, and the atom–plate
/// ratio otherwise. For `l_over_r ≤ 10⁻²` it is the plate–plate ratio. In
/// between the ratio is left empty.
pub fn ratio_sphere_pws_limits(m: &MaterialModel, l_over_r: f64, cfg: &QuadratureConfig) -> Result<RatioPoint> {
    if !(l_over_r > 0.0 && l_over_r.is_finite()) {
        return Err(Error::Usage(format!("l_over_r must be finite and > 0, got {l_over_r}")));
    }
    let m = static_limit(m);
    let eps0 = eps_of(&m)?;
    let radius = 1.0;
    let l_center = radius * (1.0 + l_over_r);
    let geometry = GeometrySpec::SpherePlate { l_center, radius };
    let mut p = point(GeometryKind::SpherePlate, eps0, None, Some(l_over_r));
    p.pws = pws_long_range(geometry, &m, &m)?.value;
    if eps0 == 1.0 {
        return Ok(vacuum(p));
    }
    let anchor = if l_over_r >= SMALL_SPHERE_L_OVER_R {
        if m.is_perfect_mirror() {
            let exact = exact_small_sphere_perfect_mirror(l_center, radius)?;
            return Ok(with_exact(p, p.pws, exact));
        }
        Some(ratio_long_range(GeometryKind::AtomPlate, &m, None, cfg)?)
    } else if l_over_r <= LARGE_SPHERE_L_OVER_R {
        Some(ratio_long_range(GeometryKind::PlatePlate, &m, None, cfg)?)
    } else {
        None
    };
    if let Some(a) = anchor {
        p.ratio = a.ratio;
        p.quad_error = a.quad_error;
        p.converged = a.converged;
    }
    Ok(p)
}

/// `(23/30) π` against `9/(16π)`: the small-sphere perfect-mirror ratio.
pub fn small_sphere_perfect_mirror_ratio() -> f64 {
    let pws = 23.0 / 30.0 * PI * (3.0 / (4.0 * PI)).powi(2);
    pws / (9.0 / (16.0 * PI))
}

/// `n` points spaced evenly in `ln x` on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || n < 2 {
        return Err(Error::Usage(format!("log grid needs 0 < lo < hi and n >= 2, got [{lo}, {hi}], n = {n}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| (a + step * i as f64).exp()).collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    Ok(grid)
}

fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
}

/// 200 log-spaced permittivities on `[1.001, 10⁶]`.
pub fn default_eps_grid() -> Vec<f64> {
    log_grid(1.001, 1e6, 200).expect("valid default grid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub geometry: GeometryKind,
    pub material: Response,
    pub number_density: f64,
    /// Permittivities, strictly increasing. Overrides the static permittivity
    /// of `material` when non-empty.
    pub eps_grid: Vec<f64>,
    /// Relative thicknesses for slab geometries; `L/R` values for spheres.
    pub parameters: Vec<f64>,
}

impl SweepSpec {
    pub fn new(geometry: GeometryKind, eps_grid: Vec<f64>, parameters: Vec<f64>) -> Self {
        Self { geometry, material: Response::Static { eps0: 2.0 }, number_density: 1.0, eps_grid, parameters }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage("permittivity grid must be strictly increasing".into()));
        }
        if let Some(&e) = self.eps_grid.iter().find(|e| !(**e >= 1.0)) {
            return Err(Error::Usage(format!("permittivity {e} is below 1")));
        }
        let needs_param = matches!(
            self.geometry,
            GeometryKind::AtomSlab | GeometryKind::SlabSlab | GeometryKind::SpherePlate
        );
        if needs_param && self.parameters.is_empty() {
            return Err(Error::Usage(format!("{} sweep needs at least one thickness or L/R value", self.geometry)));
        }
        Ok(())
    }

    fn materials(&self) -> Result<Vec<MaterialModel>> {
        if self.eps_grid.is_empty() {
            return Ok(vec![MaterialModel::new(self.material, self.number_density)?]);
        }
        self.eps_grid
            .iter()
            .map(|&e| Ok(material_from_eps(e)?.with_number_density(self.number_density)?))
            .collect()
    }
}

/// Evaluates every `(parameter, ε)` pair of the sweep, parameter-major, in
/// parallel on the current rayon pool. Output order follows the input order.
pub fn sweep(spec: &SweepSpec, cfg: &QuadratureConfig) -> Result<Vec<RatioPoint>> {
    spec.validate()?;
    let materials = spec.materials()?;
    let params: Vec<Option<f64>> = if spec.parameters.is_empty() {
        vec![None]
    } else {
        spec.parameters.iter().copied().map(Some).collect()
    };
    let jobs: Vec<(Option<f64>, MaterialModel)> = params
        .iter()
        .flat_map(|&p| materials.iter().map(move |m| (p, *m)))
        .collect();
    jobs.into_par_iter()
        .map(|(param, m)| match spec.geometry {
            GeometryKind::SpherePlate => ratio_sphere_pws_limits(&m, param.unwrap_or(f64::NAN), cfg),
            kind => ratio_long_range(kind, &m, param, cfg),
        })
        .collect()
}

/// Intervals of `ε(0)` over which `ratio - 1` changes sign.
pub fn sign_changes(points: &[RatioPoint]) -> Vec<(f64, f64)> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.ratio.filter(|_| !p.by_continuity).map(|r| (p.eps0, r - 1.0)))
        .collect();
    usable
        .windows(2)
        .filter(|w| w[0].1 != 0.0 && w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    /// Scan brackets of every interior local maximum found; the refined one
    /// is the bracket with the largest scanned value.
    pub brackets: Vec<(f64, f64)>,
}

/// Maximum of `curve` on `[lo, hi]`: a 32-point scan (log-spaced when
/// `lo > 0`), then golden-section search to a relative abscissa tolerance
/// of 1e-4 inside the best bracket.
pub fn find_extremum<F>(curve: F, lo: f64, hi: f64) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::NoExtremum { lo, hi });
    }
    let log = lo > 0.0;
    let grid = if log { log_grid(lo, hi, SCAN_POINTS)? } else { linear_grid(lo, hi, SCAN_POINTS) };
    let values: Vec<f64> = grid.par_iter().map(|&x| curve(x)).collect::<Result<_>>()?;
    let peaks: Vec<usize> = (1..SCAN_POINTS - 1)
        .filter(|&i| values[i] >= values[i - 1] && values[i] >= values[i + 1])
        .filter(|&i| values[i] > values[i - 1] || values[i] > values[i + 1])
        .collect();
    let best = peaks
        .iter()
        .copied()
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .ok_or(Error::NoExtremum { lo, hi })?;
    let brackets = peaks.iter().map(|&i| (grid[i - 1], grid[i + 1])).collect();

    let to = |x: f64| if log { x.ln() } else { x };
    let from = |t: f64| if log { t.exp() } else { t };
    let f = |t: f64| curve(from(t));
    let (mut a, mut b) = (to(grid[best - 1]), to(grid[best + 1]));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let done = |a: f64, b: f64| {
        if log {
            b - a <= GOLDEN_REL_TOL
        } else {
            b - a <= GOLDEN_REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
        }
    };
    while !done(a, b) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let (t, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(Extremum { x: from(t), value, brackets })
}
