//! Pairwise-summation energies.
//!
//! Every body is a collection of independent polarizable atoms. The
//! atom–atom retarded van der Waals kernel is summed over the volume of each
//! body; the sums over the slab and sphere volumes are done in closed form,
//! leaving a single imaginary-frequency integral whose integrand is built
//! from the primitives `f, g, h, i`.
//!
//! Energies are in reduced units `ħ = c = 1`. A `MaterialModel` supplies the
//! reduced polarizability of one constituent (directly, or from `ε` through
//! Clausius–Mossotti) and the number density of the body. For an isolated
//! atom only the polarizability is used.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::quadrature::{
    try_integrate_finite, try_integrate_semi_infinite, IntegralResult, QuadratureConfig,
};
use crate::specfun::{primitive_scaled, PrimitiveKind};

/// Below this ratio `R / 𝓛` the sphere bracket is evaluated from its Taylor
/// expansion in `R`, because the direct form cancels to `O((R/𝓛)³)`.
const SPHERE_SERIES_SWITCH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeometrySpec {
    AtomAtom { d: f64 },
    AtomSlab { l: f64, e_a: f64 },
    AtomPlate { l: f64 },
    SlabSlab { l: f64, e_a: f64, e_b: f64 },
    PlatePlate { l: f64 },
    /// `l_center` is the distance from the sphere center to the slab surface.
    SphereSlab { l_center: f64, radius: f64, e_a: f64 },
    SpherePlate { l_center: f64, radius: f64 },
}

/// Geometry without its lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryKind {
    AtomAtom,
    AtomSlab,
    AtomPlate,
    SlabSlab,
    PlatePlate,
    SphereSlab,
    SpherePlate,
}

impl GeometryKind {
    pub const ALL: [GeometryKind; 7] = [
        GeometryKind::AtomAtom,
        GeometryKind::AtomSlab,
        GeometryKind::AtomPlate,
        GeometryKind::SlabSlab,
        GeometryKind::PlatePlate,
        GeometryKind::SphereSlab,
        GeometryKind::SpherePlate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::AtomAtom => "atom-atom",
            GeometryKind::AtomSlab => "atom-slab",
            GeometryKind::AtomPlate => "atom-plate",
            GeometryKind::SlabSlab => "slab-slab",
            GeometryKind::PlatePlate => "plate-plate",
            GeometryKind::SphereSlab => "sphere-slab",
            GeometryKind::SpherePlate => "sphere-plate",
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeometryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown geometry '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerUnit {
    Total,
    PerArea,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PwsClosedForm,
    PwsOracle,
    PwsLongRange,
    Exact,
    ExactLongRange,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PwsClosedForm => "pws",
            Method::PwsOracle => "pws-oracle",
            Method::PwsLongRange => "pws-long-range",
            Method::Exact => "exact",
            Method::ExactLongRange => "exact-long-range",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub value: f64,
    pub per_unit: PerUnit,
    pub method: Method,
    pub geometry: GeometrySpec,
    /// Quadrature provenance; `None` for closed forms.
    pub quadrature: Option<IntegralResult>,
}

impl EnergyResult {
    fn closed(value: f64, method: Method, geometry: GeometrySpec) -> Self {
        Self { value, per_unit: geometry.per_unit(), method, geometry, quadrature: None }
    }

    fn integrated(q: IntegralResult, factor: f64, method: Method, geometry: GeometrySpec) -> Self {
        let q = q.scaled(factor);
        Self { value: q.value, per_unit: geometry.per_unit(), method, geometry, quadrature: Some(q) }
    }

    pub fn converged(&self) -> bool {
        self.quadrature.map_or(true, |q| q.converged)
    }

    pub fn error_estimate(&self) -> f64 {
        self.quadrature.map_or(0.0, |q| q.error_estimate)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Geometry(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl GeometrySpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeometrySpec::AtomAtom { d } => positive("d", d),
            GeometrySpec::AtomSlab { l, e_a } => {
                positive("L", l)?;
                positive("e_A", e_a)
            }
            GeometrySpec::AtomPlate { l } | GeometrySpec::PlatePlate { l } => positive("L", l),
            GeometrySpec::SlabSlab { l, e_a, e_b } => {
                positive("L", l)?;
                positive("e_A", e_a)?;
                positive("e_B", e_b)
            }
            GeometrySpec::SphereSlab { l_center, radius, e_a } => {
                positive("e_A", e_a)?;
                sphere_ok(l_center, radius)
            }
            GeometrySpec::SpherePlate { l_center, radius } => sphere_ok(l_center, radius),
        }
    }

    pub fn kind(&self) -> GeometryKind {
        match self {
            GeometrySpec::AtomAtom { .. } => GeometryKind::AtomAtom,
            GeometrySpec::AtomSlab { .. } => GeometryKind::AtomSlab,
            GeometrySpec::AtomPlate { .. } => GeometryKind::AtomPlate,
            GeometrySpec::SlabSlab { .. } => GeometryKind::SlabSlab,
            GeometrySpec::PlatePlate { .. } => GeometryKind::PlatePlate,
            GeometrySpec::SphereSlab { .. } => GeometryKind::SphereSlab,
            GeometrySpec::SpherePlate { .. } => GeometryKind::SpherePlate,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().name()
    }

    pub fn per_unit(&self) -> PerUnit {
        match self {
            GeometrySpec::SlabSlab { .. } | GeometrySpec::PlatePlate { .. } => PerUnit::PerArea,
            _ => PerUnit::Total,
        }
    }

    /// Surface-to-surface separation (`d` for two atoms, `𝓛 - R` for a sphere).
    pub fn gap(&self) -> f64 {
        match *self {
            GeometrySpec::AtomAtom { d } => d,
            GeometrySpec::AtomSlab { l, .. }
            | GeometrySpec::AtomPlate { l }
            | GeometrySpec::SlabSlab { l, .. }
            | GeometrySpec::PlatePlate { l } => l,
            GeometrySpec::SphereSlab { l_center, radius, .. }
            | GeometrySpec::SpherePlate { l_center, radius } => l_center - radius,
        }
    }
}

fn sphere_ok(l_center: f64, radius: f64) -> Result<()> {
    positive("R", radius)?;
    positive("Lcenter", l_center)?;
    if l_center <= radius {
        return Err(Error::Contact { center: l_center, radius });
    }
    Ok(())
}

/// `a_A(iu) a_B(iu)`.
fn alpha_product(ma: &MaterialModel, mb: &MaterialModel, u: f64) -> Result<f64> {
    Ok(ma.alpha_iu(u)?.0 * mb.alpha_iu(u)?.0)
}

fn semi_infinite<F>(f: F, rate: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_integrate_semi_infinite(f, 0.0, &cfg.with_decay_scale(rate))
}

/// `(2uD)^p prim(2uD) / (2D)^p`, i.e. `u^p prim(2uD)` without overflow at small `u`.
fn u_pow_prim(kind: PrimitiveKind, p: i32, u: f64, dist: f64) -> Result<f64> {
    let two_d = 2.0 * dist;
    Ok(primitive_scaled(kind, two_d * u, p)? / two_d.powi(p))
}

/// Retarded van der Waals energy between two atoms at distance `d`.
pub fn vdw_atom_atom(
    ma: &MaterialModel,
    mb: &MaterialModel,
    d: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let geometry = GeometrySpec::AtomAtom { d };
    geometry.validate()?;
    let q = semi_infinite(
        |u| {
            let poly = 3.0 / d.powi(4) + u * (6.0 / d.powi(3) + u * (5.0 / (d * d) + u * (2.0 / d + u)));
            Ok(alpha_product(ma, mb, u)? * (-2.0 * u * d).exp() * poly)
        },
        2.0 * d,
        cfg,
    )?;
    Ok(EnergyResult::integrated(q, -1.0 / (PI * d * d), Method::PwsClosedForm, geometry))
}

pub fn pws_atom_slab(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    e_a: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let geometry = GeometrySpec::AtomSlab { l, e_a };
    geometry.validate()?;
    let q = semi_infinite(
        |u| {
            let near = u_pow_prim(PrimitiveKind::F, 3, u, l)?;
            let far = u_pow_prim(PrimitiveKind::F, 3, u, l + e_a)?;
            Ok(alpha_product(ma, mb, u)? * (near - far))
        },
        2.0 * l,
        cfg,
    )?;
    Ok(EnergyResult::integrated(q, ma.number_density, Method::PwsClosedForm, geometry))
}

pub fn pws_atom_plate(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let geometry = GeometrySpec::AtomPlate { l };
    geometry.validate()?;
    let q = semi_infinite(
        |u| Ok(alpha_product(ma, mb, u)? * u_pow_prim(PrimitiveKind::F, 3, u, l)?),
        2.0 * l,
        cfg,
    )?;
    Ok(EnergyResult::integrated(q, ma.number_density, Method::PwsClosedForm, geometry))
}

/// Energy per unit area between two slabs.
pub fn pws_slab_slab(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    e_a: f64,
    e_b: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let geometry = GeometrySpec::SlabSlab { l, e_a, e_b };
    geometry.validate()?;
    let g = |u: f64, dist: f64| u_pow_prim(PrimitiveKind::G, 2, u, dist);
    let q = semi_infinite(
        |u| {
            // Pair the terms so each difference stays small for thin slabs.
            let bracket = (g(u, l)? - g(u, l + e_a)?) - (g(u, l + e_b)? - g(u, l + e_a + e_b)?);
            Ok(alpha_product(ma, mb, u)? * bracket)
        },
        2.0 * l,
        cfg,
    )?;
    let factor = -0.5 * ma.number_density * mb.number_density;
    Ok(EnergyResult::integrated(q, factor, Method::PwsClosedForm, geometry))
}

/// Energy per unit area between two half-spaces.
pub fn pws_plate_plate(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let geometry = GeometrySpec::PlatePlate { l };
    geometry.validate()?;
    let q = semi_infinite(
        |u| Ok(alpha_product(ma, mb, u)? * u_pow_prim(PrimitiveKind::G, 2, u, l)?),
        2.0 * l,
        cfg,
    )?;
    let factor = -0.5 * ma.number_density * mb.number_density;
    Ok(EnergyResult::integrated(q, factor, Method::PwsClosedForm, geometry))
}

/// `b [h(a+b) + h(a-b)] - [i(a+b) - i(a-b)]` with `a = 2u·dist`, `b = 2uR`.
///
/// Odd in `b`; the leading terms are `(2/3) b³ f(a) + (1/15) b⁵ d(a)`, which
/// is what is used when `R / dist` is small.
fn sphere_bracket(u: f64, dist: f64, radius: f64) -> Result<f64> {
    let rho = radius / dist;
    if rho < SPHERE_SERIES_SWITCH {
        let a = 2.0 * u * dist;
        let f3 = primitive_scaled(PrimitiveKind::F, a, 3)?;
        let d5 = primitive_scaled(PrimitiveKind::D, a, 5)?;
        return Ok(rho.powi(3) * (2.0 / 3.0 * f3 + rho * rho * d5 / 15.0));
    }
    let b = 2.0 * u * radius;
    let plus = 2.0 * u * (dist + radius);
    let minus = 2.0 * u * (dist - radius);
    let h = |x| primitive_scaled(PrimitiveKind::H, x, 0);
    let i = |x| primitive_scaled(PrimitiveKind::I, x, 0);
    Ok(b * (h(plus)? + h(minus)?) - (i(plus)? - i(minus)?))
}

pub fn pws_sphere_slab(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l_center: f64,
    radius: f64,
    e_a: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let geometry = GeometrySpec::SphereSlab { l_center, radius, e_a };
    geometry.validate()?;
    let q = semi_infinite(
        |u| {
            let bracket = sphere_bracket(u, l_center, radius)? - sphere_bracket(u, l_center + e_a, radius)?;
            Ok(alpha_product(ma, mb, u)? * bracket)
        },
        2.0 * (l_center - radius),
        cfg,
    )?;
    let factor = PI / 4.0 * ma.number_density * mb.number_density;
    Ok(EnergyResult::integrated(q, factor, Method::PwsClosedForm, geometry))
}

pub fn pws_sphere_plate(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l_center: f64,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let geometry = GeometrySpec::SpherePlate { l_center, radius };
    geometry.validate()?;
    let q = semi_infinite(
        |u| Ok(alpha_product(ma, mb, u)? * sphere_bracket(u, l_center, radius)?),
        2.0 * (l_center - radius),
        cfg,
    )?;
    let factor = PI / 4.0 * ma.number_density * mb.number_density;
    Ok(EnergyResult::integrated(q, factor, Method::PwsClosedForm, geometry))
}

/// Closed-form PWS energy for any geometry.
pub fn pws_energy(
    geometry: GeometrySpec,
    ma: &MaterialModel,
    mb: &MaterialModel,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    match geometry {
        GeometrySpec::AtomAtom { d } => vdw_atom_atom(ma, mb, d, cfg),
        GeometrySpec::AtomSlab { l, e_a } => pws_atom_slab(ma, mb, l, e_a, cfg),
        GeometrySpec::AtomPlate { l } => pws_atom_plate(ma, mb, l, cfg),
        GeometrySpec::SlabSlab { l, e_a, e_b } => pws_slab_slab(ma, mb, l, e_a, e_b, cfg),
        GeometrySpec::PlatePlate { l } => pws_plate_plate(ma, mb, l, cfg),
        GeometrySpec::SphereSlab { l_center, radius, e_a } => {
            pws_sphere_slab(ma, mb, l_center, radius, e_a, cfg)
        }
        GeometrySpec::SpherePlate { l_center, radius } => {
            pws_sphere_plate(ma, mb, l_center, radius, cfg)
        }
    }
}

/// `1 - (1 + e)^-4`, with `e = e_A / L`.
pub fn atom_slab_thickness_factor(e_rel: f64) -> f64 {
    -(-4.0 * e_rel.ln_1p()).exp_m1()
}

/// `1 - (1+e_A)^-3 - (1+e_B)^-3 + (1+e_A+e_B)^-3`, thicknesses relative to `L`.
pub fn slab_slab_thickness_factor(ea_rel: f64, eb_rel: f64) -> f64 {
    let c = |e: f64| (1.0 + e).powi(-3);
    1.0 - c(ea_rel) - c(eb_rel) + c(ea_rel + eb_rel)
}

/// Long-range (static-response) closed forms; the constituents' `u = 0`
/// polarizabilities are used, which is exact for static models.
pub fn pws_long_range(
    geometry: GeometrySpec,
    ma: &MaterialModel,
    mb: &MaterialModel,
) -> Result<EnergyResult> {
    geometry.validate()?;
    let aa = ma.static_alpha_value()? * mb.static_alpha_value()?;
    let na = ma.number_density;
    let nn = na * mb.number_density;
    let atom_plate = |l: f64| -23.0 / 40.0 * na * aa / l.powi(4);
    let sphere_plate = |lc: f64, r: f64| {
        let s = lc * lc - r * r;
        -23.0 / 30.0 * PI * r.powi(3) * nn * aa / (s * s)
    };
    let value = match geometry {
        GeometrySpec::AtomAtom { d } => -23.0 * aa / (4.0 * PI * d.powi(7)),
        GeometrySpec::AtomSlab { l, e_a } => atom_plate(l) * atom_slab_thickness_factor(e_a / l),
        GeometrySpec::AtomPlate { l } => atom_plate(l),
        GeometrySpec::SlabSlab { l, e_a, e_b } => {
            -23.0 / 120.0 * nn * aa / l.powi(3) * slab_slab_thickness_factor(e_a / l, e_b / l)
        }
        GeometrySpec::PlatePlate { l } => -23.0 / 120.0 * nn * aa / l.powi(3),
        GeometrySpec::SphereSlab { l_center, radius, e_a } => {
            sphere_plate(l_center, radius) - sphere_plate(l_center + e_a, radius)
        }
        GeometrySpec::SpherePlate { l_center, radius } => sphere_plate(l_center, radius),
    };
    Ok(EnergyResult::closed(value, Method::PwsLongRange, geometry))
}

/// Brute-force volume summation used to check the closed forms.
///
/// The atom–atom kernel is integrated over the bodies directly:
/// `2π n ∫dz ∫_z^∞ dd d U(d)` for a slab (the transverse integral written in
/// terms of the atom–atom distance), a trapezoidal weight over the summed
/// depth for two slabs, and the cross-section sum `∫dr π(R²-r²) n` for a
/// sphere. When both models are static the kernel is the analytic
/// `-23 a_A a_B / (4π d⁷)`; otherwise it is itself a frequency quadrature.
pub fn oracle_pws(
    geometry: GeometrySpec,
    ma: &MaterialModel,
    mb: &MaterialModel,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    geometry.validate()?;
    let oracle = Oracle::new(ma, mb, cfg)?;
    let q = match geometry {
        GeometrySpec::AtomAtom { d } => {
            let mut r = vdw_atom_atom(ma, mb, d, cfg)?;
            r.method = Method::PwsOracle;
            return Ok(r);
        }
        GeometrySpec::AtomSlab { l, e_a } => oracle.atom_slab(l, Some(e_a), cfg)?,
        GeometrySpec::AtomPlate { l } => oracle.atom_slab(l, None, cfg)?,
        GeometrySpec::SlabSlab { l, e_a, e_b } => oracle.slab_slab(l, Some((e_a, e_b)), cfg)?,
        GeometrySpec::PlatePlate { l } => oracle.slab_slab(l, None, cfg)?,
        GeometrySpec::SphereSlab { l_center, radius, e_a } => {
            oracle.sphere(l_center, radius, Some(e_a), cfg)?
        }
        GeometrySpec::SpherePlate { l_center, radius } => oracle.sphere(l_center, radius, None, cfg)?,
    };
    let q = IntegralResult { converged: q.converged && oracle.inner_ok.get(), ..q };
    Ok(EnergyResult::integrated(q, 1.0, Method::PwsOracle, geometry))
}

struct Oracle<'a> {
    ma: &'a MaterialModel,
    mb: &'a MaterialModel,
    static_aa: Option<f64>,
    inner_ok: Cell<bool>,
}

impl<'a> Oracle<'a> {
    fn new(ma: &'a MaterialModel, mb: &'a MaterialModel, _cfg: &QuadratureConfig) -> Result<Self> {
        let static_aa = if ma.is_static() && mb.is_static() {
            Some(ma.static_alpha_value()? * mb.static_alpha_value()?)
        } else {
            None
        };
        Ok(Self { ma, mb, static_aa, inner_ok: Cell::new(true) })
    }

    fn track(&self, q: IntegralResult) -> f64 {
        self.inner_ok.set(self.inner_ok.get() && q.converged);
        q.value
    }

    fn kernel(&self, d: f64, cfg: &QuadratureConfig) -> Result<f64> {
        match self.static_aa {
            Some(aa) => Ok(-23.0 * aa / (4.0 * PI * d.powi(7))),
            None => {
                let r = vdw_atom_atom(self.ma, self.mb, d, cfg)?;
                Ok(self.track(r.quadrature.expect("quadrature result")))
            }
        }
    }

    /// `2π ∫_z^∞ dd d U(d)`: the kernel summed over a plane of unit density
    /// at depth `z`.
    fn plane(&self, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let inner = cfg.nested();
        let q = try_integrate_semi_infinite(
            |d: f64| Ok::<f64, Error>(d * self.kernel(d, &inner)?),
            z,
            &cfg.with_decay_scale(1.0 / z),
        )?;
        Ok(2.0 * PI * self.track(q))
    }

    /// Atom in front of a slab (or half-space when `e_a` is `None`).
    fn atom_slab(&self, l: f64, e_a: Option<f64>, cfg: &QuadratureConfig) -> Result<IntegralResult> {
        let inner = cfg.nested();
        let q = match e_a {
            Some(e) => try_integrate_finite(|z| self.plane(z, &inner), l, l + e, cfg)?,
            None => try_integrate_semi_infinite(
                |z| self.plane(z, &inner),
                l,
                &cfg.with_decay_scale(1.0 / l),
            )?,
        };
        Ok(q.scaled(self.ma.number_density))
    }

    /// Two slabs per unit area. The double depth integral depends only on
    /// `D = L + ζ_A + ζ_B`, weighted by the length of the segment
    /// `ζ_A + ζ_B = D - L` inside the `e_A × e_B` rectangle.
    fn slab_slab(&self, l: f64, e: Option<(f64, f64)>, cfg: &QuadratureConfig) -> Result<IntegralResult> {
        let inner = cfg.nested();
        let nn = self.ma.number_density * self.mb.number_density;
        let q = match e {
            Some((e_a, e_b)) => {
                let (lo, hi) = (e_a.min(e_b), e_a.max(e_b));
                let weight = |s: f64| s.min(lo).min(e_a + e_b - s).max(0.0);
                let knots = [l, l + lo, l + hi, l + e_a + e_b];
                let mut total: Option<IntegralResult> = None;
                for w in knots.windows(2) {
                    if w[1] <= w[0] {
                        continue;
                    }
                    let part = try_integrate_finite(
                        |dd| Ok::<f64, Error>(weight(dd - l) * self.plane(dd, &inner)?),
                        w[0],
                        w[1],
                        cfg,
                    )?;
                    total = Some(match total {
                        Some(t) => t.combine(part, 1.0),
                        None => part,
                    });
                }
                total.expect("at least one depth interval")
            }
            None => try_integrate_semi_infinite(
                |dd| Ok::<f64, Error>((dd - l) * self.plane(dd, &inner)?),
                l,
                &cfg.with_decay_scale(1.0 / l),
            )?,
        };
        Ok(q.scaled(nn))
    }

    /// Sphere as a stack of discs of area `π(R² - r²)` at distance `𝓛 + r`.
    fn sphere(
        &self,
        l_center: f64,
        radius: f64,
        e_a: Option<f64>,
        cfg: &QuadratureConfig,
    ) -> Result<IntegralResult> {
        let inner = cfg.nested();
        let q = try_integrate_finite(
            |r: f64| {
                let disc = PI * (radius * radius - r * r);
                Ok::<f64, Error>(disc * self.atom_slab(l_center + r, e_a, &inner)?.value)
            },
            -radius,
            radius,
            cfg,
        )?;
        Ok(q.scaled(self.mb.number_density))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Response;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn atom(a: f64) -> MaterialModel {
        MaterialModel::static_alpha(a, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn atom_atom_static_closed_form() {
        let a = atom(0.01);
        for d in [0.5, 1.0, 3.0] {
            let u = vdw_atom_atom(&a, &a, d, &cfg()).unwrap();
            let expected = -23.0 * 1e-4 / (4.0 * PI * d.powi(7));
            assert!(rel(u.value, expected) < 1e-12, "d = {d}");
            assert!(u.converged());
        }
        let u1 = vdw_atom_atom(&a, &a, 1.0, &cfg()).unwrap().value;
        let u2 = vdw_atom_atom(&a, &a, 2.0, &cfg()).unwrap().value;
        assert!((u2 / u1 - 2f64.powi(-7)).abs() < 1e-12);
        let zero = vdw_atom_atom(&atom(0.0), &a, 1.0, &cfg()).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn atom_plate_static_is_exact() {
        let a = atom(0.01);
        for l in [0.3, 1.0, 7.0] {
            let u = pws_atom_plate(&a, &a, l, &cfg()).unwrap().value;
            assert!(rel(u, -23.0 / 40.0 * 1e-4 / l.powi(4)) < 1e-10, "L = {l}");
        }
    }

    #[test]
    fn atom_slab_limits() {
        let a = atom(0.01);
        let plate = pws_atom_plate(&a, &a, 1.0, &cfg()).unwrap().value;
        let thick = pws_atom_slab(&a, &a, 1.0, 1e4, &cfg()).unwrap().value;
        assert!(rel(thick, plate) < 1e-9);
        let t1 = pws_atom_slab(&a, &a, 1.0, 1e-4, &cfg()).unwrap().value;
        let t2 = pws_atom_slab(&a, &a, 1.0, 2e-4, &cfg()).unwrap().value;
        assert!((t2 / t1 - 2.0).abs() < 1e-3);
    }

    #[test]
    fn slab_slab_symmetry_and_bulk() {
        let a = atom(0.01);
        let b = atom(0.02).with_number_density(2.0).unwrap();
        let ab = pws_slab_slab(&a, &b, 1.0, 0.3, 2.0, &cfg()).unwrap().value;
        let ba = pws_slab_slab(&b, &a, 1.0, 2.0, 0.3, &cfg()).unwrap().value;
        assert!(rel(ab, ba) < 1e-12);
        let plate = pws_plate_plate(&a, &b, 1.0, &cfg()).unwrap().value;
        let thick = pws_slab_slab(&a, &b, 1.0, 1e4, 1e4, &cfg()).unwrap().value;
        assert!(rel(thick, plate) < 1e-9);
        let half = pws_slab_slab(&a, &a, 1.0, 0.5, 0.5, &cfg()).unwrap().value;
        let closed = pws_long_range(GeometrySpec::SlabSlab { l: 1.0, e_a: 0.5, e_b: 0.5 }, &a, &a).unwrap();
        assert!(rel(half, closed.value) < 1e-10);
    }

    #[test]
    fn plate_plate_static() {
        let a = atom(0.01);
        let u1 = pws_plate_plate(&a, &a, 1.0, &cfg()).unwrap().value;
        assert!(rel(u1, -23.0 / 120.0 * 1e-4) < 1e-10);
        let u2 = pws_plate_plate(&a, &a, 2.0, &cfg()).unwrap().value;
        assert!((u1 / u2 - 8.0).abs() < 1e-9);
    }

    #[test]
    fn sphere_static_closed_form() {
        let a = atom(0.01);
        for (lc, r) in [(2.0, 1.0), (1.1, 1.0), (5.0, 0.5), (1.0, 2e-3), (1.0, 5e-4)] {
            let q = pws_sphere_plate(&a, &a, lc, r, &cfg()).unwrap().value;
            let s = lc * lc - r * r;
            let closed = -23.0 / 30.0 * PI * r.powi(3) * 1e-4 / (s * s);
            assert!(rel(q, closed) < 1e-9, "Lc = {lc}, R = {r}: {q} vs {closed}");
        }
    }

    #[test]
    fn sphere_series_matches_direct_near_switch() {
        for u in [0.01, 0.3, 1.0, 4.0] {
            let dist = 1.0;
            let r = SPHERE_SERIES_SWITCH * 1.0001;
            let direct = sphere_bracket(u, dist, r).unwrap();
            let series = sphere_bracket(u, dist, SPHERE_SERIES_SWITCH * 0.9999).unwrap()
                * (r / (SPHERE_SERIES_SWITCH * 0.9999)).powi(3);
            assert!(rel(direct, series) < 1e-5, "u = {u}: {direct} vs {series}");
        }
    }

    #[test]
    fn sphere_slab_bulk_limit() {
        let a = atom(0.01);
        let plate = pws_sphere_plate(&a, &a, 2.0, 1.0, &cfg()).unwrap().value;
        let slab = pws_sphere_slab(&a, &a, 2.0, 1.0, 1e4, &cfg()).unwrap().value;
        assert!(rel(slab, plate) < 1e-9);
    }

    #[test]
    fn thickness_factors() {
        assert!((atom_slab_thickness_factor(1.0) - 15.0 / 16.0).abs() < 1e-15);
        assert!((slab_slab_thickness_factor(1.0, 1.0) - 85.0 / 108.0).abs() < 1e-15);
        assert!((atom_slab_thickness_factor(1e9) - 1.0).abs() < 1e-15);
        assert!((slab_slab_thickness_factor(1e9, 1e9) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn geometry_errors() {
        let a = atom(0.01);
        assert!(matches!(
            pws_sphere_plate(&a, &a, 1.0, 1.0, &cfg()),
            Err(Error::Contact { .. })
        ));
        assert!(matches!(vdw_atom_atom(&a, &a, 0.0, &cfg()), Err(Error::Geometry(_))));
        assert!(matches!(pws_atom_slab(&a, &a, 1.0, -1.0, &cfg()), Err(Error::Geometry(_))));
    }

    #[test]
    fn oracle_atom_slab_static() {
        let a = atom(0.01);
        let closed = pws_atom_slab(&a, &a, 1.0, 1.0, &cfg()).unwrap().value;
        let oracle = oracle_pws(GeometrySpec::AtomSlab { l: 1.0, e_a: 1.0 }, &a, &a, &cfg()).unwrap();
        assert!(rel(oracle.value, closed) < 1e-6);
        assert_eq!(oracle.method, Method::PwsOracle);
    }

    #[test]
    fn oracle_atom_slab_lorentz() {
        let m = MaterialModel::new(Response::LorentzAlpha { a0: 0.01, u_res: 1.0 }, 1.0).unwrap();
        let closed = pws_atom_slab(&m, &m, 1.0, 0.5, &cfg()).unwrap().value;
        let oracle = oracle_pws(GeometrySpec::AtomSlab { l: 1.0, e_a: 0.5 }, &m, &m, &cfg().with_rel_tol(1e-8))
            .unwrap();
        assert!(rel(oracle.value, closed) < 1e-6, "{} vs {closed}", oracle.value);
    }
}
