//! Scattering-theory energies for planar bodies.
//!
//! Reflection coefficients are written in forms free of cancellation:
//! `(κ - κ_m)` is replaced by `-(ε - 1) u² / (κ + κ_m)` and so on, so a
//! coefficient of a nearly transparent medium keeps its relative accuracy.
//!
//! Conventions: the first material is the plate or slab (body A), the second
//! is the atom or the second plate (body B). All energies are negative for
//! attraction.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::pws::{EnergyResult, GeometrySpec, Method, PerUnit};
use crate::quadrature::{try_integrate_2d_wedge, try_integrate_semi_infinite, IntegralResult, QuadratureConfig};
use crate::specfun::polylog4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

/// Imaginary frequency `u` and longitudinal imaginary wavevector `κ ≥ u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub u: f64,
    pub kappa: f64,
}

impl WaveParams {
    pub fn new(u: f64, kappa: f64) -> Result<Self> {
        if !(u >= 0.0 && kappa >= u && kappa.is_finite()) {
            return Err(Error::Usage(format!("wave parameters need 0 <= u <= kappa, got u = {u}, kappa = {kappa}")));
        }
        Ok(Self { u, kappa })
    }

    /// Transverse wavevector `k = √(κ² - u²)`.
    pub fn k(&self) -> f64 {
        ((self.kappa - self.u) * (self.kappa + self.u)).sqrt()
    }

    /// `κ_m = √(ε u² + k²)`, the longitudinal wavevector inside the medium.
    pub fn kappa_m(&self, eps: f64) -> f64 {
        let k = self.k();
        (eps * self.u * self.u + k * k).sqrt()
    }
}

/// Fresnel coefficient of a vacuum/medium interface:
/// `r_TE = (κ - κ_m)/(κ + κ_m)`, `r_TM = (κ_m - εκ)/(εκ + κ_m)`.
/// `eps = ∞` gives the perfect mirror, `-1` for both polarizations.
pub fn fresnel_bulk(eps: f64, w: WaveParams, p: Polarization) -> f64 {
    if eps.is_infinite() {
        return -1.0;
    }
    let (u, kappa) = (w.u, w.kappa);
    let km = w.kappa_m(eps);
    let em1 = eps - 1.0;
    let r = match p {
        Polarization::TE => -em1 * u * u / ((kappa + km) * (kappa + km)),
        Polarization::TM => {
            let den = eps * kappa + km;
            -em1 * ((eps + 1.0) * kappa * kappa - u * u) / (den * den)
        }
    };
    if r.is_nan() {
        // u = κ = 0 corner: the limit along κ = u.
        0.0
    } else {
        r
    }
}

/// Reflection coefficient of a slab of thickness `e_a`,
/// `-sinh η / sinh(η + θ)` with `η = e_a κ_m` and `e^{-θ} = -r_bulk`.
pub fn slab_reflection_exact(eps: f64, w: WaveParams, e_a: f64, p: Polarization) -> f64 {
    if eps.is_infinite() {
        return -1.0;
    }
    let bulk = fresnel_bulk(eps, w, p);
    if bulk == 0.0 {
        return 0.0;
    }
    let exp_minus_theta = -bulk;
    let eta = e_a * w.kappa_m(eps);
    let theta = -exp_minus_theta.ln();
    let num = -(-2.0 * eta).exp_m1();
    let den = -(-2.0 * (eta + theta)).exp_m1();
    -exp_minus_theta * num / den
}

/// Slab coefficient obtained by adding up the reflection matrices of the
/// constituent atoms; equivalent to pairwise summation.
///
/// `r_TE = n π a u² (e^{-2κe} - 1) / κ²`, `r_TM = r_TE (1 + 2k²/u²)`; the TM
/// form is written as `n π a (u² + 2k²)(e^{-2κe} - 1) / κ²`, which is finite
/// at `u = 0`.
pub fn slab_reflection_summed(ma: &MaterialModel, w: WaveParams, e_a: f64, p: Polarization) -> Result<f64> {
    let a = ma.alpha_iu(w.u)?.0;
    Ok(summed_coefficient(ma.number_density * a, w, e_a, p))
}

fn summed_coefficient(na: f64, w: WaveParams, e_a: f64, p: Polarization) -> f64 {
    let (u, kappa) = (w.u, w.kappa);
    if kappa == 0.0 {
        return 0.0;
    }
    let k = w.k();
    let weight = match p {
        Polarization::TE => u * u,
        Polarization::TM => u * u + 2.0 * k * k,
    };
    na * PI * weight * (-2.0 * kappa * e_a).exp_m1() / (kappa * kappa)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThinSlabSource {
    /// Summed atomic coefficients for number density `n` and polarizability `a`.
    Summed { number_density: f64, alpha: f64 },
    /// Exact coefficients of a medium of permittivity `eps`.
    Exact { eps: f64 },
}

/// First-order-in-`e_a` slab coefficients.
pub fn thin_slab_first_order(source: ThinSlabSource, w: WaveParams, e_a: f64, p: Polarization) -> f64 {
    let (u, kappa) = (w.u, w.kappa);
    let k2 = w.k().powi(2);
    match source {
        ThinSlabSource::Summed { number_density, alpha } => {
            let weight = match p {
                Polarization::TE => u * u,
                Polarization::TM => u * u + 2.0 * k2,
            };
            -2.0 * PI * number_density * e_a * alpha * weight / kappa
        }
        ThinSlabSource::Exact { eps } => {
            let weight = match p {
                Polarization::TE => u * u,
                Polarization::TM => u * u + (eps + 1.0) / eps * k2,
            };
            -e_a * (eps - 1.0) * weight / (2.0 * kappa)
        }
    }
}

fn wedge<F>(f: F, l: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    try_integrate_2d_wedge(f, &cfg.with_decay_scale(2.0 * l))
}

fn check_length(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Geometry(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn result(q: IntegralResult, factor: f64, method: Method, geometry: GeometrySpec) -> EnergyResult {
    let q = q.scaled(factor);
    EnergyResult { value: q.value, per_unit: geometry.per_unit(), method, geometry, quadrature: Some(q) }
}

/// `(1/2π) ∫du a_B ∫_u^∞ dκ e^{-2κL} [u² r_TE + (2κ² - u²) r_TM]` for a given
/// coefficient pair.
fn atom_wall<R>(mb: &MaterialModel, l: f64, mut refl: R, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    R: FnMut(WaveParams, Polarization) -> Result<f64>,
{
    let q = wedge(
        |u, kappa| {
            let w = WaveParams { u, kappa };
            let te = refl(w, Polarization::TE)?;
            let tm = refl(w, Polarization::TM)?;
            let bracket = u * u * te + (2.0 * kappa * kappa - u * u) * tm;
            Ok(mb.alpha_iu(u)?.0 * (-2.0 * kappa * l).exp() * bracket)
        },
        l,
        cfg,
    )?;
    Ok(q.scaled(1.0 / (2.0 * PI)))
}

/// Exact Casimir–Polder energy of atom `mb` in front of a half-space `ma`.
pub fn exact_atom_plate(ma: &MaterialModel, mb: &MaterialModel, l: f64, cfg: &QuadratureConfig) -> Result<EnergyResult> {
    check_length("L", l)?;
    let q = atom_wall(mb, l, |w, p| Ok(fresnel_bulk(ma.eps_iu(w.u)?, w, p)), cfg)?;
    Ok(result(q, 1.0, Method::Exact, GeometrySpec::AtomPlate { l }))
}

/// Exact energy of atom `mb` in front of a slab `ma` of thickness `e_a`.
pub fn exact_atom_slab(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    e_a: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    check_length("L", l)?;
    check_length("e_A", e_a)?;
    let q = atom_wall(mb, l, |w, p| Ok(slab_reflection_exact(ma.eps_iu(w.u)?, w, e_a, p)), cfg)?;
    Ok(result(q, 1.0, Method::Exact, GeometrySpec::AtomSlab { l, e_a }))
}

/// Atom–slab energy from the first-order scattering formula with the summed
/// slab coefficients; it reproduces the pairwise sum.
pub fn pws_via_reflection(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    e_a: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    check_length("L", l)?;
    check_length("e_A", e_a)?;
    let q = atom_wall(mb, l, |w, p| slab_reflection_summed(ma, w, e_a, p), cfg)?;
    Ok(result(q, 1.0, Method::PwsOracle, GeometrySpec::AtomSlab { l, e_a }))
}

/// How the round-trip operator enters the plate–plate energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RoundTrip {
    /// `ln(1 - r_A r_B e^{-2κL})`: all multiple reflections.
    Full,
    /// `-r_A r_B e^{-2κL}`: a single round trip.
    Single,
}

fn plate_plate_core<R>(l: f64, mut coeffs: R, mode: RoundTrip, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    R: FnMut(WaveParams, Polarization) -> Result<(f64, f64)>,
{
    let q = wedge(
        |u, kappa| {
            let w = WaveParams { u, kappa };
            let prop = (-2.0 * kappa * l).exp();
            let mut sum = 0.0;
            for p in Polarization::BOTH {
                let (ra, rb) = coeffs(w, p)?;
                let x = ra * rb * prop;
                sum += match mode {
                    RoundTrip::Full => (-x).ln_1p(),
                    RoundTrip::Single => -x,
                };
            }
            Ok(kappa * sum)
        },
        l,
        cfg,
    )?;
    Ok(q.scaled(1.0 / (4.0 * PI * PI)))
}

/// Lifshitz energy per unit area between two half-spaces.
pub fn exact_plate_plate(ma: &MaterialModel, mb: &MaterialModel, l: f64, cfg: &QuadratureConfig) -> Result<EnergyResult> {
    check_length("L", l)?;
    let q = plate_plate_core(l, bulk_pair(ma, mb), RoundTrip::Full, cfg)?;
    Ok(result(q, 1.0, Method::Exact, GeometrySpec::PlatePlate { l }))
}

/// Plate–plate energy keeping only one round trip between the plates.
pub fn exact_plate_plate_single_roundtrip(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    check_length("L", l)?;
    let q = plate_plate_core(l, bulk_pair(ma, mb), RoundTrip::Single, cfg)?;
    Ok(result(q, 1.0, Method::Exact, GeometrySpec::PlatePlate { l }))
}

fn bulk_pair<'a>(
    ma: &'a MaterialModel,
    mb: &'a MaterialModel,
) -> impl FnMut(WaveParams, Polarization) -> Result<(f64, f64)> + 'a {
    move |w, p| {
        Ok((fresnel_bulk(ma.eps_iu(w.u)?, w, p), fresnel_bulk(mb.eps_iu(w.u)?, w, p)))
    }
}

/// Lifshitz energy per unit area between two slabs.
pub fn exact_slab_slab(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    e_a: f64,
    e_b: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    check_length("L", l)?;
    check_length("e_A", e_a)?;
    check_length("e_B", e_b)?;
    let q = plate_plate_core(
        l,
        |w, p| {
            Ok((
                slab_reflection_exact(ma.eps_iu(w.u)?, w, e_a, p),
                slab_reflection_exact(mb.eps_iu(w.u)?, w, e_b, p),
            ))
        },
        RoundTrip::Full,
        cfg,
    )?;
    Ok(result(q, 1.0, Method::Exact, GeometrySpec::SlabSlab { l, e_a, e_b }))
}

/// Bulk coefficients of a static medium in terms of `s = κ/u ≥ 1`.
fn static_coefficients(eps: f64, s: f64) -> (f64, f64) {
    let w = WaveParams { u: 1.0, kappa: s };
    (fresnel_bulk(eps, w, Polarization::TE), fresnel_bulk(eps, w, Polarization::TM))
}

fn static_eps(m: &MaterialModel) -> Result<f64> {
    Ok(m.eps_iu(0.0)?)
}

/// Long-range atom–plate energy with the static responses.
///
/// With `κ = u s` the frequency integral is elementary and
/// `U = a_B(0) / (2π) · 3/(8L⁴) ∫_1^∞ ds s⁻⁴ [r_TE(s) + (2s² - 1) r_TM(s)]`.
pub fn exact_atom_plate_long_range(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    check_length("L", l)?;
    let eps = static_eps(ma)?;
    let q = try_integrate_semi_infinite(
        |s: f64| {
            let (te, tm) = static_coefficients(eps, s);
            Ok::<f64, Error>((te + (2.0 * s * s - 1.0) * tm) / s.powi(4))
        },
        1.0,
        &cfg.with_decay_scale(1.0),
    )?;
    let factor = mb.static_alpha_value()? / (2.0 * PI) * 3.0 / (8.0 * l.powi(4));
    Ok(result(q, factor, Method::ExactLongRange, GeometrySpec::AtomPlate { l }))
}

/// Long-range Lifshitz energy with the static responses,
/// `U = -1/(16π² L³) ∫_1^∞ ds s⁻² Σ_p Li₄(r_A^p r_B^p)`.
pub fn exact_plate_plate_long_range(
    ma: &MaterialModel,
    mb: &MaterialModel,
    l: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    check_length("L", l)?;
    let (eps_a, eps_b) = (static_eps(ma)?, static_eps(mb)?);
    let q = try_integrate_semi_infinite(
        |s: f64| {
            let (te_a, tm_a) = static_coefficients(eps_a, s);
            let (te_b, tm_b) = static_coefficients(eps_b, s);
            Ok::<f64, Error>((polylog4(te_a * te_b)? + polylog4(tm_a * tm_b)?) / (s * s))
        },
        1.0,
        &cfg.with_decay_scale(1.0),
    )?;
    let factor = -1.0 / (16.0 * PI * PI * l.powi(3));
    Ok(result(q, factor, Method::ExactLongRange, GeometrySpec::PlatePlate { l }))
}

/// Long-range energy of a small perfectly conducting sphere in front of a
/// perfect mirror, `-9R³ / (16π 𝓛⁴)` (electric plus magnetic dipole response
/// of the sphere).
pub fn exact_small_sphere_perfect_mirror(l_center: f64, radius: f64) -> Result<EnergyResult> {
    let geometry = GeometrySpec::SpherePlate { l_center, radius };
    geometry.validate()?;
    Ok(EnergyResult {
        value: -9.0 * radius.powi(3) / (16.0 * PI * l_center.powi(4)),
        per_unit: PerUnit::Total,
        method: Method::ExactLongRange,
        geometry,
        quadrature: None,
    })
}

/// Exact energy for the geometries the scattering formulas cover. The
/// atom–atom kernel is already exact; spheres are not covered.
pub fn exact_energy(
    geometry: GeometrySpec,
    ma: &MaterialModel,
    mb: &MaterialModel,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    match geometry {
        GeometrySpec::AtomAtom { d } => {
            let mut r = crate::pws::vdw_atom_atom(ma, mb, d, cfg)?;
            r.method = Method::Exact;
            Ok(r)
        }
        GeometrySpec::AtomSlab { l, e_a } => exact_atom_slab(ma, mb, l, e_a, cfg),
        GeometrySpec::AtomPlate { l } => exact_atom_plate(ma, mb, l, cfg),
        GeometrySpec::SlabSlab { l, e_a, e_b } => exact_slab_slab(ma, mb, l, e_a, e_b, cfg),
        GeometrySpec::PlatePlate { l } => exact_plate_plate(ma, mb, l, cfg),
        GeometrySpec::SphereSlab { .. } | GeometrySpec::SpherePlate { .. } => Err(Error::Usage(
            "the exact sphere energy is not available; use the PWS method".into(),
        )),
    }
}
