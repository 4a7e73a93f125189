//! Material response on the imaginary frequency axis.
//!
//! A body is described either by its permittivity `ε(iu)` or by the reduced
//! polarizability `a(iu) = α(iu) / (4π ε₀)` of its constituents together
//! with their number density `n_v`. The Clausius–Mossotti relation converts
//! between the two.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaterialError {
    #[error("permittivity {0} is below 1")]
    PermittivityBelowOne(f64),
    #[error("polarization catastrophe: (4π/3) n_v a = {0} >= 1")]
    PolarizationCatastrophe(f64),
    #[error("invalid material parameter: {0}")]
    InvalidParameter(String),
}

/// `α / (4π ε₀)`, a volume in reduced units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ReducedPolarizability(pub f64);

impl ReducedPolarizability {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Response {
    /// Frequency-independent permittivity.
    Static { eps0: f64 },
    /// `ε(iu) = 1 + (eps0 - 1) / (1 + (u/u_res)²)`.
    LorentzEps { eps0: f64, u_res: f64 },
    /// Frequency-independent polarizability of the constituents.
    StaticAlpha { a0: f64 },
    /// `a(iu) = a0 / (1 + (u/u_res)²)`.
    LorentzAlpha { a0: f64, u_res: f64 },
    /// `ε → ∞`: reflection coefficients are `-1` in both polarizations.
    PerfectMirror,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialModel {
    pub response: Response,
    pub number_density: f64,
}

impl MaterialModel {
    pub fn new(response: Response, number_density: f64) -> Result<Self, MaterialError> {
        let bad = |msg: &str| Err(MaterialError::InvalidParameter(msg.to_string()));
        if !(number_density > 0.0 && number_density.is_finite()) {
            return bad("number density must be finite and > 0");
        }
        match response {
            Response::Static { eps0 } | Response::LorentzEps { eps0, .. } if !(eps0 >= 1.0) => {
                return Err(MaterialError::PermittivityBelowOne(eps0));
            }
            Response::Static { eps0 } | Response::LorentzEps { eps0, .. } if eps0.is_infinite() => {
                return bad("use PerfectMirror for infinite permittivity");
            }
            Response::StaticAlpha { a0 } | Response::LorentzAlpha { a0, .. }
                if !(a0 >= 0.0 && a0.is_finite()) =>
            {
                return bad("polarizability must be finite and >= 0");
            }
            _ => {}
        }
        if let Response::LorentzEps { u_res, .. } | Response::LorentzAlpha { u_res, .. } = response {
            if !(u_res > 0.0 && u_res.is_finite()) {
                return bad("resonance u_res must be finite and > 0");
            }
        }
        Ok(Self { response, number_density })
    }

    /// Static permittivity with unit number density.
    pub fn static_eps(eps0: f64) -> Result<Self, MaterialError> {
        if eps0.is_infinite() && eps0 > 0.0 {
            return Self::new(Response::PerfectMirror, 1.0);
        }
        Self::new(Response::Static { eps0 }, 1.0)
    }

    pub fn static_alpha(a0: f64, number_density: f64) -> Result<Self, MaterialError> {
        Self::new(Response::StaticAlpha { a0 }, number_density)
    }

    pub fn perfect_mirror() -> Self {
        Self { response: Response::PerfectMirror, number_density: 1.0 }
    }

    pub fn with_number_density(self, number_density: f64) -> Result<Self, MaterialError> {
        Self::new(self.response, number_density)
    }

    /// True when the response does not depend on frequency, so every energy
    /// follows a pure power law in the separation.
    pub fn is_static(&self) -> bool {
        matches!(
            self.response,
            Response::Static { .. } | Response::StaticAlpha { .. } | Response::PerfectMirror
        )
    }

    pub fn is_perfect_mirror(&self) -> bool {
        matches!(self.response, Response::PerfectMirror)
    }

    /// `ε(iu)`; infinite for a perfect mirror.
    pub fn eps_iu(&self, u: f64) -> Result<f64, MaterialError> {
        match self.response {
            Response::Static { eps0 } => Ok(eps0),
            Response::LorentzEps { eps0, u_res } => Ok(lorentz(eps0 - 1.0, u, u_res) + 1.0),
            Response::StaticAlpha { .. } | Response::LorentzAlpha { .. } => {
                eps_from_alpha_cm(self.alpha_iu(u)?, self.number_density)
            }
            Response::PerfectMirror => Ok(f64::INFINITY),
        }
    }

    /// `a(iu)` of one constituent.
    pub fn alpha_iu(&self, u: f64) -> Result<ReducedPolarizability, MaterialError> {
        match self.response {
            Response::StaticAlpha { a0 } => Ok(ReducedPolarizability(a0)),
            Response::LorentzAlpha { a0, u_res } => Ok(ReducedPolarizability(lorentz(a0, u, u_res))),
            Response::Static { .. } | Response::LorentzEps { .. } | Response::PerfectMirror => {
                alpha_from_eps_cm(self.eps_iu(u)?, self.number_density)
            }
        }
    }

    pub fn static_alpha_value(&self) -> Result<f64, MaterialError> {
        Ok(self.alpha_iu(0.0)?.0)
    }
}

fn lorentz(strength: f64, u: f64, u_res: f64) -> f64 {
    let r = u / u_res;
    strength / (1.0 + r * r)
}

/// Clausius–Mossotti: `a = 3/(4π n_v) · (ε-1)/(ε+2)`. Accepts `ε = ∞`.
pub fn alpha_from_eps_cm(eps: f64, n_v: f64) -> Result<ReducedPolarizability, MaterialError> {
    if !(eps >= 1.0) {
        return Err(MaterialError::PermittivityBelowOne(eps));
    }
    if !(n_v > 0.0) {
        return Err(MaterialError::InvalidParameter("number density must be > 0".into()));
    }
    let ratio = if eps.is_infinite() {
        1.0
    } else {
        (eps - 1.0) / (eps + 2.0)
    };
    Ok(ReducedPolarizability(3.0 * ratio / (4.0 * PI * n_v)))
}

/// Inverse Clausius–Mossotti: `ε = (1+2y)/(1-y)`, `y = (4π/3) n_v a`.
pub fn eps_from_alpha_cm(a: ReducedPolarizability, n_v: f64) -> Result<f64, MaterialError> {
    if !(a.0 >= 0.0) {
        return Err(MaterialError::InvalidParameter("polarizability must be >= 0".into()));
    }
    let y = 4.0 * PI / 3.0 * n_v * a.0;
    if y >= 1.0 {
        return Err(MaterialError::PolarizationCatastrophe(y));
    }
    Ok(1.0 + 3.0 * y / (1.0 - y))
}

/// Dilute-limit truncation of Clausius–Mossotti, `ε ≈ 1 + 4π n_v a`;
/// it neglects local-field corrections.
pub fn eps_dilute_first_order(a: ReducedPolarizability, n_v: f64) -> f64 {
    1.0 + 4.0 * PI * n_v * a.0
}
