use thiserror::Error;

use crate::materials::MaterialError;
use crate::quadrature::QuadError;
use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecialFunction(#[from] SpecFunError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("sphere overlaps the slab: center distance {center} <= radius {radius}")]
    Contact { center: f64, radius: f64 },
    #[error("no interior extremum in [{lo}, {hi}]")]
    NoExtremum { lo: f64, hi: f64 },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
