use thiserror::Error;

use crate::numerics::NumericError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(
        "degenerate denominator at theta = {theta}, x* = {x_star}: 1 - Phi = {complement:e}"
    )]
    DegenerateDenominator {
        theta: f64,
        x_star: f64,
        complement: f64,
    },
    #[error("no partisan-mass root in [0, 1]: roots are {roots:?}")]
    NoInteriorEquilibrium { roots: [f64; 2] },
    #[error("partisan-mass quadratic has complex roots (discriminant {discriminant})")]
    ComplexRoots { discriminant: f64 },
    #[error("both partisan-mass roots lie in [0, 1]: {roots:?}")]
    AmbiguousEquilibrium { roots: [f64; 2] },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
