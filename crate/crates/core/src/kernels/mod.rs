//! Special functions and radial basis functions.

pub mod bessel;
pub mod rbf;

use thiserror::Error;

pub use bessel::{bessel_eval, i0, i1, j0, j1, BesselFamily, BesselOrder, BesselSpec};
pub use rbf::{
    pair_from_particular, ParticularPair, RadialDerivatives, RadialProfile, RbfKind, RbfTag, ReversePair,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("singular profile: {0}")]
    Singular(String),
}
