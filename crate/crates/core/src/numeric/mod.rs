//! Numerical oracles: quadrature, a finite matrix model of the algebra
//! and a truncated lattice model of the torus.

pub mod checks;
pub mod derivations;
pub mod identities;
pub mod lattice;
pub mod matrix;
pub mod quadrature;
pub mod steps;

pub use matrix::{CMat, MatrixAlgebraInstance};

use crate::modular::ModularError;

#[derive(Debug, thiserror::Error)]
pub enum NumericError {
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not positive definite")]
    NotPositive,
    #[error("quadrature did not converge (achieved error {0:e})")]
    Quadrature(f64),
    #[error("ill-conditioned least-squares fit (condition number {0:e})")]
    IllConditioned(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Modular(#[from] ModularError),
}
