//! Noncommutative symbols over the smooth torus algebra: words in `k`,
//! its derivatives and the resolvent `b₀`, with polynomial `ξ` (or radial
//! `r`) coefficients.

pub mod atom;
pub mod calculus;
pub mod expr;
pub mod parametrix;
pub mod resolvent;
pub mod serial;

pub use atom::{Atom, Unit, Word};
pub use calculus::{
    adjoint_symbol, compute_b1, compute_b2, compute_b2_prefactor, delta_derivative, discard_xi_odd,
    laplacian_symbol, star, symbol_product, xi_derivative, LaplacianSymbol,
};
pub use expr::{Monomial, Phase, SymbolExpr, SymbolTerm};
pub use parametrix::{verify_parametrix, ParametrixResidual};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("{0} is not defined after angular averaging")]
    RadialPhase(&'static str),
    #[error("terms of different phases cannot be combined")]
    MixedPhase,
    #[error("derivation not defined on atom {0}")]
    UnsupportedAtom(String),
    #[error("direction must be 1 or 2, got {0}")]
    Direction(u8),
    #[error("parse error: {0}")]
    Parse(String),
}
