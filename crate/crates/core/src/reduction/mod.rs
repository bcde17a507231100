//! Reduction of the `b₂` integral to a function of the modular operator.

pub mod fixtures;
pub mod pipeline;
pub mod stages;
pub mod trace;
pub mod validate;

pub use pipeline::{derive, derive_with, Derivation, StageRecord};
pub use stages::{
    allleft_to_reduced, angular_average, angular_mean, apply_move_lemma, assemble_f, beta_integral,
    cyclic_left_b0, integrate_by_parts_r, modular_normalize, radial_integrate_allleft, split_by_radial_power,
    split_by_resolvent, sum_reduced, trace_by_parts, under_trace, ReducedTerm, ResolventSplit,
};
pub use trace::{TraceExpr, TraceTerm};

use crate::symbol::SymbolError;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Symbol(SymbolError),
    #[error("term with odd powers of xi: {0}")]
    OddTerm(String),
    #[error("{0} applied to an expression of the wrong phase")]
    WrongPhase(&'static str),
    #[error("{stage}: unexpected term shape {term}")]
    Shape { stage: &'static str, term: String },
    #[error("divergent radial integral (p = {p}, q = {q})")]
    Divergent { p: u32, q: u32 },
    #[error("directions disagree: {first} vs {second}")]
    Asymmetric { first: String, second: String },
    #[error("assembled function differs from f by {difference}")]
    Mismatch { difference: String },
}
