//! Functions of the modular operator: the modified logarithms `𝓛ₘ`, and
//! the functions `f`, `h`, `K` in exact and numeric form.

pub mod closed;
pub mod funcexpr;
pub mod lfunc;
pub mod special;

pub use closed::ClosedForm;
pub use funcexpr::ModularFunctionExpr;
pub use lfunc::{eval_l, l_closed_form, l_quadrature};
pub use special::{f_closed_form, f_expr, h_from_f, is_odd, k_from_h, sample, taylor_h, Sampler};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModularError {
    #[error("argument {0} outside the domain u > 0")]
    Domain(f64),
    #[error("index m = {0} not supported")]
    Index(u8),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole at x = 0")]
    Pole,
    #[error("product of two modified logarithms")]
    NonLinear,
    #[error("quadrature did not converge (error estimate {0:e})")]
    Quadrature(f64),
    #[error("{name} does not simplify to its reference form; difference {difference}")]
    Mismatch { name: &'static str, difference: String },
}
