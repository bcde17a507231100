//! Symbolic and numerical machinery for the Gauss–Bonnet computation on the
//! noncommutative two torus with a conformally perturbed metric.

pub mod modular;
pub mod numeric;
pub mod poly;
pub mod rational;
pub mod reduction;
pub mod symbol;
