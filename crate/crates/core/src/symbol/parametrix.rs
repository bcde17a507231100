//! Symbol-level check that `b₀ + b₁ + b₂` inverts `σ(kΔk) - λ` (λ = -1)
//! through a given order.

use std::collections::BTreeMap;

use num_traits::One;

use super::calculus::{b0, compute_b1, compute_b2, laplacian_symbol, product_by_derivative_count};
use super::expr::SymbolExpr;
use super::resolvent::vanishes_mod_resolvent;
use super::SymbolError;
use crate::rational::Q;

/// Homogeneous components of `σ(B) ∘ (σ(A) + 1) - 1`, keyed by order.
/// The constant `1 = -λ` is graded together with `a₂`.
#[derive(Clone, Debug)]
pub struct ParametrixResidual {
    pub cutoff: i32,
    pub components: BTreeMap<i32, SymbolExpr>,
}

impl ParametrixResidual {
    /// Orders whose component is not zero modulo the resolvent relation.
    pub fn nonvanishing_orders(&self) -> Vec<i32> {
        self.components
            .iter()
            .filter(|(_, e)| !vanishes_mod_resolvent(e))
            .map(|(o, _)| *o)
            .collect()
    }

    pub fn vanishes(&self) -> bool {
        self.nonvanishing_orders().is_empty()
    }
}

/// Computes the residual components of orders `0` down to `cutoff`.
/// Only `cutoff >= -2` is expected to vanish, since `b₃` is not included.
pub fn verify_parametrix(cutoff: i32) -> Result<ParametrixResidual, SymbolError> {
    let lap = laplacian_symbol();
    let a2_shifted = &lap.a2 + &SymbolExpr::one();
    let a_parts = [(a2_shifted, 2), (lap.a1.clone(), 1), (lap.a0.clone(), 0)];
    let b_parts = [(b0(), -2), (compute_b1(), -3), (compute_b2(), -4)];
    let mut components: BTreeMap<i32, SymbolExpr> = (cutoff..=0).map(|o| (o, SymbolExpr::zero())).collect();
    for (b, ob) in &b_parts {
        for (a, oa) in &a_parts {
            let top = ob + oa;
            if top < cutoff {
                continue;
            }
            let pieces = product_by_derivative_count(b, a, (top - cutoff) as u32)?;
            for (l, piece) in pieces.iter().enumerate() {
                let o = top - l as i32;
                let slot = components.get_mut(&o).expect("order in range");
                *slot = &*slot + piece;
            }
        }
    }
    let zero = components.get_mut(&0).expect("order 0 present");
    *zero = &*zero - &SymbolExpr::constant(Q::one());
    Ok(ParametrixResidual { cutoff, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_vanishes_through_order_minus_two() {
        let r = verify_parametrix(-2).unwrap();
        assert_eq!(r.components.len(), 3);
        assert!(r.vanishes(), "nonvanishing orders {:?}", r.nonvanishing_orders());
    }

    #[test]
    fn order_minus_three_needs_b3() {
        let r = verify_parametrix(-3).unwrap();
        assert_eq!(r.nonvanishing_orders(), vec![-3]);
    }
}
