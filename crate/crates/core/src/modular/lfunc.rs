//! The modified logarithms
//! `𝓛ₘ(u) = (-1)^m (u-1)^{-(m+1)} (log u - Σ_{j=1}^m (-1)^{j+1} (u-1)^j / j)`.

use num_traits::One;

use super::closed::ClosedForm;
use super::ModularError;
use crate::numeric::quadrature::{integrate, QuadratureOptions};
use crate::rational::{qi, Q};

/// Radius around `u = 1` inside which the power series is used.
pub const SERIES_RADIUS: f64 = 0.1;
/// Number of series terms beyond the constant.
pub const SERIES_DEGREE: usize = 20;

fn check(m: u8, u: f64) -> Result<(), ModularError> {
    if m > 3 {
        return Err(ModularError::Index(m));
    }
    if !(u > 0.0) || !u.is_finite() {
        return Err(ModularError::Domain(u));
    }
    Ok(())
}

/// Direct formula; loses accuracy near `u = 1`.
pub fn l_direct(m: u8, u: f64) -> Result<f64, ModularError> {
    check(m, u)?;
    let t = u - 1.0;
    let mut s = u.ln();
    let mut tp = 1.0;
    for j in 1..=i32::from(m) {
        tp *= t;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        s -= sign * tp / f64::from(j);
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * s / t.powi(i32::from(m) + 1))
}

/// `Σ_{i=0}^{20} (-t)^i / (m + 1 + i)` with `t = u - 1`.
pub fn l_series(m: u8, u: f64) -> Result<f64, ModularError> {
    check(m, u)?;
    let t = u - 1.0;
    let mut acc = 0.0;
    let mut p = 1.0;
    for i in 0..=SERIES_DEGREE {
        acc += p / (f64::from(m) + 1.0 + i as f64);
        p *= -t;
    }
    Ok(acc)
}

pub fn eval_l(m: u8, u: f64) -> Result<f64, ModularError> {
    check(m, u)?;
    if (u - 1.0).abs() < SERIES_RADIUS {
        l_series(m, u)
    } else {
        l_direct(m, u)
    }
}

/// `∫₀^∞ x^m / (x+1)^{m+1} · 1/(xu+1) dx`, evaluated after `x = t/(1-t)`
/// as `∫₀¹ t^m / (1 + t(u-1)) dt`.
pub fn l_quadrature(m: u8, u: f64) -> Result<f64, ModularError> {
    check(m, u)?;
    let opts = QuadratureOptions { abs_tol: 1e-14, rel_tol: 1e-13, ..Default::default() };
    let r = integrate(|t| t.powi(i32::from(m)) / (1.0 + t * (u - 1.0)), 0.0, 1.0, &opts);
    if !r.converged {
        return Err(ModularError::Quadrature(r.error));
    }
    Ok(r.value)
}

/// `𝓛ₘ(e^x)` as a rational function of `x` and `w = e^{x/2}`.
pub fn l_closed_form(m: u8) -> ClosedForm {
    let t = &ClosedForm::w_pow(2) - &ClosedForm::constant(Q::one());
    let mut bracket = ClosedForm::x();
    let mut tp = ClosedForm::constant(Q::one());
    for j in 1..=i64::from(m) {
        tp = &tp * &t;
        let c = if j % 2 == 1 { Q::one() / qi(j) } else { -Q::one() / qi(j) };
        bracket = &bracket - &(&tp * &ClosedForm::constant(c));
    }
    let sign = if m.is_multiple_of(2) { Q::one() } else { -Q::one() };
    let den = t.pow(i32::from(m) + 1).expect("nonzero");
    &(&bracket / &den).expect("nonzero") * &ClosedForm::constant(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn value_at_one() {
        for m in 0..=3u8 {
            let v = eval_l(m, 1.0).unwrap();
            assert!((v - 1.0 / (f64::from(m) + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        for m in 1..=3u8 {
            for u in [0.9, 1.1, 0.95, 1.05] {
                let d = (l_direct(m, u).unwrap() - l_series(m, u).unwrap()).abs();
                assert!(d < 1e-11, "m={m} u={u} diff={d}");
            }
        }
    }

    #[test]
    fn continuous_across_one() {
        let a = eval_l(2, 1.0 - 1e-3).unwrap();
        let b = eval_l(2, 1.0 + 1e-3).unwrap();
        let mid = eval_l(2, 1.0).unwrap();
        assert!((a - mid).abs() < 1e-3 && (b - mid).abs() < 1e-3);
    }

    #[test]
    fn matches_quadrature() {
        for m in 1..=3u8 {
            for u in [1e-3, 0.2, 4.0, 70.0, 1e3] {
                let d = (eval_l(m, u).unwrap() - l_quadrature(m, u).unwrap()).abs();
                assert!(d < 1e-10, "m={m} u={u} diff={d}");
            }
        }
    }

    #[test]
    fn closed_form_taylor_at_zero() {
        // 𝓛ₘ(1) = 1/(m+1)
        for m in 0..=3u8 {
            let t = l_closed_form(m).taylor(1).unwrap();
            assert_eq!(t[0], q(1, i64::from(m) + 1));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(eval_l(1, 0.0), Err(ModularError::Domain(_))));
        assert!(matches!(eval_l(1, -2.0), Err(ModularError::Domain(_))));
        assert!(matches!(eval_l(5, 2.0), Err(ModularError::Index(5))));
    }
}
