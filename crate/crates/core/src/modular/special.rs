//! The functions `f`, `h` and `K` of the final formula.

use std::fmt::Write as _;

use super::closed::ClosedForm;
use super::funcexpr::ModularFunctionExpr;
use super::ModularError;
use crate::rational::{q, qi, to_f64, Q};

/// `f(u) = u^{-1/2}/6 - 1/3 + 𝓛₁ - 2(1 + u^{1/2})𝓛₂ + (1 + u^{1/2})²𝓛₃`.
pub fn f_expr() -> ModularFunctionExpr {
    let mut f = ModularFunctionExpr::term(q(1, 6), -1, None);
    f.add_term(q(-1, 3), 0, None);
    f.add_term(qi(1), 0, Some(1));
    f.add_term(qi(-2), 0, Some(2));
    f.add_term(qi(-2), 1, Some(2));
    f.add_term(qi(1), 0, Some(3));
    f.add_term(qi(2), 1, Some(3));
    f.add_term(qi(1), 2, Some(3));
    f
}

/// `x ↦ f(e^x)`.
pub fn f_closed_form() -> ClosedForm {
    f_expr().to_closed_form()
}

fn c(v: Q) -> ClosedForm {
    ClosedForm::constant(v)
}

fn w(s: i32) -> ClosedForm {
    ClosedForm::w_pow(s)
}

/// The entire function `h` written as a single quotient of exponentials.
pub fn h_reference() -> ClosedForm {
    let x = ClosedForm::x();
    let mut num = c(qi(-1));
    num = &num + &(&c(qi(3)) * &w(1));
    num = &num + &(&c(qi(3)) * &w(2));
    num = &num + &(&(&c(qi(6)) * &w(3)) * &x);
    num = &num - &(&c(qi(3)) * &w(4));
    num = &num - &(&c(qi(3)) * &w(5));
    num = &num + &w(6);
    let num = &(&num * &w(-1)) * &c(qi(-1));
    let wm = &w(1) - &c(qi(1));
    let wp = &w(1) + &c(qi(1));
    let den = &(&c(qi(6)) * &wm.pow(4).expect("nonzero")) * &wp.pow(2).expect("nonzero");
    (&num / &den).expect("nonzero")
}

/// `K(x) = -(x - sh(x/2) - sh(x) + sh(3x/2)/3) / (x² sh(x/2)²)`.
pub fn k_reference() -> ClosedForm {
    let x = ClosedForm::x();
    let mut num = x.clone();
    num = &num - &ClosedForm::sh_half(1);
    num = &num - &ClosedForm::sh_half(2);
    num = &num + &(&c(q(1, 3)) * &ClosedForm::sh_half(3));
    let den = &(&x * &x) * &ClosedForm::sh_half(1).pow(2).expect("nonzero");
    &(&num / &den).expect("nonzero") * &c(qi(-1))
}

fn assert_same(name: &'static str, got: ClosedForm, want: &ClosedForm) -> Result<ClosedForm, ModularError> {
    if got.equals(want) {
        Ok(got)
    } else {
        Err(ModularError::Mismatch { name, difference: (&got - want).to_string() })
    }
}

/// `h(x) = f(e^x)`, checked against the quotient form.
pub fn h_from_f() -> Result<ClosedForm, ModularError> {
    assert_same("h", f_closed_form(), &h_reference())
}

/// `K(x) = 4(e^{x/2} - 1)² x⁻² h(x)`, checked against the sh form.
pub fn k_from_h() -> Result<ClosedForm, ModularError> {
    let h = h_from_f()?;
    let wm = &w(1) - &c(qi(1));
    let x = ClosedForm::x();
    let factor = (&(&c(qi(4)) * &(&wm * &wm)) / &(&x * &x))?;
    assert_same("K", &factor * &h, &k_reference())
}

/// Taylor coefficients of `h` at 0 up to `x^order`.
pub fn taylor_h(order: usize) -> Result<Vec<Q>, ModularError> {
    h_from_f()?.taylor(order)
}

/// `F(x) + F(-x) = 0` exactly.
pub fn is_odd(f: &ClosedForm) -> bool {
    (f + &f.reflect()).is_zero()
}

/// Numeric evaluator that switches to the Taylor polynomial near the
/// removable singularity at `x = 0`.
#[derive(Clone, Debug)]
pub struct Sampler {
    f: ClosedForm,
    series: Option<Vec<f64>>,
    radius: f64,
}

impl Sampler {
    pub const DEFAULT_RADIUS: f64 = 0.5;
    pub const DEFAULT_ORDER: usize = 16;

    pub fn new(f: ClosedForm) -> Self {
        let series = f
            .taylor(Self::DEFAULT_ORDER)
            .ok()
            .map(|c| c.iter().map(to_f64).collect());
        Self { f, series, radius: Self::DEFAULT_RADIUS }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.series {
            Some(c) if x.abs() < self.radius => c.iter().rev().fold(0.0, |acc, a| acc * x + a),
            _ => self.f.eval(x),
        }
    }
}

pub fn sample(f: &ClosedForm, grid: &[f64]) -> Vec<(f64, f64)> {
    let s = Sampler::new(f.clone());
    grid.iter().map(|&x| (x, s.eval(x))).collect()
}

/// Rows `x,value` with 15 significant digits.
pub fn to_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("x,value\n");
    for (x, v) in rows {
        writeln!(out, "{x:.14e},{v:.14e}").expect("string write");
    }
    out
}

/// `n` evenly spaced points on `[a, b]`.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    let m = (n - 1) as f64;
    (0..n).map(|i| (a * (m - i as f64) + b * i as f64) / m).collect()
}
