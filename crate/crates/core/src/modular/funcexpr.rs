//! Formal sums `Σ c · u^{s/2} · 𝓛ₘ(u)` of functions of the modular operator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::closed::ClosedForm;
use super::lfunc::{eval_l, l_closed_form};
use super::ModularError;
use crate::rational::{format_q, to_f64, Q};

/// Keyed by `(s, m)`: `u^{s/2}` times `𝓛ₘ(u)` when `m` is present.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModularFunctionExpr {
    terms: BTreeMap<(i32, Option<u8>), Q>,
}

impl ModularFunctionExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Q::one(), 0, None)
    }

    /// `c · u^{s/2} · 𝓛ₘ(u)` (no `𝓛` factor when `m` is `None`).
    pub fn term(c: Q, half_power: i32, m: Option<u8>) -> Self {
        let mut e = Self::zero();
        e.add_term(c, half_power, m);
        e
    }

    pub fn add_term(&mut self, c: Q, half_power: i32, m: Option<u8>) {
        if c.is_zero() {
            return;
        }
        let key = (half_power, m);
        let slot = self.terms.entry(key).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Option<u8>, &Q)> {
        self.terms.iter().map(|(&(s, m), c)| (s, m, c))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (s, m, v) in self.terms() {
            out.add_term(v * c, s, m);
        }
        out
    }

    /// Multiplication by `u^{s/2}`.
    pub fn shift(&self, half_power: i32) -> Self {
        let mut out = Self::zero();
        for (s, m, v) in self.terms() {
            out.add_term(v.clone(), s + half_power, m);
        }
        out
    }

    /// Value at `u > 0`.
    pub fn eval(&self, u: f64) -> Result<f64, ModularError> {
        if u <= 0.0 || !u.is_finite() {
            return Err(ModularError::Domain(u));
        }
        let mut acc = 0.0;
        for (s, m, c) in self.terms() {
            let mut v = to_f64(c) * u.powf(f64::from(s) / 2.0);
            if let Some(m) = m {
                v *= eval_l(m, u)?;
            }
            acc += v;
        }
        Ok(acc)
    }

    /// The function `x ↦ F(e^x)` as an exact rational function of `(x, e^{x/2})`.
    pub fn to_closed_form(&self) -> ClosedForm {
        let mut acc = ClosedForm::zero();
        for (s, m, c) in self.terms() {
            let mut t = &ClosedForm::w_pow(s) * &ClosedForm::constant(c.clone());
            if let Some(m) = m {
                t = &t * &l_closed_form(m);
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl Add for &ModularFunctionExpr {
    type Output = ModularFunctionExpr;
    fn add(self, rhs: &ModularFunctionExpr) -> ModularFunctionExpr {
        let mut out = self.clone();
        for (s, m, c) in rhs.terms() {
            out.add_term(c.clone(), s, m);
        }
        out
    }
}

impl Neg for &ModularFunctionExpr {
    type Output = ModularFunctionExpr;
    fn neg(self) -> ModularFunctionExpr {
        self.scale(&-Q::one())
    }
}

impl Sub for &ModularFunctionExpr {
    type Output = ModularFunctionExpr;
    fn sub(self, rhs: &ModularFunctionExpr) -> ModularFunctionExpr {
        self + &(-rhs)
    }
}

/// Product with a pure power sum; fails if both factors contain `𝓛`.
impl Mul for &ModularFunctionExpr {
    type Output = Result<ModularFunctionExpr, ModularError>;
    fn mul(self, rhs: &ModularFunctionExpr) -> Result<ModularFunctionExpr, ModularError> {
        let mut out = ModularFunctionExpr::zero();
        for (s1, m1, c1) in self.terms() {
            for (s2, m2, c2) in rhs.terms() {
                let m = match (m1, m2) {
                    (Some(_), Some(_)) => return Err(ModularError::NonLinear),
                    (a, b) => a.or(b),
                };
                out.add_term(c1 * c2, s1 + s2, m);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ModularFunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (s, m, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let mut factors = Vec::new();
            if !a.is_one() {
                factors.push(format_q(&a));
            }
            match s {
                0 => {}
                2 => factors.push("u".into()),
                s if s % 2 == 0 => factors.push(format!("u^{}", s / 2)),
                s => factors.push(format!("u^({s}/2)")),
            }
            if let Some(m) = m {
                factors.push(format!("L{m}(u)"));
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
