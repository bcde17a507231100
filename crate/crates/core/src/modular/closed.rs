//! Exact rational functions in `x` and `w = e^{x/2}`.
//!
//! `x` and `w` are algebraically independent over the rationals, so two
//! quotients are equal as functions iff their cross products agree as
//! polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ModularError;
use crate::poly::Poly;
use crate::rational::{factorial, qi, Q};

const X: usize = 0;
const W: usize = 1;

#[derive(Clone, Debug)]
pub struct ClosedForm {
    num: Poly,
    den: Poly,
}

impl ClosedForm {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ModularError> {
        if den.is_zero() {
            return Err(ModularError::ZeroDenominator);
        }
        Ok(Self { num, den }.reduced())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one(2) }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero(2))
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(2, c))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::var(2, X))
    }

    /// `w^s = e^{s x / 2}`.
    pub fn w_pow(s: i32) -> Self {
        Self::from_poly(Poly::monomial(2, W, s, Q::one()))
    }

    /// `(w^a - w^{-a}) / 2 = sh(a x / 2)`.
    pub fn sh_half(a: i32) -> Self {
        let p = &Poly::monomial(2, W, a, Q::one() / qi(2)) - &Poly::monomial(2, W, -a, Q::one() / qi(2));
        Self::from_poly(p)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn pow(&self, n: i32) -> Result<Self, ModularError> {
        let base = if n >= 0 { self.clone() } else { self.recip()? };
        let mut acc = Self::constant(Q::one());
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn recip(&self) -> Result<Self, ModularError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Exact equality of the represented functions.
    pub fn equals(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }

    /// `F(-x)`: `x ↦ -x`, `w ↦ w⁻¹`.
    pub fn reflect(&self) -> Self {
        let flip = |p: &Poly| {
            p.map_monomials(|e| {
                let sign = if e[X] % 2 == 0 { Q::one() } else { -Q::one() };
                (vec![e[X], -e[W]], sign)
            })
        };
        Self { num: flip(&self.num), den: flip(&self.den) }.reduced()
    }

    /// Divides out monomial factors and common factors `(w - 1)`, `(w + 1)`.
    fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            return Self { num: Poly::zero(2), den: Poly::one(2) };
        }
        for v in [X, W] {
            let s = self.den.min_exponent(v).min(self.num.min_exponent(v));
            self.num = self.num.shift(v, -s);
            self.den = self.den.shift(v, -s);
        }
        for root in [qi(1), qi(-1)] {
            loop {
                match (self.num.div_linear(W, &root), self.den.div_linear(W, &root)) {
                    (Some(n), Some(d)) => {
                        self.num = n;
                        self.den = d;
                    }
                    _ => break,
                }
            }
        }
        self.normalize_leading()
    }

    fn normalize_leading(mut self) -> Self {
        if let Some((_, c)) = self.den.terms().last() {
            let c = c.clone();
            if !c.is_one() {
                let inv = Q::one() / c;
                self.num = self.num.scale(&inv);
                self.den = self.den.scale(&inv);
            }
        }
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pt = [x, (x / 2.0).exp()];
        self.num.eval(&pt) / self.den.eval(&pt)
    }

    /// Laurent coefficients in `x` around 0: returns `(v, c)` with
    /// `F(x) = Σ c[i] x^{v+i}`, `i < len`.
    pub fn laurent(&self, len: usize) -> Result<(i32, Vec<Q>), ModularError> {
        let mut extra = 8;
        loop {
            let (nv, ns) = series_of(&self.num, len + extra);
            let (dv, ds) = series_of(&self.den, len + extra);
            let Some(d0) = ds.iter().position(|c| !c.is_zero()) else {
                if extra > 64 {
                    return Err(ModularError::ZeroDenominator);
                }
                extra *= 2;
                continue;
            };
            if d0 + len > ds.len() {
                extra *= 2;
                continue;
            }
            let Some(n0) = ns.iter().position(|c| !c.is_zero()) else {
                return Ok((0, vec![Q::zero(); len]));
            };
            if n0 + len > ns.len() {
                extra *= 2;
                continue;
            }
            let num = &ns[n0..];
            let den = &ds[d0..];
            let mut out: Vec<Q> = Vec::with_capacity(len);
            for i in 0..len {
                let mut acc = num.get(i).cloned().unwrap_or_else(Q::zero);
                for j in 1..=i {
                    acc -= &den[j] * &out[i - j];
                }
                out.push(acc / &den[0]);
            }
            let v = (nv + n0 as i32) - (dv + d0 as i32);
            return Ok((v, out));
        }
    }

    /// Taylor coefficients of `x^0 .. x^order`; errors if `F` has a pole at 0.
    pub fn taylor(&self, order: usize) -> Result<Vec<Q>, ModularError> {
        let (v, c) = self.laurent(order + 1)?;
        if v < 0 && c.iter().any(|q| !q.is_zero()) {
            return Err(ModularError::Pole);
        }
        let mut out = vec![Q::zero(); order + 1];
        for (i, q) in c.into_iter().enumerate() {
            let p = v as usize + i;
            if p <= order {
                out[p] = q;
            }
        }
        Ok(out)
    }
}

/// Power series in `x` of a polynomial in `(x, w = e^{x/2})`, truncated to
/// `len` coefficients starting at the returned valuation offset.
fn series_of(p: &Poly, len: usize) -> (i32, Vec<Q>) {
    let lo = p.min_exponent(X);
    let mut out = vec![Q::zero(); len];
    for (e, c) in p.terms() {
        let off = (e[X] - lo) as usize;
        if off >= len {
            continue;
        }
        // e^{b x / 2} = Σ (b/2)^n x^n / n!
        let half_b = Q::new(e[W].into(), 2.into());
        let mut pw = Q::one();
        for n in 0..(len - off) {
            out[off + n] += c * &pw / factorial(n as u32);
            pw *= &half_b;
        }
    }
    (lo, out)
}

impl PartialEq for ClosedForm {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add for &ClosedForm {
    type Output = ClosedForm;
    fn add(self, rhs: &ClosedForm) -> ClosedForm {
        if self.den == rhs.den {
            return ClosedForm { num: &self.num + &rhs.num, den: self.den.clone() }.reduced();
        }
        ClosedForm {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .reduced()
    }
}

impl Neg for &ClosedForm {
    type Output = ClosedForm;
    fn neg(self) -> ClosedForm {
        ClosedForm { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &ClosedForm {
    type Output = ClosedForm;
    fn sub(self, rhs: &ClosedForm) -> ClosedForm {
        self + &(-rhs)
    }
}

impl Mul for &ClosedForm {
    type Output = ClosedForm;
    fn mul(self, rhs: &ClosedForm) -> ClosedForm {
        ClosedForm { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduced()
    }
}

impl Div for &ClosedForm {
    type Output = Result<ClosedForm, ModularError>;
    fn div(self, rhs: &ClosedForm) -> Result<ClosedForm, ModularError> {
        ClosedForm::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
