//! Sparse multivariate Laurent polynomials with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{format_q, Q};

/// A polynomial in a fixed number of commuting variables. Exponents may be
/// negative, so every variable is treated as invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, i, 1, Q::one())
    }

    /// `c * x_i^e`
    pub fn monomial(nvars: usize, i: usize, e: i32, c: Q) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: Q) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Rewrites every monomial through `f`, which returns the new exponent
    /// vector and a coefficient multiplier.
    pub fn map_monomials(&self, f: impl Fn(&[i32]) -> (Vec<i32>, Q)) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let (ne, m) = f(e);
            out.add_term(ne, c * m);
        }
        out
    }

    /// Lowest exponent of variable `i` over all terms (0 for the zero polynomial).
    pub fn min_exponent(&self, i: usize) -> i32 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    pub fn max_exponent(&self, i: usize) -> i32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Multiplies by `x_i^shift`.
    pub fn shift(&self, i: usize, shift: i32) -> Self {
        self.map_monomials(|e| {
            let mut ne = e.to_vec();
            ne[i] += shift;
            (ne, Q::one())
        })
    }

    /// Exact division by `(x_i - c)`. Returns `None` when it does not divide.
    /// Negative exponents of `x_i` are handled by first shifting them out.
    pub fn div_linear(&self, i: usize, c: &Q) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let low = self.min_exponent(i);
        let p = self.shift(i, -low);
        // Group by the other exponents: coefficient polynomials in x_i.
        let mut groups: BTreeMap<Vec<i32>, BTreeMap<i32, Q>> = BTreeMap::new();
        for (e, v) in &p.terms {
            let mut rest = e.clone();
            let d = rest[i];
            rest[i] = 0;
            groups.entry(rest).or_default().insert(d, v.clone());
        }
        let mut out = Self::zero(self.nvars);
        for (rest, coeffs) in groups {
            let deg = *coeffs.keys().max().unwrap();
            // synthetic division from the top degree down
            let mut carry = Q::zero();
            for d in (0..=deg).rev() {
                let a = coeffs.get(&d).cloned().unwrap_or_else(Q::zero) + &carry;
                if d == 0 {
                    if !a.is_zero() {
                        return None;
                    }
                } else {
                    let mut e = rest.clone();
                    e[i] = d - 1 + low;
                    out.add_term(e, a.clone());
                    carry = a * c;
                }
            }
        }
        Some(out)
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = crate::rational::to_f64(c);
                for (x, &k) in point.iter().zip(e) {
                    v *= x.powi(k);
                }
                v
            })
            .sum()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut acc: BTreeMap<Vec<i32>, Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: acc }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if vars.is_empty() {
                    format_q(c)
                } else {
                    format!("{}*{}", format_q(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn square_of_binomial() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = &x + &y;
        let sq = s.pow(2);
        let expect = Poly::from_terms(
            2,
            [(vec![2, 0], qi(1)), (vec![1, 1], qi(2)), (vec![0, 2], qi(1))],
        );
        assert_eq!(sq, expect);
        assert!((&sq - &expect).is_zero());
    }

    #[test]
    fn linear_division() {
        let w = Poly::var(2, 1);
        let one = Poly::one(2);
        let f = &(&w - &one) * &(&w + &Poly::var(2, 0));
        let g = f.div_linear(1, &qi(1)).unwrap();
        assert_eq!(g, &w + &Poly::var(2, 0));
        assert!(g.div_linear(1, &qi(1)).is_none());
        // Laurent input: (w - 1) / w
        let h = (&w - &one).shift(1, -1);
        assert_eq!(h.div_linear(1, &qi(1)).unwrap(), Poly::monomial(2, 1, -1, qi(1)));
    }
}
