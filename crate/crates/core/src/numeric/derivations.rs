//! Two commuting inner derivations `δᵢ = [Aᵢ, ·]` on a matrix algebra, and
//! evaluation of symbol words at a point.
//!
//! Inner derivations satisfy `τ ∘ δᵢ = 0` and `δ₁δ₂ = δ₂δ₁` when the `Aᵢ`
//! commute, which is all the reduction uses.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;

use super::matrix::{conjugate_diag, random_unitary, CMat, MatrixAlgebraInstance};
use super::NumericError;
use crate::rational::to_f64;
use crate::symbol::{Atom, Monomial, SymbolExpr, Word};

#[derive(Clone, Debug)]
pub struct InnerDerivations {
    pub a1: CMat,
    pub a2: CMat,
}

impl InnerDerivations {
    pub fn random(d: usize, rng: &mut impl Rng) -> Self {
        let v = random_unitary(d, rng);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Self { a1: conjugate_diag(&v, &x), a2: conjugate_diag(&v, &y) }
    }

    pub fn apply(&self, i: u8, x: &CMat) -> CMat {
        let a = if i == 1 { &self.a1 } else { &self.a2 };
        a * x - x * a
    }

    /// `δ₁^a δ₂^b (x)`.
    pub fn apply_multi(&self, a: u32, b: u32, x: &CMat) -> CMat {
        let mut y = x.clone();
        for _ in 0..a {
            y = self.apply(1, &y);
        }
        for _ in 0..b {
            y = self.apply(2, &y);
        }
        y
    }
}

/// Evaluates words over a fixed instance and derivation pair, caching the
/// `k`-dependent factors.
pub struct WordEvaluator<'a> {
    pub inst: &'a MatrixAlgebraInstance,
    pub ders: &'a InnerDerivations,
    kpow: HashMap<i32, CMat>,
    dk: HashMap<(u32, u32), CMat>,
}

impl<'a> WordEvaluator<'a> {
    pub fn new(inst: &'a MatrixAlgebraInstance, ders: &'a InnerDerivations) -> Self {
        Self { inst, ders, kpow: HashMap::new(), dk: HashMap::new() }
    }

    fn kpow(&mut self, n: i32) -> CMat {
        let inst = self.inst;
        self.kpow.entry(n).or_insert_with(|| inst.k_pow(f64::from(n))).clone()
    }

    fn dk(&mut self, a: u32, b: u32) -> CMat {
        let (inst, ders) = (self.inst, self.ders);
        self.dk.entry((a, b)).or_insert_with(|| ders.apply_multi(a, b, inst.k())).clone()
    }

    /// Value of a word with `b₀ = (s k² + 1)⁻¹`.
    pub fn word(&mut self, w: &Word, s: f64) -> Result<CMat, NumericError> {
        let d = self.inst.dim();
        let mut acc = CMat::identity(d, d);
        for a in w.atoms() {
            let f = match a {
                Atom::KPow(n) => self.kpow(*n),
                Atom::DerivK(i, j) => self.dk(*i, *j),
                Atom::Resolvent(p) => {
                    let v: Vec<f64> = self
                        .inst
                        .eigenvalues()
                        .iter()
                        .map(|l| (s * l * l + 1.0).powi(-(*p as i32)))
                        .collect();
                    self.inst.from_eigenbasis(&CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                        d,
                        v.into_iter().map(|x| Complex64::new(x, 0.0)),
                    )))
                }
                Atom::ModApplied(func, inner) => {
                    let x = self.word(inner, s)?;
                    self.inst.apply_modular(func, &x)?
                }
            };
            acc *= f;
        }
        Ok(acc)
    }

    /// `τ` of an expression at `ξ = (x1, x2)` (ξ-phase) or at radius `x1`
    /// (radial phase, `x2` ignored).
    pub fn trace_at(&mut self, e: &SymbolExpr, x1: f64, x2: f64) -> Result<Complex64, NumericError> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut cache: HashMap<Word, Complex64> = HashMap::new();
        for t in e.terms() {
            let (mono, s) = match t.mono {
                Monomial::Xi(a, b) => (x1.powi(a as i32) * x2.powi(b as i32), x1 * x1 + x2 * x2),
                Monomial::Radial(p) => (x1.powi(p as i32), x1 * x1),
            };
            let tr = match cache.get(&t.word) {
                Some(v) => *v,
                None => {
                    let v = self.inst.tau(&self.word(&t.word, s)?);
                    cache.insert(t.word.clone(), v);
                    v
                }
            };
            acc += tr * mono * to_f64(&t.coeff);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::matrix::{random_matrix, relative_error, rng};

    #[test]
    fn derivations_commute_and_kill_trace() {
        let mut r = rng(11);
        let ders = InnerDerivations::random(5, &mut r);
        let x = random_matrix(5, &mut r);
        let a = ders.apply(1, &ders.apply(2, &x));
        let b = ders.apply(2, &ders.apply(1, &x));
        assert!(relative_error(&a, &b) < 1e-12);
        assert!(ders.apply(1, &x).trace().norm() < 1e-12);
    }

    #[test]
    fn resolvent_inverts() {
        let mut r = rng(12);
        let inst = MatrixAlgebraInstance::random(4, 0.3, &mut r);
        let ders = InnerDerivations::random(4, &mut r);
        let mut ev = WordEvaluator::new(&inst, &ders);
        let b0 = ev.word(&Word::single(Atom::Resolvent(1)), 2.5).unwrap();
        let k2 = inst.k_pow(2.0);
        let id = CMat::identity(4, 4);
        let prod = b0 * (k2 * Complex64::new(2.5, 0.0) + &id);
        assert!(relative_error(&prod, &id) < 1e-12);
    }
}
