use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::atom::{Atom, Word};
use super::SymbolError;
use crate::rational::{format_q, Q};

/// Whether an expression still carries the cotangent variables `ξ₁, ξ₂` or
/// has been angularly averaged to the radial variable `r = |ξ|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Xi,
    Radial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    /// `ξ₁^a ξ₂^b`
    Xi(u32, u32),
    /// `r^p`
    Radial(u32),
}

impl Monomial {
    pub const ONE: Monomial = Monomial::Xi(0, 0);

    pub fn degree(&self) -> u32 {
        match *self {
            Monomial::Xi(a, b) => a + b,
            Monomial::Radial(p) => p,
        }
    }

    pub fn phase(&self) -> Phase {
        match self {
            Monomial::Xi(..) => Phase::Xi,
            Monomial::Radial(_) => Phase::Radial,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        match (*self, *other) {
            (Monomial::Xi(a, b), Monomial::Xi(c, d)) => Some(Monomial::Xi(a + c, b + d)),
            (Monomial::Radial(p), Monomial::Radial(q)) => Some(Monomial::Radial(p + q)),
            _ => None,
        }
    }

    /// The monomial `1` in the given phase.
    pub fn unit(phase: Phase) -> Monomial {
        match phase {
            Phase::Xi => Monomial::Xi(0, 0),
            Phase::Radial => Monomial::Radial(0),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |v: &str, e: u32| match e {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{e}"),
        };
        match *self {
            Monomial::Xi(a, b) => {
                let s = [pow("xi1", a), pow("xi2", b)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                write!(f, "{s}")
            }
            Monomial::Radial(p) => write!(f, "{}", pow("r", p)),
        }
    }
}

/// One summand `coeff · monomial · word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTerm {
    pub coeff: Q,
    pub mono: Monomial,
    pub word: Word,
}

impl SymbolTerm {
    pub fn new(coeff: Q, mono: Monomial, word: Word) -> Self {
        Self { coeff, mono, word }
    }

    /// Symbol order: ξ-degree minus two per `b₀` factor.
    pub fn order(&self) -> i32 {
        self.mono.degree() as i32 - 2 * self.word.resolvent_power() as i32
    }
}

/// Finite sum of terms, merged on identical `(monomial, word)`. Zero
/// coefficients never survive, so structural equality is equality of
/// canonical forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolExpr {
    terms: BTreeMap<(Monomial, Word), Q>,
}

impl SymbolExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit symbol (ξ-phase).
    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Monomial::ONE, Word::empty())
    }

    pub fn monomial(c: Q, mono: Monomial, word: Word) -> Self {
        let mut e = Self::zero();
        e.push(c, mono, word);
        e
    }

    pub fn atom(a: Atom) -> Self {
        Self::monomial(Q::one(), Monomial::ONE, Word::single(a))
    }

    /// Builds from terms, re-normalizing words. Fails on mixed phases.
    pub fn from_terms(terms: impl IntoIterator<Item = SymbolTerm>) -> Result<Self, SymbolError> {
        let mut e = Self::zero();
        for t in terms {
            e.try_push(t.coeff, t.mono, t.word)?;
        }
        Ok(e)
    }

    pub fn try_push(&mut self, c: Q, mono: Monomial, word: Word) -> Result<(), SymbolError> {
        if let Some(p) = self.phase() {
            if p != mono.phase() {
                return Err(SymbolError::MixedPhase);
            }
        }
        self.push_unchecked(c, mono, word);
        Ok(())
    }

    /// Adds a term; panics on a phase mismatch (internal arithmetic never
    /// mixes phases).
    pub fn push(&mut self, c: Q, mono: Monomial, word: Word) {
        self.try_push(c, mono, word).expect("phase mismatch in symbol arithmetic");
    }

    fn push_unchecked(&mut self, c: Q, mono: Monomial, word: Word) {
        if c.is_zero() {
            return;
        }
        let word = Word::new(word.atoms().to_vec());
        let key = (mono, word);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn phase(&self) -> Option<Phase> {
        self.terms.keys().next().map(|(m, _)| m.phase())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = SymbolTerm> + '_ {
        self.terms
            .iter()
            .map(|((m, w), c)| SymbolTerm::new(c.clone(), *m, w.clone()))
    }

    pub fn coeff_of(&self, mono: Monomial, word: &Word) -> Q {
        self.terms.get(&(mono, word.clone())).cloned().unwrap_or_else(Q::zero)
    }

    /// Rebuilds the canonical form; a no-op on values built through the API.
    pub fn normalize(&self) -> Self {
        let mut out = Self::zero();
        for t in self.terms() {
            out.push_unchecked(t.coeff, t.mono, t.word);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for t in self.terms() {
            out.push_unchecked(t.coeff * c, t.mono, t.word);
        }
        out
    }

    pub fn filter(&self, pred: impl Fn(&SymbolTerm) -> bool) -> Self {
        let mut out = Self::zero();
        for t in self.terms().filter(|t| pred(t)) {
            out.push_unchecked(t.coeff, t.mono, t.word);
        }
        out
    }

    pub fn map_terms(&self, f: impl Fn(SymbolTerm) -> SymbolExpr) -> Self {
        let mut out = Self::zero();
        for t in self.terms() {
            out = &out + &f(t);
        }
        out
    }

    /// Orders present, ascending.
    pub fn orders(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms().map(|t| t.order()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_order(&self) -> Option<i32> {
        self.terms().map(|t| t.order()).max()
    }

    /// Component of a single order.
    pub fn order_component(&self, order: i32) -> Self {
        self.filter(|t| t.order() == order)
    }

    /// Left/right multiplication by a bare word.
    pub fn mul_word_left(&self, w: &Word) -> Self {
        let mut out = Self::zero();
        for t in self.terms() {
            out.push_unchecked(t.coeff, t.mono, w.concat(&t.word));
        }
        out
    }

    pub fn mul_word_right(&self, w: &Word) -> Self {
        let mut out = Self::zero();
        for t in self.terms() {
            out.push_unchecked(t.coeff, t.mono, t.word.concat(w));
        }
        out
    }

    pub fn try_mul(&self, rhs: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
        let mut out = Self::zero();
        for a in self.terms() {
            for b in rhs.terms() {
                let m = a.mono.mul(&b.mono).ok_or(SymbolError::MixedPhase)?;
                out.push_unchecked(&a.coeff * &b.coeff, m, a.word.concat(&b.word));
            }
        }
        Ok(out)
    }
}

impl Add for &SymbolExpr {
    type Output = SymbolExpr;
    fn add(self, rhs: &SymbolExpr) -> SymbolExpr {
        let mut out = self.clone();
        for t in rhs.terms() {
            out.push(t.coeff, t.mono, t.word);
        }
        out
    }
}

impl Sub for &SymbolExpr {
    type Output = SymbolExpr;
    fn sub(self, rhs: &SymbolExpr) -> SymbolExpr {
        let mut out = self.clone();
        for t in rhs.terms() {
            out.push(-t.coeff, t.mono, t.word);
        }
        out
    }
}

impl Neg for &SymbolExpr {
    type Output = SymbolExpr;
    fn neg(self) -> SymbolExpr {
        self.scale(&-Q::one())
    }
}

impl Mul for &SymbolExpr {
    type Output = SymbolExpr;
    fn mul(self, rhs: &SymbolExpr) -> SymbolExpr {
        self.try_mul(rhs).expect("phase mismatch in symbol product")
    }
}

impl fmt::Display for SymbolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mono.to_string();
        write!(f, "{}", format_q(&self.coeff))?;
        if !m.is_empty() {
            write!(f, " {m}")?;
        }
        write!(f, " [{}]", self.word)
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
