//! Sums of terms under the trace, where words are taken up to cyclic
//! rotation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rational::{format_q, Q};
use crate::symbol::{Monomial, SymbolExpr, Word};

/// One summand `coeff · r^{r_power} · τ(word)` with `word` in cyclic
/// canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTerm {
    pub coeff: Q,
    pub r_power: u32,
    pub word: Word,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceExpr {
    terms: BTreeMap<(u32, Word), Q>,
}

impl TraceExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Q, r_power: u32, word: &Word) {
        if c.is_zero() {
            return;
        }
        let key = (r_power, word.cyclic_canonical());
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Collects an r-phase symbol under the trace. ξ-phase monomials are
    /// keyed by total degree.
    pub fn from_symbol(e: &SymbolExpr) -> Self {
        let mut out = Self::zero();
        for t in e.terms() {
            let p = match t.mono {
                Monomial::Radial(p) => p,
                Monomial::Xi(a, b) => a + b,
            };
            out.push(t.coeff, p, &t.word);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = TraceTerm> + '_ {
        self.terms.iter().map(|((p, w), c)| TraceTerm { coeff: c.clone(), r_power: *p, word: w.clone() })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self - other`.
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in other.terms() {
            out.push(-t.coeff, t.r_power, &t.word);
        }
        out
    }
}

impl fmt::Display for TraceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} r^{} tr[{}]", format_q(&t.coeff), t.r_power, t.word)?;
        }
        Ok(())
    }
}
