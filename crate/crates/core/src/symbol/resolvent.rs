//! Exact zero test for symbols modulo the resolvent relation
//! `b₀ (k²|ξ|² + 1) = 1`.
//!
//! Terms are grouped by their sequence of letters. Inside a group the
//! `i`-th block `k^n b₀^p` is sent to `k_i^n / (k_i² s + 1)^p`, one
//! commuting variable per block, with `s = ξ₁² + ξ₂²` (or `r²`). The
//! group vanishes iff the numerator over the common denominator does.

use std::collections::BTreeMap;

use num_traits::One;

use super::atom::Atom;
use super::expr::{Monomial, SymbolExpr};
use crate::poly::Poly;
use crate::rational::Q;

/// Numerators of each letter-skeleton group after clearing denominators.
pub fn resolvent_numerators(e: &SymbolExpr) -> BTreeMap<Vec<Atom>, Poly> {
    let mut groups: BTreeMap<Vec<Atom>, Vec<_>> = BTreeMap::new();
    for t in e.terms() {
        let skel: Vec<Atom> = t.word.letters().into_iter().cloned().collect();
        groups.entry(skel).or_default().push(t);
    }
    let mut out = BTreeMap::new();
    for (skel, terms) in groups {
        let nblocks = skel.len() + 1;
        let nvars = 2 + nblocks;
        let mut pmax = vec![0u32; nblocks];
        for t in &terms {
            for (i, (_, p)) in t.word.blocks().into_iter().enumerate() {
                pmax[i] = pmax[i].max(p);
            }
        }
        let s = |m: &Monomial| -> Poly {
            match m {
                Monomial::Xi(..) => {
                    &Poly::monomial(nvars, 0, 2, Q::one()) + &Poly::monomial(nvars, 1, 2, Q::one())
                }
                Monomial::Radial(_) => Poly::monomial(nvars, 0, 2, Q::one()),
            }
        };
        let mut num = Poly::zero(nvars);
        for t in &terms {
            let mut exps = vec![0i32; nvars];
            match t.mono {
                Monomial::Xi(a, b) => {
                    exps[0] = a as i32;
                    exps[1] = b as i32;
                }
                Monomial::Radial(a) => exps[0] = a as i32,
            }
            let mut p = Poly::from_terms(nvars, [(exps, t.coeff.clone())]);
            let sp = s(&t.mono);
            for (i, (n, pw)) in t.word.blocks().into_iter().enumerate() {
                let kv = 2 + i;
                p = p.shift(kv, n);
                let denom = &(&sp * &Poly::monomial(nvars, kv, 2, Q::one())) + &Poly::constant(nvars, Q::one());
                p = &p * &denom.pow(pmax[i] - pw);
            }
            num = &num + &p;
        }
        out.insert(skel, num);
    }
    out
}

/// True iff `e` is zero modulo the resolvent relation.
pub fn vanishes_mod_resolvent(e: &SymbolExpr) -> bool {
    resolvent_numerators(e).values().all(Poly::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use crate::symbol::atom::Word;

    fn w(s: &[&str]) -> Word {
        Word::new(s.iter().map(|a| Atom::parse(a).unwrap()).collect())
    }

    #[test]
    fn resolvent_relation_is_zero() {
        // b₀ k² ξ₁² + b₀ k² ξ₂² + b₀ - 1
        let mut e = SymbolExpr::zero();
        e.push(qi(1), Monomial::Xi(2, 0), w(&["k^2", "b0"]));
        e.push(qi(1), Monomial::Xi(0, 2), w(&["k^2", "b0"]));
        e.push(qi(1), Monomial::ONE, w(&["b0"]));
        e.push(qi(-1), Monomial::ONE, Word::empty());
        assert!(vanishes_mod_resolvent(&e));
        e.push(qi(1), Monomial::ONE, Word::empty());
        assert!(!vanishes_mod_resolvent(&e));
    }

    #[test]
    fn relation_inside_a_word() {
        // d b₀ (r²k² + 1) b₀ d = d b₀ d
        let mut e = SymbolExpr::zero();
        e.push(qi(1), Monomial::Radial(2), w(&["d(1,0)k", "k^2", "b0^2", "d(1,0)k"]));
        e.push(qi(1), Monomial::Radial(0), w(&["d(1,0)k", "b0^2", "d(1,0)k"]));
        e.push(qi(-1), Monomial::Radial(0), w(&["d(1,0)k", "b0", "d(1,0)k"]));
        assert!(vanishes_mod_resolvent(&e));
    }

    #[test]
    fn blocks_are_not_mixed() {
        // b₀ d k² b₀ is not b₀ k² d b₀ even though the block contents agree
        let mut e = SymbolExpr::zero();
        e.push(qi(1), Monomial::ONE, w(&["b0", "d(1,0)k", "k^2", "b0"]));
        e.push(qi(-1), Monomial::ONE, w(&["k^2", "b0", "d(1,0)k", "b0"]));
        assert!(!vanishes_mod_resolvent(&e));
    }
}
