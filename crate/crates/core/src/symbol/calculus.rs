//! Derivations on symbols and the composition (product) formula.

use std::collections::HashMap;

use num_traits::One;

use super::atom::{Atom, Word};
use super::expr::{Monomial, Phase, SymbolExpr};
use super::SymbolError;
use crate::rational::{factorial, q, qi, Q};

fn check_dir(i: u8) -> Result<(), SymbolError> {
    if i == 1 || i == 2 {
        Ok(())
    } else {
        Err(SymbolError::Direction(i))
    }
}

fn xi_mono(i: u8) -> Monomial {
    if i == 1 {
        Monomial::Xi(1, 0)
    } else {
        Monomial::Xi(0, 1)
    }
}

/// `|ξ|²` in the requested phase, as a list of monomials with unit coefficient.
fn xi_norm_sq(phase: Phase) -> Vec<Monomial> {
    match phase {
        Phase::Xi => vec![Monomial::Xi(2, 0), Monomial::Xi(0, 2)],
        Phase::Radial => vec![Monomial::Radial(2)],
    }
}

/// Applies a derivation atom-by-atom with the Leibniz rule. `atom_rule`
/// returns the derivative of a single atom as a list of
/// `(coefficient, extra monomial, replacement word)`.
fn leibniz_word(
    word: &Word,
    atom_rule: &dyn Fn(&Atom) -> Result<Vec<(Q, Monomial, Word)>, SymbolError>,
) -> Result<Vec<(Q, Monomial, Word)>, SymbolError> {
    let atoms = word.atoms();
    let mut out = Vec::new();
    for (j, a) in atoms.iter().enumerate() {
        for (c, m, repl) in atom_rule(a)? {
            let mut v: Vec<Atom> = atoms[..j].to_vec();
            v.extend(repl.atoms().iter().cloned());
            v.extend(atoms[j + 1..].iter().cloned());
            out.push((c, m, Word::new(v)));
        }
    }
    Ok(out)
}

/// `∂/∂ξᵢ`. Only defined before angular averaging.
pub fn xi_derivative(e: &SymbolExpr, i: u8) -> Result<SymbolExpr, SymbolError> {
    check_dir(i)?;
    if e.phase() == Some(Phase::Radial) {
        return Err(SymbolError::RadialPhase("xi_derivative"));
    }
    let rule = |a: &Atom| -> Result<Vec<(Q, Monomial, Word)>, SymbolError> {
        Ok(match a {
            // ∂ᵢ b₀ = -2 ξᵢ k² b₀², hence ∂ᵢ b₀^p = -2p ξᵢ k² b₀^{p+1}
            Atom::Resolvent(p) => vec![(
                qi(-2 * i64::from(*p)),
                xi_mono(i),
                Word::new(vec![Atom::KPow(2), Atom::Resolvent(p + 1)]),
            )],
            Atom::KPow(_) | Atom::DerivK(..) => vec![],
            Atom::ModApplied(..) => return Err(SymbolError::UnsupportedAtom(a.to_string())),
        })
    };
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        let (a, b) = match t.mono {
            Monomial::Xi(a, b) => (a, b),
            Monomial::Radial(_) => unreachable!(),
        };
        let exp = if i == 1 { a } else { b };
        if exp > 0 {
            let m = if i == 1 { Monomial::Xi(a - 1, b) } else { Monomial::Xi(a, b - 1) };
            out.push(&t.coeff * qi(i64::from(exp)), m, t.word.clone());
        }
        for (c, m, w) in leibniz_word(&t.word, &rule)? {
            out.push(&t.coeff * c, t.mono.mul(&m).unwrap(), w);
        }
    }
    Ok(out)
}

/// The derivation `δᵢ` acting on the coefficient algebra.
pub fn delta_derivative(e: &SymbolExpr, i: u8) -> Result<SymbolExpr, SymbolError> {
    check_dir(i)?;
    let phase = e.phase().unwrap_or(Phase::Xi);
    let d = Atom::deriv(i);
    let unit = Monomial::unit(phase);
    let rule = |a: &Atom| -> Result<Vec<(Q, Monomial, Word)>, SymbolError> {
        let mut v = Vec::new();
        match *a {
            Atom::KPow(n) if n > 0 => {
                for j in 0..n {
                    v.push((
                        Q::one(),
                        unit,
                        Word::new(vec![Atom::KPow(j), d.clone(), Atom::KPow(n - 1 - j)]),
                    ));
                }
            }
            Atom::KPow(n) => {
                // δ(k⁻¹) = -k⁻¹ δ(k) k⁻¹
                let m = -n;
                for j in 0..m {
                    v.push((
                        -Q::one(),
                        unit,
                        Word::new(vec![Atom::KPow(-j - 1), d.clone(), Atom::KPow(-(m - j))]),
                    ));
                }
            }
            Atom::DerivK(a1, a2) => {
                let next = if i == 1 { Atom::DerivK(a1 + 1, a2) } else { Atom::DerivK(a1, a2 + 1) };
                v.push((Q::one(), unit, Word::single(next)));
            }
            Atom::Resolvent(p) => {
                // δ(b₀) = -|ξ|² b₀ (δ(k) k + k δ(k)) b₀
                for j in 0..p {
                    for m in xi_norm_sq(phase) {
                        for inner in [[d.clone(), Atom::KPow(1)], [Atom::KPow(1), d.clone()]] {
                            let mut w = vec![Atom::Resolvent(j + 1)];
                            w.extend(inner);
                            w.push(Atom::Resolvent(p - j));
                            v.push((-Q::one(), m, Word::new(w)));
                        }
                    }
                }
            }
            Atom::ModApplied(..) => return Err(SymbolError::UnsupportedAtom(a.to_string())),
        }
        Ok(v)
    };
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        for (c, m, w) in leibniz_word(&t.word, &rule)? {
            out.push(&t.coeff * c, t.mono.mul(&m).ok_or(SymbolError::MixedPhase)?, w);
        }
    }
    Ok(out)
}

/// Lazily computed mixed derivatives `D₁^{l1} D₂^{l2}(e)`.
struct DerivativeTable<'a> {
    base: &'a SymbolExpr,
    op: fn(&SymbolExpr, u8) -> Result<SymbolExpr, SymbolError>,
    cache: HashMap<(u32, u32), SymbolExpr>,
}

impl<'a> DerivativeTable<'a> {
    fn new(base: &'a SymbolExpr, op: fn(&SymbolExpr, u8) -> Result<SymbolExpr, SymbolError>) -> Self {
        Self { base, op, cache: HashMap::new() }
    }

    fn get(&mut self, l1: u32, l2: u32) -> Result<SymbolExpr, SymbolError> {
        if let Some(e) = self.cache.get(&(l1, l2)) {
            return Ok(e.clone());
        }
        let e = if l1 == 0 && l2 == 0 {
            self.base.clone()
        } else if l2 > 0 {
            let prev = self.get(l1, l2 - 1)?;
            if prev.is_zero() { prev } else { (self.op)(&prev, 2)? }
        } else {
            let prev = self.get(l1 - 1, 0)?;
            if prev.is_zero() { prev } else { (self.op)(&prev, 1)? }
        };
        self.cache.insert((l1, l2), e.clone());
        Ok(e)
    }
}

/// Contributions of the composition formula grouped by the total number of
/// derivatives `l = l1 + l2`, for `l = 0..=max_l`:
/// `Σ_{l1+l2=l} 1/(l1! l2!) ∂₁^{l1}∂₂^{l2}(a) · δ₁^{l1}δ₂^{l2}(b)`.
pub fn product_by_derivative_count(
    a: &SymbolExpr,
    b: &SymbolExpr,
    max_l: u32,
) -> Result<Vec<SymbolExpr>, SymbolError> {
    if a.phase() == Some(Phase::Radial) || b.phase() == Some(Phase::Radial) {
        return Err(SymbolError::RadialPhase("symbol_product"));
    }
    let mut da = DerivativeTable::new(a, xi_derivative);
    let mut db = DerivativeTable::new(b, delta_derivative);
    let mut out = Vec::with_capacity(max_l as usize + 1);
    for l in 0..=max_l {
        let mut acc = SymbolExpr::zero();
        for l1 in 0..=l {
            let l2 = l - l1;
            let left = da.get(l1, l2)?;
            if left.is_zero() {
                continue;
            }
            let right = db.get(l1, l2)?;
            if right.is_zero() {
                continue;
            }
            let w = Q::one() / (factorial(l1) * factorial(l2));
            acc = &acc + &left.try_mul(&right)?.scale(&w);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Symbol of the composition `PQ`, truncated below `min_order`.
pub fn symbol_product(a: &SymbolExpr, b: &SymbolExpr, min_order: i32) -> Result<SymbolExpr, SymbolError> {
    let (Some(oa), Some(ob)) = (a.max_order(), b.max_order()) else {
        return Ok(SymbolExpr::zero());
    };
    let top = oa + ob;
    if top < min_order {
        return Ok(SymbolExpr::zero());
    }
    let pieces = product_by_derivative_count(a, b, (top - min_order) as u32)?;
    let mut acc = SymbolExpr::zero();
    for p in &pieces {
        acc = &acc + p;
    }
    Ok(acc.filter(|t| t.order() >= min_order))
}

/// Formal adjoint `ρ*`: words reversed, `δ^α(k)* = (-1)^{|α|} δ^α(k)`,
/// `k` and `b₀` self-adjoint, rational coefficients and `ξ` real.
pub fn star(e: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        let mut sign = Q::one();
        let mut atoms = Vec::with_capacity(t.word.len());
        for a in t.word.atoms().iter().rev() {
            match a {
                Atom::DerivK(a1, a2) => {
                    if (a1 + a2) % 2 == 1 {
                        sign = -sign;
                    }
                    atoms.push(a.clone());
                }
                Atom::ModApplied(..) => return Err(SymbolError::UnsupportedAtom(a.to_string())),
                _ => atoms.push(a.clone()),
            }
        }
        out.push(t.coeff * sign, t.mono, Word::new(atoms));
    }
    Ok(out)
}

/// Symbol of the adjoint operator, `Σ 1/(l1! l2!) ∂^l δ^l (ρ*)`, truncated
/// below `min_order`.
pub fn adjoint_symbol(rho: &SymbolExpr, min_order: i32) -> Result<SymbolExpr, SymbolError> {
    let s = star(rho)?;
    let Some(top) = s.max_order() else {
        return Ok(SymbolExpr::zero());
    };
    let mut acc = SymbolExpr::zero();
    let mut deltas = DerivativeTable::new(&s, delta_derivative);
    for l in 0..=((top - min_order).max(0) as u32) {
        for l1 in 0..=l {
            let l2 = l - l1;
            let mut e = deltas.get(l1, l2)?;
            for _ in 0..l1 {
                e = xi_derivative(&e, 1)?;
            }
            for _ in 0..l2 {
                e = xi_derivative(&e, 2)?;
            }
            acc = &acc + &e.scale(&(Q::one() / (factorial(l1) * factorial(l2))));
        }
    }
    Ok(acc.filter(|t| t.order() >= min_order))
}

/// Drops every term with an odd power of `ξ₁` or `ξ₂` (their angular
/// integrals vanish).
pub fn discard_xi_odd(e: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
    if e.phase() == Some(Phase::Radial) {
        return Err(SymbolError::RadialPhase("discard_xi_odd"));
    }
    Ok(e.filter(|t| matches!(t.mono, Monomial::Xi(a, b) if a % 2 == 0 && b % 2 == 0)))
}

fn k_word(n: i32) -> Word {
    Word::single(Atom::KPow(n))
}

fn xi_sq() -> SymbolExpr {
    let mut e = SymbolExpr::zero();
    e.push(Q::one(), Monomial::Xi(2, 0), Word::empty());
    e.push(Q::one(), Monomial::Xi(0, 2), Word::empty());
    e
}

/// The three homogeneous parts `a₂, a₁, a₀` of the symbol of `kΔk`.
#[derive(Clone, Debug)]
pub struct LaplacianSymbol {
    pub a2: SymbolExpr,
    pub a1: SymbolExpr,
    pub a0: SymbolExpr,
}

impl LaplacianSymbol {
    pub fn total(&self) -> SymbolExpr {
        &(&self.a2 + &self.a1) + &self.a0
    }
}

/// Symbol of `kΔk`, obtained by composing `|ξ|²` with `k` and multiplying on
/// the left by `k`.
pub fn laplacian_symbol() -> LaplacianSymbol {
    let k = SymbolExpr::atom(Atom::KPow(1));
    let composed = symbol_product(&xi_sq(), &k, 0).expect("polynomial symbols compose");
    let full = composed.mul_word_left(&k_word(1));
    LaplacianSymbol {
        a2: full.order_component(2),
        a1: full.order_component(1),
        a0: full.order_component(0),
    }
}

pub fn b0() -> SymbolExpr {
    SymbolExpr::atom(Atom::Resolvent(1))
}

/// `b₁ = -(b₀ a₁ b₀ + ∂ᵢ(b₀) δᵢ(a₂) b₀)`.
pub fn compute_b1() -> SymbolExpr {
    let lap = laplacian_symbol();
    let b0 = b0();
    let bw = Word::single(Atom::Resolvent(1));
    let mut acc = (&b0 * &lap.a1).mul_word_right(&bw);
    for i in [1, 2] {
        let t = &xi_derivative(&b0, i).unwrap() * &delta_derivative(&lap.a2, i).unwrap();
        acc = &acc + &t.mul_word_right(&bw);
    }
    -&acc
}

/// `b₂` before its final right factor `b₀`, i.e. `b₂ = compute_b2_prefactor() · b₀`:
/// `-(b₀a₀ + b₁a₁ + ∂ᵢ(b₀)δᵢ(a₁) + ∂ᵢ(b₁)δᵢ(a₂) + ½ ∂ᵢ∂ⱼ(b₀)δᵢδⱼ(a₂))`.
pub fn compute_b2_prefactor() -> SymbolExpr {
    let lap = laplacian_symbol();
    let b0 = b0();
    let b1 = compute_b1();
    let mut acc = &(&b0 * &lap.a0) + &(&b1 * &lap.a1);
    for i in [1, 2] {
        acc = &acc + &(&xi_derivative(&b0, i).unwrap() * &delta_derivative(&lap.a1, i).unwrap());
        acc = &acc + &(&xi_derivative(&b1, i).unwrap() * &delta_derivative(&lap.a2, i).unwrap());
        for j in [1, 2] {
            let dd_b0 = xi_derivative(&xi_derivative(&b0, i).unwrap(), j).unwrap();
            let dd_a2 = delta_derivative(&delta_derivative(&lap.a2, i).unwrap(), j).unwrap();
            acc = &acc + &(&dd_b0 * &dd_a2).scale(&q(1, 2));
        }
    }
    -&acc
}

pub fn compute_b2() -> SymbolExpr {
    compute_b2_prefactor().mul_word_right(&Word::single(Atom::Resolvent(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::expr::SymbolTerm;

    fn w(s: &[&str]) -> Word {
        Word::new(s.iter().map(|a| Atom::parse(a).unwrap()).collect())
    }

    fn term(c: Q, m: Monomial, s: &[&str]) -> SymbolExpr {
        SymbolExpr::monomial(c, m, w(s))
    }

    #[test]
    fn laplacian_parts() {
        let lap = laplacian_symbol();
        let tot = lap.total();
        assert_eq!(tot.len(), 6);
        assert_eq!(tot.coeff_of(Monomial::Xi(2, 0), &w(&["k^2"])), qi(1));
        assert_eq!(tot.coeff_of(Monomial::Xi(1, 0), &w(&["k^1", "d(1,0)k"])), qi(2));
        assert_eq!(tot.coeff_of(Monomial::Xi(0, 1), &w(&["k^1", "d(0,1)k"])), qi(2));
        assert_eq!(tot.coeff_of(Monomial::ONE, &w(&["k^1", "d(2,0)k"])), qi(1));
        assert_eq!(tot.coeff_of(Monomial::ONE, &w(&["k^1", "d(0,2)k"])), qi(1));
    }

    #[test]
    fn xi_derivative_examples() {
        let d = xi_derivative(&b0(), 1).unwrap();
        assert_eq!(d, term(qi(-2), Monomial::Xi(1, 0), &["b0^1", "k^2", "b0^1"]));
        let c = term(qi(1), Monomial::Xi(0, 2), &["k^1"]);
        assert!(xi_derivative(&c, 1).unwrap().is_zero());
        let e = term(qi(1), Monomial::Xi(1, 0), &["b0^1"]);
        let expect = &term(qi(1), Monomial::ONE, &["b0^1"])
            + &term(qi(-2), Monomial::Xi(2, 0), &["b0^1", "k^2", "b0^1"]);
        assert_eq!(xi_derivative(&e, 1).unwrap(), expect);
    }

    #[test]
    fn xi_derivative_rejects_radial() {
        let e = term(qi(1), Monomial::Radial(2), &["b0^1"]);
        assert!(matches!(xi_derivative(&e, 1), Err(SymbolError::RadialPhase(_))));
        assert!(matches!(xi_derivative(&b0(), 3), Err(SymbolError::Direction(3))));
    }

    #[test]
    fn delta_derivative_examples() {
        let k = term(qi(1), Monomial::ONE, &["k^1"]);
        assert_eq!(delta_derivative(&k, 1).unwrap(), term(qi(1), Monomial::ONE, &["d(1,0)k"]));
        let k2 = term(qi(1), Monomial::ONE, &["k^2"]);
        let expect = &term(qi(1), Monomial::ONE, &["d(1,0)k", "k^1"])
            + &term(qi(1), Monomial::ONE, &["k^1", "d(1,0)k"]);
        assert_eq!(delta_derivative(&k2, 1).unwrap(), expect);
        let kinv = term(qi(1), Monomial::ONE, &["k^-1"]);
        assert_eq!(
            delta_derivative(&kinv, 1).unwrap(),
            term(qi(-1), Monomial::ONE, &["k^-1", "d(1,0)k", "k^-1"])
        );
        let d = term(qi(1), Monomial::ONE, &["d(1,0)k"]);
        assert_eq!(delta_derivative(&d, 2).unwrap(), term(qi(1), Monomial::ONE, &["d(1,1)k"]));
    }

    #[test]
    fn delta_of_resolvent_in_both_phases() {
        let xi = delta_derivative(&b0(), 2).unwrap();
        assert_eq!(xi.len(), 4);
        assert_eq!(xi.coeff_of(Monomial::Xi(2, 0), &w(&["b0^1", "d(0,1)k", "k^1", "b0^1"])), qi(-1));
        let r = term(qi(1), Monomial::Radial(0), &["b0^1"]);
        let dr = delta_derivative(&r, 1).unwrap();
        assert_eq!(dr.len(), 2);
        assert_eq!(dr.coeff_of(Monomial::Radial(2), &w(&["b0^1", "k^1", "d(1,0)k", "b0^1"])), qi(-1));
    }

    #[test]
    fn product_examples() {
        let e = term(qi(3), Monomial::Xi(1, 1), &["k^1", "b0^2"]);
        assert_eq!(symbol_product(&e, &SymbolExpr::one(), -20).unwrap(), e);
        assert_eq!(symbol_product(&SymbolExpr::one(), &e, -20).unwrap(), e);
        let xi1 = term(qi(1), Monomial::Xi(1, 0), &[]);
        let k = term(qi(1), Monomial::ONE, &["k^1"]);
        let expect = &term(qi(1), Monomial::Xi(1, 0), &["k^1"]) + &term(qi(1), Monomial::ONE, &["d(1,0)k"]);
        assert_eq!(symbol_product(&xi1, &k, -10).unwrap(), expect);
    }

    #[test]
    fn laplacian_from_product_matches_explicit_form() {
        let mut explicit = SymbolExpr::zero();
        for (i, m) in [(1u8, Monomial::Xi(1, 0)), (2u8, Monomial::Xi(0, 1))] {
            let sq = if i == 1 { Monomial::Xi(2, 0) } else { Monomial::Xi(0, 2) };
            explicit.push(qi(1), sq, w(&["k^2"]));
            explicit.push(qi(2), m, Word::new(vec![Atom::KPow(1), Atom::deriv(i)]));
            let dd = if i == 1 { Atom::DerivK(2, 0) } else { Atom::DerivK(0, 2) };
            explicit.push(qi(1), Monomial::ONE, Word::new(vec![Atom::KPow(1), dd]));
        }
        assert_eq!(laplacian_symbol().total(), explicit);
    }

    #[test]
    fn laplacian_symbol_is_formally_self_adjoint() {
        let s = laplacian_symbol().total();
        assert_eq!(adjoint_symbol(&s, 0).unwrap(), s);
    }

    #[test]
    fn b1_shape() {
        let b1 = compute_b1();
        assert!(b1.terms().all(|t| t.order() == -3));
        assert_eq!(b1.coeff_of(Monomial::Xi(1, 0), &w(&["b0^1", "k^1", "d(1,0)k", "b0^1"])), qi(-2));
    }

    #[test]
    fn b2_is_homogeneous() {
        let b2 = compute_b2();
        assert!(!b2.is_zero());
        assert!(b2.terms().all(|t| t.order() == -4));
        let pre = compute_b2_prefactor();
        assert!(pre.terms().all(|t| t.order() == -2));
    }

    #[test]
    fn flat_weyl_factor_kills_b1_b2() {
        // substituting δ(k) ≡ 0 removes every term containing a derivative atom
        let flat = |e: &SymbolExpr| e.filter(|t: &SymbolTerm| t.word.letters().is_empty());
        assert!(flat(&compute_b1()).is_zero());
        assert!(flat(&compute_b2()).is_zero());
    }

    #[test]
    fn discard_odd() {
        let ww = w(&["k^1"]);
        let e = &(&SymbolExpr::monomial(qi(1), Monomial::Xi(1, 1), ww.clone())
            + &SymbolExpr::monomial(qi(1), Monomial::Xi(2, 0), ww.clone()))
            + &SymbolExpr::monomial(qi(1), Monomial::Xi(3, 2), ww.clone());
        assert_eq!(discard_xi_odd(&e).unwrap(), SymbolExpr::monomial(qi(1), Monomial::Xi(2, 0), ww));
    }
}
