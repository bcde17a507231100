//! Individual rewriting steps from the even part of `b₂` to the final
//! modular function.

use std::collections::BTreeMap;

use num_traits::One;

use super::trace::TraceExpr;
use super::ReductionError;
use crate::modular::ModularFunctionExpr;
use crate::rational::{factorial, format_q, q, qi, Q};
use crate::symbol::serial::TermRecord;
use crate::symbol::{delta_derivative, Atom, Monomial, SymbolExpr, SymbolTerm, Unit, Word};

fn double_factorial_odd(n: u32) -> Q {
    // (2n - 1)!!
    let mut acc = Q::one();
    for i in 1..=n {
        acc *= qi(2 * i64::from(i) - 1);
    }
    acc
}

/// `(1/2π) ∫ cos^{2a} sin^{2b} = (2a-1)!! (2b-1)!! / (2(a+b))!!`.
pub fn angular_mean(a: u32, b: u32) -> Q {
    let even = {
        let mut acc = Q::one();
        for i in 1..=(a + b) {
            acc *= qi(2 * i64::from(i));
        }
        acc
    };
    double_factorial_odd(a) * double_factorial_odd(b) / even
}

/// Replaces `ξ₁^{2a} ξ₂^{2b}` by its angular mean times `r^{2(a+b)}`; the
/// overall `2π` is left out.
pub fn angular_average(e: &SymbolExpr) -> Result<SymbolExpr, ReductionError> {
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        match t.mono {
            Monomial::Xi(a, b) if a % 2 == 0 && b % 2 == 0 => {
                out.push(t.coeff * angular_mean(a / 2, b / 2), Monomial::Radial(a + b), t.word);
            }
            Monomial::Xi(..) => return Err(ReductionError::OddTerm(t.to_string())),
            Monomial::Radial(_) => return Err(ReductionError::WrongPhase("angular_average")),
        }
    }
    Ok(out)
}

/// Multiplies every term by `b₀` on the left instead of the right, which
/// agrees under the trace: raises the `b₀` power of the leading block.
pub fn cyclic_left_b0(e: &SymbolExpr) -> Result<SymbolExpr, ReductionError> {
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        let mut units = t.word.units();
        match units.first_mut() {
            Some(Unit::Block { b0, .. }) if *b0 > 0 => *b0 += 1,
            _ => return Err(ReductionError::Shape { stage: "cyclic_left_b0", term: t.to_string() }),
        }
        out.push(t.coeff, t.mono, Word::from_units(units));
    }
    Ok(out)
}

/// Radial terms sorted by where their `b₀` factors sit.
#[derive(Clone, Debug, Default)]
pub struct ResolventSplit {
    /// Every `b₀` in the leading block.
    pub all_left: SymbolExpr,
    /// `b₀²` in the block after the first letter.
    pub b0sq_middle: SymbolExpr,
    /// `b₀` in the block after the first letter.
    pub b0_middle: SymbolExpr,
}

pub fn split_by_resolvent(e: &SymbolExpr) -> Result<ResolventSplit, ReductionError> {
    let mut s = ResolventSplit::default();
    for t in e.terms() {
        let blocks = t.word.blocks();
        let later: Vec<u32> = blocks[1..].iter().map(|b| b.1).collect();
        let dest = match later.as_slice() {
            l if l.iter().all(|&p| p == 0) => &mut s.all_left,
            [2, rest @ ..] if rest.iter().all(|&p| p == 0) => &mut s.b0sq_middle,
            [1, rest @ ..] if rest.iter().all(|&p| p == 0) => &mut s.b0_middle,
            _ => return Err(ReductionError::Shape { stage: "split", term: t.to_string() }),
        };
        dest.push(t.coeff, t.mono, t.word);
    }
    Ok(s)
}

fn radial_power(t: &SymbolTerm, stage: &'static str) -> Result<u32, ReductionError> {
    match t.mono {
        Monomial::Radial(p) if p % 2 == 0 => Ok(p),
        _ => Err(ReductionError::Shape { stage, term: t.to_string() }),
    }
}

/// `½ ∫₀^∞ u^p k^n (k²u + 1)^{-q} du = ½ k^{n-2p-2} p! (q-p-2)! / (q-1)!`.
pub fn beta_integral(p: u32, q_: u32) -> Result<Q, ReductionError> {
    if q_ < p + 2 {
        return Err(ReductionError::Divergent { p, q: q_ });
    }
    Ok(q(1, 2) * factorial(p) * factorial(q_ - p - 2) / factorial(q_ - 1))
}

/// Integrates terms whose resolvent factors are all in the leading block,
/// in `r dr` over `(0, ∞)`, with the overall sign of the `λ = -1`
/// convention. A trailing `k` power is first rotated to the front.
pub fn radial_integrate_allleft(e: &SymbolExpr) -> Result<SymbolExpr, ReductionError> {
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        let r = radial_power(&t, "radial_integrate_allleft")?;
        let mut units = t.word.units();
        if units.len() > 1 {
            if let Some(Unit::Block { k, b0: 0 }) = units.last().cloned() {
                units.pop();
                units.insert(0, Unit::Block { k, b0: 0 });
            }
        }
        let word = Word::from_units(units);
        let blocks = word.blocks();
        if blocks[1..].iter().any(|b| b.1 > 0) {
            return Err(ReductionError::Shape { stage: "radial_integrate_allleft", term: t.to_string() });
        }
        let (n, qp) = blocks[0];
        let p = r / 2;
        let c = beta_integral(p, qp)?;
        let mut units = word.units();
        if let Some(Unit::Block { .. }) = units.first() {
            units.remove(0);
        }
        let mut atoms = vec![Atom::KPow(n - 2 * p as i32 - 2)];
        atoms.extend(Word::from_units(units).atoms().iter().cloned());
        out.push(-(t.coeff * c), Monomial::Radial(0), Word::new(atoms));
    }
    Ok(out)
}

/// Integration by parts in `r` removing the `b₀²` from the middle block:
/// `∫ r^{2n} (k^a b₀^j) x (k^c b₀²) y r dr
///   = ∫ (n r^{2n-2} k^a b₀^j - j r^{2n} k^{a+2} b₀^{j+1}) x k^{c-2} b₀ y r dr`,
/// using `∂_r b₀ = -2k² r b₀²`.
pub fn integrate_by_parts_r(e: &SymbolExpr) -> Result<SymbolExpr, ReductionError> {
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        let r = radial_power(&t, "integrate_by_parts_r")?;
        let n = r / 2;
        let units = t.word.units();
        let shape_err = || ReductionError::Shape { stage: "integrate_by_parts_r", term: t.to_string() };
        let (Some(Unit::Block { k: a, b0: j }), Some(x)) = (units.first().cloned(), units.get(1).cloned()) else {
            return Err(shape_err());
        };
        let Some(Unit::Block { k: c, b0: 2 }) = units.get(2).cloned() else {
            return Err(shape_err());
        };
        if n == 0 || j == 0 {
            return Err(shape_err());
        }
        let rest: Vec<Unit> = units[3..].to_vec();
        let build = |kl: i32, bl: u32| {
            let mut u = vec![Unit::Block { k: kl, b0: bl }, x.clone(), Unit::Block { k: c - 2, b0: 1 }];
            u.extend(rest.iter().cloned());
            Word::from_units(u)
        };
        out.push(&t.coeff * qi(i64::from(n)), Monomial::Radial(r - 2), build(a, j));
        out.push(-(&t.coeff * qi(i64::from(j))), Monomial::Radial(r), build(a + 2, j + 1));
    }
    Ok(out)
}

/// `coeff · τ(F(Δ)(δᵢk) · δᵢk · k⁻²)` for one direction `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedTerm {
    pub coeff: Q,
    pub func: ModularFunctionExpr,
    pub direction: u8,
}

impl ReducedTerm {
    pub fn value(&self) -> ModularFunctionExpr {
        self.func.scale(&self.coeff)
    }

    pub fn to_record(&self) -> TermRecord {
        let d = Atom::deriv(self.direction).to_string();
        TermRecord {
            coeff: format_q(&self.coeff),
            xi: None,
            r: Some(0),
            word: vec![format!("[{}]({d})", self.func), d, "k^-2".into()],
        }
    }
}

fn same_direction(a: &Atom, b: &Atom) -> Option<u8> {
    match (a, b) {
        (Atom::DerivK(1, 0), Atom::DerivK(1, 0)) => Some(1),
        (Atom::DerivK(0, 1), Atom::DerivK(0, 1)) => Some(2),
        _ => None,
    }
}

/// Replaces a trace term `c r^{2m} τ(k^A b₀^{m+1} δᵢk k^c b₀ δᵢk)`,
/// `A + c = 2m`, integrated in `r dr` with the `λ = -1` sign, by
/// `-(c/2) τ(Δ^{c/2} 𝓛ₘ(Δ)(δᵢk) δᵢk k⁻²)`.
pub fn apply_move_lemma(coeff: &Q, r_power: u32, word: &Word) -> Result<ReducedTerm, ReductionError> {
    let err = || ReductionError::Shape { stage: "apply_move_lemma", term: format!("{} r^{r_power} tr[{word}]", format_q(coeff)) };
    let units = word.cyclic_canonical().units();
    let m = r_power / 2;
    if !r_power.is_multiple_of(2) || !(1..=3).contains(&m) || units.len() != 4 {
        return Err(err());
    }
    for s in 0..4 {
        let rot: Vec<&Unit> = units[s..].iter().chain(&units[..s]).collect();
        if let [Unit::Block { k: a, b0: p1 }, Unit::Letter(d1), Unit::Block { k: c, b0: 1 }, Unit::Letter(d2)] = rot[..] {
            if *p1 != m + 1 || a + c != 2 * m as i32 {
                continue;
            }
            let Some(direction) = same_direction(d1, d2) else { continue };
            let func = ModularFunctionExpr::term(Q::one(), *c, Some(m as u8));
            return Ok(ReducedTerm { coeff: -(coeff * q(1, 2)), func, direction });
        }
    }
    Err(err())
}

/// Moves every `k` power to the left of the letters:
/// `x k^n = k^n Δ^{n/2}(x)` with `Δ(x) = k⁻² x k²`. Words containing
/// `b₀` are returned unchanged.
pub fn modular_normalize(word: &Word) -> Word {
    if word.resolvent_power() > 0 {
        return word.clone();
    }
    let atoms = word.atoms();
    let mut total = 0;
    let mut out_letters = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        match a {
            Atom::KPow(n) => total += n,
            letter => {
                let right: i32 = atoms[i + 1..]
                    .iter()
                    .map(|b| if let Atom::KPow(n) = b { *n } else { 0 })
                    .sum();
                if right == 0 {
                    out_letters.push(letter.clone());
                } else {
                    out_letters.push(Atom::ModApplied(
                        ModularFunctionExpr::term(Q::one(), right, None),
                        Word::single(letter.clone()),
                    ));
                }
            }
        }
    }
    let mut v = vec![Atom::KPow(total)];
    v.extend(out_letters);
    Word::new(v)
}

/// Rewrites `τ(k^a δᵢ²(k))` as `-τ(δᵢ(k^a) δᵢ(k))` (integration by parts
/// under the trace, `τ ∘ δᵢ = 0`). Other terms pass through.
pub fn trace_by_parts(e: &SymbolExpr) -> Result<SymbolExpr, ReductionError> {
    let mut out = SymbolExpr::zero();
    for t in e.terms() {
        let atoms = t.word.atoms();
        match atoms {
            [Atom::KPow(a), Atom::DerivK(2, 0)] | [Atom::KPow(a), Atom::DerivK(0, 2)] => {
                let i = if atoms[1] == Atom::DerivK(2, 0) { 1 } else { 2 };
                let ka = SymbolExpr::monomial(Q::one(), Monomial::Radial(0), Word::single(Atom::KPow(*a)));
                let dka = delta_derivative(&ka, i).map_err(ReductionError::Symbol)?;
                let right = Word::single(Atom::deriv(i));
                out = &out - &dka.mul_word_right(&right).scale(&t.coeff);
            }
            _ => out.push(t.coeff, t.mono, t.word),
        }
    }
    Ok(out)
}

/// Turns the integrated all-left terms into reduced terms.
pub fn allleft_to_reduced(e: &SymbolExpr) -> Result<Vec<ReducedTerm>, ReductionError> {
    let parts = trace_by_parts(e)?;
    let mut out = Vec::new();
    for t in parts.terms() {
        let nw = modular_normalize(&t.word);
        let shape = || ReductionError::Shape { stage: "allleft_to_reduced", term: t.to_string() };
        let [Atom::KPow(-2), first, second] = nw.atoms() else { return Err(shape()) };
        let (func, d1) = match first {
            Atom::ModApplied(f, w) if w.len() == 1 => (f.clone(), w.atoms()[0].clone()),
            Atom::DerivK(..) => (ModularFunctionExpr::one(), first.clone()),
            _ => return Err(shape()),
        };
        let Some(direction) = same_direction(&d1, second) else { return Err(shape()) };
        out.push(ReducedTerm { coeff: t.coeff, func, direction });
    }
    Ok(out)
}

/// Sums reduced terms; both directions must carry the same function, and
/// the sum must equal the closed formula for `f`.
pub fn assemble_f(terms: &[ReducedTerm]) -> Result<ModularFunctionExpr, ReductionError> {
    let f = sum_reduced(terms)?;
    let expected = crate::modular::f_expr();
    if f != expected {
        return Err(ReductionError::Mismatch { difference: (&f - &expected).to_string() });
    }
    Ok(f)
}

/// Sums reduced terms; both directions must carry the same function.
pub fn sum_reduced(terms: &[ReducedTerm]) -> Result<ModularFunctionExpr, ReductionError> {
    let mut by_dir: BTreeMap<u8, ModularFunctionExpr> = BTreeMap::new();
    for t in terms {
        let slot = by_dir.entry(t.direction).or_default();
        *slot = &*slot + &t.value();
    }
    let f1 = by_dir.remove(&1).unwrap_or_default();
    let f2 = by_dir.remove(&2).unwrap_or_default();
    if f1 != f2 {
        return Err(ReductionError::Asymmetric { first: f1.to_string(), second: f2.to_string() });
    }
    Ok(f1)
}

/// Cyclic multiset of an r-phase expression.
pub fn under_trace(e: &SymbolExpr) -> TraceExpr {
    TraceExpr::from_symbol(e)
}

/// Splits radial terms `r^{2m} ...` with one `b₀` in the middle by `m`.
pub fn split_by_radial_power(e: &SymbolExpr) -> BTreeMap<u32, SymbolExpr> {
    let mut out: BTreeMap<u32, SymbolExpr> = BTreeMap::new();
    for t in e.terms() {
        let p = match t.mono {
            Monomial::Radial(p) => p / 2,
            Monomial::Xi(a, b) => (a + b) / 2,
        };
        out.entry(p).or_default().push(t.coeff, t.mono, t.word);
    }
    out
}
