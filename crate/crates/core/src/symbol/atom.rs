use std::cmp::Ordering;
use std::fmt;

use crate::modular::ModularFunctionExpr;

/// Generator of the noncommutative words appearing in symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `k^n`, `n != 0`.
    KPow(i32),
    /// `δ₁^a δ₂^b (k)`, `(a, b) != (0, 0)`.
    DerivK(u32, u32),
    /// `b₀^p` with `b₀ = (k²|ξ|² + 1)^{-1}`, `p >= 1`.
    Resolvent(u32),
    /// `F(Δ)(w)` for a modular function `F`; only produced by the reduction stages.
    ModApplied(ModularFunctionExpr, Word),
}

impl Atom {
    fn rank(&self) -> u8 {
        match self {
            Atom::KPow(_) => 0,
            Atom::DerivK(..) => 1,
            Atom::Resolvent(_) => 2,
            Atom::ModApplied(..) => 3,
        }
    }

    pub fn is_block(&self) -> bool {
        matches!(self, Atom::KPow(_) | Atom::Resolvent(_))
    }

    pub fn deriv(i: u8) -> Atom {
        match i {
            1 => Atom::DerivK(1, 0),
            2 => Atom::DerivK(0, 1),
            _ => panic!("direction must be 1 or 2"),
        }
    }

    /// Parses the serialized atom forms `k^n`, `d(i1,i2)k`, `b0^p`.
    pub fn parse(s: &str) -> Option<Atom> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("b0^") {
            let p: u32 = rest.parse().ok()?;
            return (p > 0).then_some(Atom::Resolvent(p));
        }
        if s == "b0" {
            return Some(Atom::Resolvent(1));
        }
        if s == "k" {
            return Some(Atom::KPow(1));
        }
        if let Some(rest) = s.strip_prefix("k^") {
            let n: i32 = rest.parse().ok()?;
            return (n != 0).then_some(Atom::KPow(n));
        }
        if let Some(rest) = s.strip_prefix("d(").and_then(|r| r.strip_suffix(")k")) {
            let (a, b) = rest.split_once(',')?;
            let a: u32 = a.trim().parse().ok()?;
            let b: u32 = b.trim().parse().ok()?;
            return (a + b > 0).then_some(Atom::DerivK(a, b));
        }
        None
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Atom::KPow(a), Atom::KPow(b)) => a.cmp(b),
            (Atom::DerivK(a1, a2), Atom::DerivK(b1, b2)) => {
                (a1 + a2, a1, a2).cmp(&(b1 + b2, b1, b2))
            }
            (Atom::Resolvent(a), Atom::Resolvent(b)) => a.cmp(b),
            (Atom::ModApplied(f, w), Atom::ModApplied(g, v)) => f.cmp(g).then_with(|| w.cmp(v)),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::KPow(n) => write!(f, "k^{n}"),
            Atom::DerivK(a, b) => write!(f, "d({a},{b})k"),
            Atom::Resolvent(p) => write!(f, "b0^{p}"),
            Atom::ModApplied(func, w) => write!(f, "[{func}]({w})"),
        }
    }
}

/// A maximal run of commuting `k` and `b₀` factors, or a single letter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unit {
    Block { k: i32, b0: u32 },
    Letter(Atom),
}

/// An ordered product of atoms in canonical form: every maximal run of
/// `k`/`b₀` factors is collapsed to `k^n b₀^p` (either part omitted when
/// trivial). Letters are never reordered.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Atom>);

impl Word {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Self::from_units(units_of(&atoms))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(a: Atom) -> Self {
        Self::new(vec![a])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word::new(v)
    }

    /// Total number of `b₀` factors.
    pub fn resolvent_power(&self) -> u32 {
        self.0
            .iter()
            .map(|a| if let Atom::Resolvent(p) = a { *p } else { 0 })
            .sum()
    }

    pub fn units(&self) -> Vec<Unit> {
        units_of(&self.0)
    }

    pub fn from_units(units: Vec<Unit>) -> Self {
        let mut out = Vec::with_capacity(units.len() * 2);
        let (mut k, mut b0) = (0i32, 0u32);
        let flush = |out: &mut Vec<Atom>, k: &mut i32, b0: &mut u32| {
            if *k != 0 {
                out.push(Atom::KPow(*k));
            }
            if *b0 != 0 {
                out.push(Atom::Resolvent(*b0));
            }
            *k = 0;
            *b0 = 0;
        };
        for u in units {
            match u {
                Unit::Block { k: dk, b0: db } => {
                    k += dk;
                    b0 += db;
                }
                Unit::Letter(a) => {
                    flush(&mut out, &mut k, &mut b0);
                    out.push(a);
                }
            }
        }
        flush(&mut out, &mut k, &mut b0);
        Word(out)
    }

    /// Letters only, in order (the "skeleton" separating blocks).
    pub fn letters(&self) -> Vec<&Atom> {
        self.0.iter().filter(|a| !a.is_block()).collect()
    }

    /// Blocks in between letters, including the (possibly trivial) ones at
    /// both ends: always `letters().len() + 1` entries.
    pub fn blocks(&self) -> Vec<(i32, u32)> {
        let mut out = vec![(0, 0)];
        for a in &self.0 {
            match a {
                Atom::KPow(n) => out.last_mut().unwrap().0 += n,
                Atom::Resolvent(p) => out.last_mut().unwrap().1 += p,
                _ => out.push((0, 0)),
            }
        }
        out
    }

    /// Canonical representative under cyclic rotation (trace equivalence):
    /// the end blocks are merged across the wrap-around and the
    /// lexicographically smallest unit rotation is chosen.
    pub fn cyclic_canonical(&self) -> Word {
        let mut units = self.units();
        if units.len() >= 2 {
            if let (Some(Unit::Block { .. }), Some(Unit::Block { .. })) =
                (units.first(), units.last())
            {
                if let Unit::Block { k, b0 } = units.pop().unwrap() {
                    if let Unit::Block { k: k0, b0: b00 } = &mut units[0] {
                        *k0 += k;
                        *b00 += b0;
                    }
                }
                if let Some(Unit::Block { k: 0, b0: 0 }) = units.first() {
                    units.remove(0);
                }
            }
        }
        let n = units.len();
        if n == 0 {
            return Word::empty();
        }
        (0..n)
            .map(|s| {
                let rot: Vec<Unit> = units[s..].iter().chain(&units[..s]).cloned().collect();
                rot
            })
            .min()
            .map(Word::from_units)
            .unwrap()
    }
}

fn units_of(atoms: &[Atom]) -> Vec<Unit> {
    let mut out = Vec::new();
    let mut cur: Option<(i32, u32)> = None;
    for a in atoms {
        match a {
            Atom::KPow(n) => {
                let c = cur.get_or_insert((0, 0));
                c.0 += n;
            }
            Atom::Resolvent(p) => {
                let c = cur.get_or_insert((0, 0));
                c.1 += p;
            }
            other => {
                if let Some((k, b0)) = cur.take() {
                    if k != 0 || b0 != 0 {
                        out.push(Unit::Block { k, b0 });
                    }
                }
                out.push(Unit::Letter(other.clone()));
            }
        }
    }
    if let Some((k, b0)) = cur {
        if k != 0 || b0 != 0 {
            out.push(Unit::Block { k, b0 });
        }
    }
    out
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[&str]) -> Word {
        Word::new(s.iter().map(|a| Atom::parse(a).unwrap()).collect())
    }

    #[test]
    fn blocks_merge_and_cancel() {
        assert_eq!(w(&["k^2", "b0^2", "k^1", "d(2,0)k"]), w(&["k^3", "b0^2", "d(2,0)k"]));
        assert_eq!(w(&["k^1", "k^-1"]), Word::empty());
        assert_eq!(w(&["b0^1", "k^2", "b0^1"]).atoms(), &[Atom::KPow(2), Atom::Resolvent(2)]);
        // letters are never reordered
        assert_ne!(w(&["d(1,0)k", "d(0,1)k"]), w(&["d(0,1)k", "d(1,0)k"]));
    }

    #[test]
    fn atom_order() {
        assert!(Atom::KPow(5) < Atom::DerivK(1, 0));
        assert!(Atom::DerivK(0, 1) < Atom::DerivK(1, 0));
        assert!(Atom::DerivK(1, 0) < Atom::DerivK(0, 2));
        assert!(Atom::DerivK(9, 9) < Atom::Resolvent(1));
    }

    #[test]
    fn cyclic_rotation_merges_ends() {
        let a = w(&["k^1", "d(1,0)k", "k^1"]);
        assert_eq!(a.cyclic_canonical(), w(&["k^2", "d(1,0)k"]));
        let b = w(&["d(1,0)k", "b0^1", "d(0,1)k", "k^3"]);
        let c = w(&["b0^1", "d(0,1)k", "k^3", "d(1,0)k"]);
        assert_eq!(b.cyclic_canonical(), c.cyclic_canonical());
        assert_eq!(w(&["k^2", "k^-2"]).cyclic_canonical(), Word::empty());
    }

    #[test]
    fn blocks_and_letters() {
        let a = w(&["b0^2", "k^1", "d(1,0)k", "b0^1", "d(1,0)k", "k^1"]);
        assert_eq!(a.blocks(), vec![(1, 2), (0, 1), (1, 0)]);
        assert_eq!(a.letters().len(), 2);
        assert_eq!(Word::empty().blocks(), vec![(0, 0)]);
    }
}
