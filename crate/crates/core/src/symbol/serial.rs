//! JSON term records: `{"coeff": "-1/3", "xi": [a, b] | "r": n, "word": [..]}`.

use serde::{Deserialize, Serialize};

use super::atom::{Atom, Word};
use super::expr::{Monomial, SymbolExpr, SymbolTerm};
use super::SymbolError;
use crate::rational::{format_q, parse_q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub xi: Option<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u32>,
    pub word: Vec<String>,
}

impl TermRecord {
    pub fn from_term(t: &SymbolTerm) -> Self {
        let (xi, r) = match t.mono {
            Monomial::Xi(a, b) => (Some([a, b]), None),
            Monomial::Radial(n) => (None, Some(n)),
        };
        TermRecord {
            coeff: format_q(&t.coeff),
            xi,
            r,
            word: t.word.atoms().iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn to_term(&self) -> Result<SymbolTerm, SymbolError> {
        let coeff = parse_q(&self.coeff).ok_or_else(|| SymbolError::Parse(format!("coefficient {:?}", self.coeff)))?;
        let mono = match (self.xi, self.r) {
            (Some([a, b]), None) => Monomial::Xi(a, b),
            (None, Some(n)) => Monomial::Radial(n),
            _ => return Err(SymbolError::Parse("exactly one of xi, r expected".into())),
        };
        let atoms = self
            .word
            .iter()
            .map(|s| Atom::parse(s).ok_or_else(|| SymbolError::Parse(format!("atom {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SymbolTerm::new(coeff, mono, Word::new(atoms)))
    }
}

pub fn to_records(e: &SymbolExpr) -> Vec<TermRecord> {
    e.terms().map(|t| TermRecord::from_term(&t)).collect()
}

pub fn to_jsonl(e: &SymbolExpr) -> String {
    let mut s = String::new();
    for r in to_records(e) {
        s.push_str(&serde_json::to_string(&r).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Parses one record per non-empty line.
pub fn parse_records(text: &str) -> Result<Vec<TermRecord>, SymbolError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| SymbolError::Parse(e.to_string())))
        .collect()
}

pub fn from_jsonl(text: &str) -> Result<SymbolExpr, SymbolError> {
    let terms = parse_records(text)?
        .iter()
        .map(TermRecord::to_term)
        .collect::<Result<Vec<_>, _>>()?;
    SymbolExpr::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::calculus::compute_b1;

    #[test]
    fn roundtrip() {
        let b1 = compute_b1();
        let text = to_jsonl(&b1);
        assert_eq!(from_jsonl(&text).unwrap(), b1);
    }

    #[test]
    fn rejects_bad_records() {
        assert!(from_jsonl(r#"{"coeff": "1", "word": ["k^1"]}"#).is_err());
        assert!(from_jsonl(r#"{"coeff": "x", "r": 0, "word": ["k^1"]}"#).is_err());
        assert!(from_jsonl(r#"{"coeff": "1", "r": 0, "word": ["q"]}"#).is_err());
    }
}
