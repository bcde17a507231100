//! Reference term lists for the intermediate stages, in the JSONL term
//! format.

use crate::symbol::serial::from_jsonl;
use crate::symbol::SymbolExpr;

pub const B2_EVEN_PREFACTOR: &str = include_str!("../../fixtures/b2_even_prefactor.jsonl");
pub const ANGULAR_LEFT_B0: &str = include_str!("../../fixtures/angular_left_b0.jsonl");
pub const ALL_LEFT: &str = include_str!("../../fixtures/all_left.jsonl");
pub const ALL_LEFT_REGROUPED: &str = include_str!("../../fixtures/all_left_regrouped.jsonl");
pub const RES1: &str = include_str!("../../fixtures/res1.jsonl");
pub const B0SQ_MIDDLE: &str = include_str!("../../fixtures/b0sq_middle.jsonl");
pub const B0_MIDDLE: &str = include_str!("../../fixtures/b0_middle.jsonl");
pub const T_TOTAL: &str = include_str!("../../fixtures/t_total.jsonl");
pub const T1: &str = include_str!("../../fixtures/t1.jsonl");
pub const T2: &str = include_str!("../../fixtures/t2.jsonl");
pub const T3: &str = include_str!("../../fixtures/t3.jsonl");

pub const ALL: [(&str, &str); 11] = [
    ("b2_even_prefactor", B2_EVEN_PREFACTOR),
    ("angular_left_b0", ANGULAR_LEFT_B0),
    ("all_left", ALL_LEFT),
    ("all_left_regrouped", ALL_LEFT_REGROUPED),
    ("res1", RES1),
    ("b0sq_middle", B0SQ_MIDDLE),
    ("b0_middle", B0_MIDDLE),
    ("t_total", T_TOTAL),
    ("t1", T1),
    ("t2", T2),
    ("t3", T3),
];

/// Parses a bundled fixture; panics only if the bundled data is corrupt.
pub fn load(text: &str) -> SymbolExpr {
    from_jsonl(text).expect("bundled fixture parses")
}

pub fn by_name(name: &str) -> Option<SymbolExpr> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| load(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        let sizes: Vec<usize> = ALL.iter().map(|(_, t)| t.lines().filter(|l| !l.is_empty()).count()).collect();
        assert_eq!(sizes, vec![114, 46, 14, 10, 4, 12, 20, 16, 2, 6, 8]);
        for (_, t) in ALL {
            assert!(!load(t).is_zero());
        }
    }
}
