//! Comparison of a derivation against the reference stages and the
//! closed formulas.

use serde::Serialize;

use super::fixtures::{self, load};
use super::pipeline::Derivation;
use super::stages::{apply_move_lemma, sum_reduced, under_trace, ReducedTerm};
use crate::modular::{f_expr, h_from_f, is_odd, k_from_h, taylor_h, ModularFunctionExpr};
use crate::rational::{format_q, q, qi, Q};
use crate::symbol::{verify_parametrix, SymbolExpr};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCheck {
    pub name: String,
    pub anchor: String,
    pub pass: bool,
    /// Symbolic difference `got - expected` when the check fails.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub diff: String,
}

fn check(name: &str, anchor: &str, pass: bool, diff: impl FnOnce() -> String) -> StageCheck {
    StageCheck { name: name.into(), anchor: anchor.into(), pass, diff: if pass { String::new() } else { diff() } }
}

fn same_terms(name: &str, anchor: &str, got: &SymbolExpr, want: &SymbolExpr) -> StageCheck {
    check(name, anchor, got == want, || (got - want).to_string())
}

/// Function carried by the move-lemma images of the `r^{2m}` part of `T`.
pub fn move_lemma_function(d: &Derivation, m: u32) -> Result<ModularFunctionExpr, String> {
    let part = d.t_parts.get(&m).cloned().unwrap_or_default();
    let mut reduced: Vec<ReducedTerm> = Vec::new();
    for t in under_trace(&part).terms() {
        reduced.push(apply_move_lemma(&t.coeff, t.r_power, &t.word).map_err(|e| e.to_string())?);
    }
    sum_reduced(&reduced).map_err(|e| e.to_string())
}

/// Expected per-direction functions of the `𝓛₁`, `𝓛₂`, `𝓛₃` contributions.
pub fn expected_move_lemma_function(m: u32) -> ModularFunctionExpr {
    let mut f = ModularFunctionExpr::zero();
    match m {
        1 => f.add_term(qi(1), 0, Some(1)),
        2 => {
            f.add_term(qi(-2), 1, Some(2));
            f.add_term(qi(-2), 0, Some(2));
        }
        3 => {
            f.add_term(qi(1), 0, Some(3));
            f.add_term(qi(2), 1, Some(3));
            f.add_term(qi(1), 2, Some(3));
        }
        _ => {}
    }
    f
}

/// Taylor coefficients of `h` for `x¹ .. x⁵`.
pub fn expected_h_taylor() -> [Q; 5] {
    [q(-1, 20), q(1, 40), q(-1, 210), q(1, 3360), q(1, 201600)]
}

pub fn validate(d: &Derivation) -> Vec<StageCheck> {
    let mut out = vec![
        same_terms("b2_even_prefactor", "b2-even-part", &d.even_prefactor, &load(fixtures::B2_EVEN_PREFACTOR)),
        same_terms("angular_average", "polar-coordinates", &d.angular, &load(fixtures::ANGULAR_LEFT_B0)),
        same_terms("split_all_left", "all-b0-left", &d.split.all_left, &load(fixtures::ALL_LEFT)),
        same_terms("radial_integrate_allleft", "beta-integral", &d.res1, &load(fixtures::RES1)),
        same_terms("split_b0sq_middle", "b0sq-middle", &d.split.b0sq_middle, &load(fixtures::B0SQ_MIDDLE)),
        same_terms("split_b0_middle", "b0-middle", &d.split.b0_middle, &load(fixtures::B0_MIDDLE)),
        same_terms("combine_b0_middle", "t-sum", &d.t_total, &load(fixtures::T_TOTAL)),
    ];
    for (m, fixture) in [(1u32, fixtures::T1), (2, fixtures::T2), (3, fixtures::T3)] {
        let got = under_trace(&d.t_parts.get(&m).cloned().unwrap_or_default());
        let want = under_trace(&load(fixture));
        out.push(check(&format!("t{m}"), "t-sum", got == want, || got.difference(&want).to_string()));
        let want_f = expected_move_lemma_function(m);
        let (pass, diff) = match move_lemma_function(d, m) {
            Ok(f) => (f == want_f, (&f - &want_f).to_string()),
            Err(e) => (false, e),
        };
        out.push(check(&format!("move_lemma_m{m}"), "move-lemma", pass, || diff));
    }
    let f = sum_reduced(&d.reduced);
    let want = f_expr();
    out.push(match &f {
        Ok(f) => check("assemble_f", "modular-function-f", *f == want, || (f - &want).to_string()),
        Err(e) => check("assemble_f", "modular-function-f", false, || e.to_string()),
    });
    out
}

/// Closed-form identities for `h` and `K`, independent of any derivation.
pub fn validate_closed_forms() -> Vec<StageCheck> {
    let h = h_from_f();
    let k = k_from_h();
    let taylor = taylor_h(5).map(|c| c[1..].to_vec());
    let want = expected_h_taylor();
    let parametrix = verify_parametrix(-2);
    vec![
        check("h_from_f", "h-closed-form", h.is_ok(), || h.as_ref().err().map(|e| e.to_string()).unwrap_or_default()),
        check("k_from_h", "k-closed-form", k.is_ok(), || k.as_ref().err().map(|e| e.to_string()).unwrap_or_default()),
        check("k_odd", "k-odd", k.as_ref().map(is_odd).unwrap_or(false), || "K(x) + K(-x) != 0".into()),
        check("h_taylor", "h-taylor", taylor.as_ref().map(|c| c[..] == want[..]).unwrap_or(false), || match &taylor {
            Ok(c) => c.iter().map(format_q).collect::<Vec<_>>().join(", "),
            Err(e) => e.to_string(),
        }),
        match &parametrix {
            Ok(p) => check("parametrix", "parametrix", p.vanishes(), || format!("nonvanishing orders {:?}", p.nonvanishing_orders())),
            Err(e) => check("parametrix", "parametrix", false, || e.to_string()),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::derive_with;

    #[test]
    fn unperturbed_derivation_validates() {
        let d = derive_with(None).unwrap();
        for c in validate(&d).into_iter().chain(validate_closed_forms()) {
            assert!(c.pass, "{}: {}", c.name, c.diff);
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let d = derive_with(Some(&qi(1))).unwrap();
        let checks = validate(&d);
        let first = &checks[0];
        assert!(!first.pass);
        assert!(!first.diff.is_empty());
    }
}
