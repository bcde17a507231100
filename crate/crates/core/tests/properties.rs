use proptest::prelude::*;

use ncgb_core::modular::{k_from_h, Sampler};
use ncgb_core::numeric::identities::{check_byparts, check_trace_vanish};
use ncgb_core::numeric::matrix::{random_matrix, rng, MatrixAlgebraInstance};
use ncgb_core::rational::{q, Q};
use ncgb_core::symbol::resolvent::vanishes_mod_resolvent;
use ncgb_core::symbol::serial::{from_jsonl, to_jsonl};
use ncgb_core::symbol::{delta_derivative, xi_derivative, Atom, Monomial, SymbolExpr, Word};

fn atom() -> impl Strategy<Value = Atom> + Clone {
    prop_oneof![
        (-3i32..=3).prop_filter("nonzero", |n| *n != 0).prop_map(Atom::KPow),
        (0u32..=2, 0u32..=2).prop_filter("nonzero", |(a, b)| a + b > 0).prop_map(|(a, b)| Atom::DerivK(a, b)),
        (1u32..=2).prop_map(Atom::Resolvent),
    ]
}

fn k_atom() -> impl Strategy<Value = Atom> + Clone {
    atom().prop_filter("no resolvent", |a| !matches!(a, Atom::Resolvent(_)))
}

fn term(atoms: impl Strategy<Value = Atom>) -> impl Strategy<Value = (Q, Monomial, Word)> {
    ((-5i64..=5), (1i64..=4), (0u32..=3), (0u32..=3), prop::collection::vec(atoms, 0..5))
        .prop_map(|(n, d, a, b, w)| (q(n, d), Monomial::Xi(a, b), Word::new(w)))
}

fn expr() -> impl Strategy<Value = SymbolExpr> {
    expr_of(atom())
}

fn expr_of(atoms: impl Strategy<Value = Atom> + Clone) -> impl Strategy<Value = SymbolExpr> {
    prop::collection::vec(term(atoms), 0..5).prop_map(|ts| {
        let mut e = SymbolExpr::zero();
        for (c, m, w) in ts {
            e.push(c, m, w);
        }
        e
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(e in expr()) {
        let n = e.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert_eq!(n, e);
    }

    // `k^n b₀ = b₀ k^n`, so Leibniz expansions of one product can differ
    // word by word; equality is decided modulo the resolvent relation
    #[test]
    fn delta_is_a_derivation(a in expr(), b in expr(), i in 1u8..=2) {
        let lhs = delta_derivative(&(&a * &b), i).unwrap();
        let rhs = &(&delta_derivative(&a, i).unwrap() * &b) + &(&a * &delta_derivative(&b, i).unwrap());
        prop_assert!(vanishes_mod_resolvent(&(&lhs - &rhs)));
    }

    #[test]
    fn delta_is_a_derivation_termwise_without_resolvent(a in expr_of(k_atom()), b in expr_of(k_atom()), i in 1u8..=2) {
        let lhs = delta_derivative(&(&a * &b), i).unwrap();
        let rhs = &(&delta_derivative(&a, i).unwrap() * &b) + &(&a * &delta_derivative(&b, i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn xi_derivative_is_a_derivation(a in expr(), b in expr(), i in 1u8..=2) {
        let lhs = xi_derivative(&(&a * &b), i).unwrap();
        let rhs = &(&xi_derivative(&a, i).unwrap() * &b) + &(&a * &xi_derivative(&b, i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivations_commute(e in expr()) {
        let d12 = delta_derivative(&delta_derivative(&e, 2).unwrap(), 1).unwrap();
        let d21 = delta_derivative(&delta_derivative(&e, 1).unwrap(), 2).unwrap();
        prop_assert!(vanishes_mod_resolvent(&(&d12 - &d21)));
        let x12 = xi_derivative(&xi_derivative(&e, 2).unwrap(), 1).unwrap();
        let x21 = xi_derivative(&xi_derivative(&e, 1).unwrap(), 2).unwrap();
        prop_assert_eq!(x12, x21);
    }

    #[test]
    fn cyclic_form_is_rotation_invariant(w in prop::collection::vec(atom(), 1..7), s in 0usize..7) {
        let s = s % w.len();
        let rotated: Vec<Atom> = w[s..].iter().chain(&w[..s]).cloned().collect();
        prop_assert_eq!(Word::new(w).cyclic_canonical(), Word::new(rotated).cyclic_canonical());
    }

    #[test]
    fn jsonl_round_trip(e in expr()) {
        prop_assert_eq!(from_jsonl(&to_jsonl(&e)).unwrap(), e);
    }

    #[test]
    fn k_is_odd_numerically(x in -8.0f64..8.0) {
        let k = Sampler::new(k_from_h().unwrap());
        prop_assert!((k.eval(x) + k.eval(-x)).abs() < 1e-12);
    }

    #[test]
    fn byparts_and_trace_vanishing(seed in any::<u64>(), d in 2usize..=6, s in -2i32..=2) {
        let mut r = rng(seed);
        let inst = MatrixAlgebraInstance::random(d, 0.2, &mut r);
        let a = random_matrix(d, &mut r);
        let b = random_matrix(d, &mut r);
        let p = f64::from(s) / 2.0;
        prop_assert!(check_byparts(&inst, &a, &b, |u| u.powf(p) / (1.0 + u)) < 1e-10);
        let k = Sampler::new(k_from_h().unwrap());
        prop_assert!(check_trace_vanish(&inst, &k, &a) < 1e-10);
    }
}
