//! Numeric cross-checks of the symbolic reduction: each rewrite is
//! evaluated with random matrices and two commuting inner derivations.

use num_complex::Complex64;

use super::derivations::{InnerDerivations, WordEvaluator};
use super::matrix::MatrixAlgebraInstance;
use super::quadrature::{integrate_half_line_vec, QuadratureOptions};
use super::NumericError;
use crate::rational::to_f64;
use crate::reduction::{allleft_to_reduced, apply_move_lemma, under_trace, Derivation, ReducedTerm};
use crate::symbol::{Atom, Monomial, SymbolExpr, Word};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn radial_options() -> QuadratureOptions {
    QuadratureOptions { abs_tol: 1e-15, rel_tol: 1e-12, max_intervals: 4000 }
}

/// `∫₀^∞ g(r) r dr` for a complex-valued `g`.
fn radial_integral(
    mut g: impl FnMut(f64) -> Result<Complex64, NumericError>,
) -> Result<Complex64, NumericError> {
    let mut failure = None;
    let r = integrate_half_line_vec(
        |r, out| match g(r) {
            Ok(v) => {
                out[0] = v.re * r;
                out[1] = v.im * r;
            }
            Err(e) => {
                failure.get_or_insert(e);
                out[0] = 0.0;
                out[1] = 0.0;
            }
        },
        2,
        &radial_options(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !r.converged {
        return Err(NumericError::Quadrature(r.error));
    }
    Ok(Complex64::new(r.value[0], r.value[1]))
}

/// Mean over `n` equally spaced angles of `τ(e(r cos θ, r sin θ))`. Words
/// only depend on `r`, so they are evaluated once per radius.
fn angular_mean_trace(ev: &mut WordEvaluator<'_>, e: &SymbolExpr, r: f64, n: usize) -> Result<Complex64, NumericError> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut last: Option<(Word, Complex64)> = None;
    for t in e.terms() {
        let (a, b) = match t.mono {
            Monomial::Xi(a, b) => (a as i32, b as i32),
            Monomial::Radial(_) => return Err(NumericError::InvalidParameter("expected xi phase".into())),
        };
        let tr = match &last {
            Some((w, v)) if *w == t.word => *v,
            _ => {
                let v = ev.inst.tau(&ev.word(&t.word, r * r)?);
                last = Some((t.word.clone(), v));
                v
            }
        };
        let mut s = 0.0;
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            s += th.cos().powi(a) * th.sin().powi(b);
        }
        acc += tr * (to_f64(&t.coeff) * r.powi(a + b) * s / n as f64);
    }
    Ok(acc)
}

fn reduced_value(ev: &mut WordEvaluator<'_>, terms: &[ReducedTerm]) -> Result<Complex64, NumericError> {
    let inst = ev.inst;
    let kinv2 = inst.k_pow(-2.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for t in terms {
        let d = ev.word(&Word::single(Atom::deriv(t.direction)), 0.0)?;
        let fd = inst.apply_modular(&t.func, &d)?;
        acc += inst.tau(&(fd * d * &kinv2)) * to_f64(&t.coeff);
    }
    Ok(acc)
}

/// Relative errors of the individual reduction steps on one random model.
#[derive(Clone, Debug, Default)]
pub struct StepErrors {
    pub left_b0: f64,
    pub angular: f64,
    pub radial_allleft: f64,
    pub trace_by_parts: f64,
    pub radial_ibp: f64,
    pub move_lemma: f64,
    pub end_to_end: f64,
    /// `|∫τ(b₂)|` relative to the size of its parts.
    pub total_vanishes: f64,
}

impl StepErrors {
    pub fn max(&self) -> f64 {
        [
            self.left_b0,
            self.angular,
            self.radial_allleft,
            self.trace_by_parts,
            self.radial_ibp,
            self.move_lemma,
            self.end_to_end,
            self.total_vanishes,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn check_reduction_steps(
    deriv: &Derivation,
    inst: &MatrixAlgebraInstance,
    ders: &InnerDerivations,
) -> Result<StepErrors, NumericError> {
    let mut ev = WordEvaluator::new(inst, ders);
    let mut out = StepErrors::default();

    // b₀ on the right versus the raised leading power, at a fixed ξ
    let (x1, x2) = (0.7, -1.3);
    let right = deriv.even_prefactor.mul_word_right(&Word::single(Atom::Resolvent(1)));
    out.left_b0 = rel(ev.trace_at(&right, x1, x2)?, ev.trace_at(&deriv.left_b0, x1, x2)?);

    // angular mean by equally spaced angles versus the exact weights
    let r0 = 0.9;
    out.angular = rel(
        angular_mean_trace(&mut ev, &deriv.left_b0, r0, 32)?,
        ev.trace_at(&deriv.angular, r0, 0.0)?,
    );

    // all-left block: -∫ τ(·) r dr against the integrated words
    let lhs = -radial_integral(|r| ev.trace_at(&deriv.split.all_left, r, 0.0))?;
    out.radial_allleft = rel(lhs, ev.trace_at(&deriv.res1, 0.0, 0.0)?);

    let res1_reduced = allleft_to_reduced(&deriv.res1).map_err(|e| NumericError::InvalidParameter(e.to_string()))?;
    out.trace_by_parts = rel(ev.trace_at(&deriv.res1, 0.0, 0.0)?, reduced_value(&mut ev, &res1_reduced)?);

    let a = radial_integral(|r| ev.trace_at(&deriv.split.b0sq_middle, r, 0.0))?;
    let b = radial_integral(|r| ev.trace_at(&deriv.ibp, r, 0.0))?;
    out.radial_ibp = rel(a, b);

    let mut moved = Vec::new();
    for t in under_trace(&deriv.t_total).terms() {
        moved.push(
            apply_move_lemma(&t.coeff, t.r_power, &t.word).map_err(|e| NumericError::InvalidParameter(e.to_string()))?,
        );
    }
    let lhs = -radial_integral(|r| ev.trace_at(&deriv.t_total, r, 0.0))?;
    out.move_lemma = rel(lhs, reduced_value(&mut ev, &moved)?);

    // whole chain: -(1/2π) ∫ τ(b₂) d²ξ = Σᵢ τ(f(Δ)(δᵢk) δᵢk k⁻²) = 0
    let b2 = deriv.b2_prefactor.mul_word_right(&Word::single(Atom::Resolvent(1)));
    let lhs = -radial_integral(|r| angular_mean_trace(&mut ev, &b2, r, 32))?;
    let f_terms: Vec<ReducedTerm> = [1u8, 2]
        .into_iter()
        .map(|direction| ReducedTerm { coeff: crate::rational::qi(1), func: deriv.f.clone(), direction })
        .collect();
    // both sides vanish (k-independence), so compare on the scale of the parts
    let scale = reduced_value(&mut ev, &res1_reduced)?.norm() + reduced_value(&mut ev, &moved)?.norm();
    let rhs = reduced_value(&mut ev, &f_terms)?;
    out.end_to_end = (lhs - rhs).norm() / scale.max(1e-300);
    out.total_vanishes = lhs.norm() / scale.max(1e-300);
    Ok(out)
}
