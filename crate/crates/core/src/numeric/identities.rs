//! Operator identities checked in the matrix model.

use num_complex::Complex64;

use super::matrix::{relative_error, CMat, MatrixAlgebraInstance};
use super::quadrature::{integrate_half_line_vec, integrate_vec, QuadratureOptions};
use super::NumericError;
use crate::modular::{eval_l, ModularFunctionExpr, Sampler};

/// `∫₀^∞ k^{2m+2} u^m (k²u+1)^{-(m+1)} ρ (k²u+1)^{-1} du` against
/// `𝓛ₘ(Δ)(ρ)`; returns the relative error.
pub fn check_move_lemma(inst: &MatrixAlgebraInstance, rho: &CMat, m: u8) -> Result<f64, NumericError> {
    let d = inst.dim();
    let lam = inst.eigenvalues().to_vec();
    let opts = QuadratureOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 4000 };
    let mi = i32::from(m);
    // entrywise scalar weights in the eigenbasis of k
    let r = integrate_half_line_vec(
        |u, out| {
            for i in 0..d {
                let li = lam[i] * lam[i];
                let left = li.powi(mi + 1) * u.powi(mi) / (li * u + 1.0).powi(mi + 1);
                for j in 0..d {
                    out[i * d + j] = left / (lam[j] * lam[j] * u + 1.0);
                }
            }
        },
        d * d,
        &opts,
    );
    if !r.converged {
        return Err(NumericError::Quadrature(r.error));
    }
    let mut y = inst.to_eigenbasis(rho);
    for i in 0..d {
        for j in 0..d {
            y[(i, j)] *= r.value[i * d + j];
        }
    }
    let lhs = inst.from_eigenbasis(&y);
    let rhs = inst.apply_modular(&ModularFunctionExpr::term(crate::rational::qi(1), 0, Some(m)), rho)?;
    Ok(relative_error(&lhs, &rhs))
}

/// `|τ(a F(log Δ)(b)) - τ(F(-log Δ)(a) b)|` for `F` given on `u = e^x`.
pub fn check_byparts(
    inst: &MatrixAlgebraInstance,
    a: &CMat,
    b: &CMat,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let lhs = inst.tau(&(a * inst.apply_fn(b, &f)));
    let rhs = inst.tau(&(inst.apply_fn(a, |u| f(1.0 / u)) * b));
    (lhs - rhs).norm()
}

pub fn check_byparts_modular(
    inst: &MatrixAlgebraInstance,
    a: &CMat,
    b: &CMat,
    f: &ModularFunctionExpr,
) -> Result<f64, NumericError> {
    f.eval(1.0)?;
    Ok(check_byparts(inst, a, b, |u| f.eval(u).expect("u > 0")))
}

/// `|τ(K(log Δ)(x) x)|`.
pub fn check_trace_vanish(inst: &MatrixAlgebraInstance, k_fn: &Sampler, x: &CMat) -> f64 {
    let y = inst.apply_log_fn(x, |t| k_fn.eval(t));
    inst.tau(&(y * x)).norm()
}

fn phi(t: f64) -> f64 {
    // (e^t - 1)/t with its limit at 0
    if t.abs() < 1e-5 {
        1.0 + t / 2.0 + t * t / 6.0
    } else {
        t.exp_m1() / t
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FrechetErrors {
    pub left: f64,
    pub right: f64,
    pub half_power: f64,
    pub full_power: f64,
}

impl FrechetErrors {
    pub fn max(&self) -> f64 {
        self.left.max(self.right).max(self.half_power).max(self.full_power)
    }
}

/// With `k = e^ψ` and `δk = ∫₀¹ e^{sψ} c e^{(1-s)ψ} ds`, compares
/// `k⁻¹δk` with `2(Δ^{1/2}-1)/log Δ (c)` and `δk k⁻¹` with
/// `-2(Δ^{-1/2}-1)/log Δ (c)`, and checks `kck = k²Δ^{1/2}(c)`,
/// `ck² = k²Δ(c)`.
pub fn check_frechet_identities(psi: &CMat, c: &CMat) -> Result<FrechetErrors, NumericError> {
    let inst = MatrixAlgebraInstance::from_log(psi)?;
    let d = psi.nrows();
    let opts = QuadratureOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 500 };
    let r = integrate_vec(
        |s, out| {
            let m = (psi * Complex64::new(s, 0.0)).exp() * c * (psi * Complex64::new(1.0 - s, 0.0)).exp();
            for (idx, z) in m.iter().enumerate() {
                out[2 * idx] = z.re;
                out[2 * idx + 1] = z.im;
            }
        },
        2 * d * d,
        0.0,
        1.0,
        &opts,
    );
    if !r.converged {
        return Err(NumericError::Quadrature(r.error));
    }
    let dk = CMat::from_iterator(d, d, (0..d * d).map(|i| Complex64::new(r.value[2 * i], r.value[2 * i + 1])));
    let kinv = inst.k_pow(-1.0);
    // 2(u^{1/2}-1)/log u = φ(log u / 2) with φ(t) = (e^t - 1)/t
    let left_rhs = inst.apply_log_fn(c, |t| phi(t / 2.0));
    let right_rhs = inst.apply_log_fn(c, |t| phi(-t / 2.0));
    let k = inst.k();
    let k2 = inst.k_pow(2.0);
    Ok(FrechetErrors {
        left: relative_error(&(&kinv * &dk), &left_rhs),
        right: relative_error(&(&dk * &kinv), &right_rhs),
        half_power: relative_error(&(k * c * k), &(&k2 * inst.apply_fn(c, |u| u.sqrt()))),
        full_power: relative_error(&(c * &k2), &(&k2 * inst.apply_fn(c, |u| u))),
    })
}

/// `𝓛ₘ(1) = 1/(m+1)` and the move identity for `k = 1`.
pub fn check_move_lemma_identity_k(rho: &CMat, m: u8) -> Result<f64, NumericError> {
    let d = rho.nrows();
    let inst = MatrixAlgebraInstance::new(CMat::identity(d, d))?;
    let e = check_move_lemma(&inst, rho, m)?;
    let expected = 1.0 / (f64::from(m) + 1.0);
    Ok(e.max((eval_l(m, 1.0)? - expected).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::k_from_h;
    use crate::numeric::matrix::{random_hermitian, random_matrix, rng};

    #[test]
    fn move_lemma_random() {
        let mut r = rng(1);
        for m in 1..=3 {
            let inst = MatrixAlgebraInstance::random(6, 0.1, &mut r);
            let rho = random_matrix(6, &mut r);
            let e = check_move_lemma(&inst, &rho, m).unwrap();
            assert!(e < 1e-8, "m={m} err={e}");
        }
    }

    #[test]
    fn move_lemma_trivial_k() {
        let mut r = rng(2);
        let rho = random_matrix(3, &mut r);
        assert!(check_move_lemma_identity_k(&rho, 2).unwrap() < 1e-10);
    }

    #[test]
    fn byparts_examples() {
        let mut r = rng(3);
        let inst = MatrixAlgebraInstance::random(8, 0.1, &mut r);
        let a = random_matrix(8, &mut r);
        let b = random_matrix(8, &mut r);
        assert!(check_byparts(&inst, &a, &b, |_| 1.0) < 1e-13);
        assert!(check_byparts(&inst, &a, &b, |u| u) < 1e-10);
        let l2 = ModularFunctionExpr::term(crate::rational::qi(1), 0, Some(2));
        assert!(check_byparts_modular(&inst, &a, &b, &l2).unwrap() < 1e-10);
    }

    #[test]
    fn trace_vanishes() {
        let mut r = rng(4);
        let inst = MatrixAlgebraInstance::random(8, 0.1, &mut r);
        let k = Sampler::new(k_from_h().unwrap());
        let x = random_matrix(8, &mut r);
        assert!(check_trace_vanish(&inst, &k, &x) < 1e-10);
        assert!(check_trace_vanish(&inst, &k, &CMat::identity(8, 8)) < 1e-15);
    }

    #[test]
    fn frechet_random_and_commuting() {
        let mut r = rng(5);
        let psi = random_hermitian(6, &mut r);
        let c = random_matrix(6, &mut r);
        assert!(check_frechet_identities(&psi, &c).unwrap().max() < 1e-8);
        let c2 = &psi * &psi;
        assert!(check_frechet_identities(&psi, &c2).unwrap().max() < 1e-8);
    }
}
