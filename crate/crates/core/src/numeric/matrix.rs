//! Finite-dimensional stand-in for the torus algebra: matrices with the
//! normalized trace, a positive `k` and the modular operator
//! `Δ(x) = k⁻² x k²`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::NumericError;
use crate::modular::ModularFunctionExpr;

pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_matrix(d: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(d, d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> CMat {
    let a = random_matrix(d, rng);
    (&a + a.adjoint()).scale(0.5)
}

pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMat {
    random_matrix(d, rng).qr().q()
}

pub fn frobenius(x: &CMat) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a - b‖ / max(‖b‖, tiny)`.
pub fn relative_error(a: &CMat, b: &CMat) -> f64 {
    frobenius(&(a - b)) / frobenius(b).max(1e-300)
}

#[derive(Clone, Debug)]
pub struct MatrixAlgebraInstance {
    k: CMat,
    /// Eigenvalues of `k`, ascending.
    lambda: Vec<f64>,
    /// Unitary with `k = basis · diag(lambda) · basis*`.
    basis: CMat,
}

impl MatrixAlgebraInstance {
    /// Wraps a Hermitian positive `k`.
    pub fn new(k: CMat) -> Result<Self, NumericError> {
        let d = k.nrows();
        if d == 0 || k.ncols() != d {
            return Err(NumericError::InvalidParameter("k must be square and nonempty".into()));
        }
        if frobenius(&(&k - k.adjoint())) > 1e-12 * frobenius(&k).max(1.0) {
            return Err(NumericError::NotHermitian);
        }
        let eig = k.clone().symmetric_eigen();
        let lambda: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        if lambda.iter().any(|&l| l <= 0.0) {
            return Err(NumericError::NotPositive);
        }
        Ok(Self { k, lambda, basis: eig.eigenvectors })
    }

    /// `k = e^{ψ}` for Hermitian `ψ`.
    pub fn from_log(psi: &CMat) -> Result<Self, NumericError> {
        if frobenius(&(psi - psi.adjoint())) > 1e-12 * frobenius(psi).max(1.0) {
            return Err(NumericError::NotHermitian);
        }
        let eig = psi.clone().symmetric_eigen();
        let lambda: Vec<f64> = eig.eigenvalues.iter().map(|l| l.exp()).collect();
        let basis = eig.eigenvectors;
        let k = conjugate_diag(&basis, &lambda);
        Ok(Self { k, lambda, basis })
    }

    /// Random `k` with spectrum log-uniform in `[eps, 1/eps]`.
    pub fn random(d: usize, eps: f64, rng: &mut impl Rng) -> Self {
        let basis = random_unitary(d, rng);
        let span = (1.0 / eps).ln();
        let lambda: Vec<f64> = (0..d).map(|_| (rng.gen_range(-span..span)).exp()).collect();
        let k = conjugate_diag(&basis, &lambda);
        Self { k, lambda, basis }
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn k(&self) -> &CMat {
        &self.k
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    /// `k^p` for real `p`.
    pub fn k_pow(&self, p: f64) -> CMat {
        let v: Vec<f64> = self.lambda.iter().map(|l| l.powf(p)).collect();
        conjugate_diag(&self.basis, &v)
    }

    /// Normalized trace.
    pub fn tau(&self, x: &CMat) -> Complex64 {
        x.trace() / self.dim() as f64
    }

    pub fn to_eigenbasis(&self, x: &CMat) -> CMat {
        self.basis.adjoint() * x * &self.basis
    }

    pub fn from_eigenbasis(&self, x: &CMat) -> CMat {
        &self.basis * x * self.basis.adjoint()
    }

    /// Eigenvalue of `Δ` on the matrix unit `e_ij` of the eigenbasis.
    pub fn modular_eigenvalue(&self, i: usize, j: usize) -> f64 {
        (self.lambda[j] / self.lambda[i]).powi(2)
    }

    /// `Δ(x) = k⁻² x k²`, computed by plain products.
    pub fn modular(&self, x: &CMat) -> CMat {
        self.k_pow(-2.0) * x * self.k_pow(2.0)
    }

    /// `g(Δ)(x)` through the eigenbasis, `g` a function of `u > 0`.
    pub fn apply_fn(&self, x: &CMat, g: impl Fn(f64) -> f64) -> CMat {
        let mut y = self.to_eigenbasis(x);
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                y[(i, j)] *= g(self.modular_eigenvalue(i, j));
            }
        }
        self.from_eigenbasis(&y)
    }

    /// `G(log Δ)(x)`, `G` a function of `log u`.
    pub fn apply_log_fn(&self, x: &CMat, g: impl Fn(f64) -> f64) -> CMat {
        self.apply_fn(x, |u| g(u.ln()))
    }

    pub fn apply_modular(&self, f: &ModularFunctionExpr, x: &CMat) -> Result<CMat, NumericError> {
        let mut y = self.to_eigenbasis(x);
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                y[(i, j)] *= f.eval(self.modular_eigenvalue(i, j))?;
            }
        }
        Ok(self.from_eigenbasis(&y))
    }
}

/// `u · diag(v) · u*`.
pub fn conjugate_diag(u: &CMat, v: &[f64]) -> CMat {
    let mut scaled = u.clone();
    for (j, &s) in v.iter().enumerate() {
        scaled.column_mut(j).scale_mut(s);
    }
    scaled * u.adjoint()
}
