//! Truncated lattice model of the torus: the mode space `e_{n,m}`,
//! `|n|, |m| <= N`, with left multiplication by `U^a V^b`, the flat
//! Laplacian and a Weyl factor `k = exp(h/2)`.

use std::f64::consts::PI;

use faer::{c64, Mat, Side};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::NumericError;

/// Coefficient `c` of `U^a V^b` in `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylCoefficient {
    pub a: i32,
    pub b: i32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl WeylCoefficient {
    pub fn value(&self) -> c64 {
        c64::new(self.re, self.im)
    }
}

/// `amp (W + W*)` for `W = U^a V^b`, using `W* = e^{2πiθab} U^{-a} V^{-b}`.
pub fn cosine_term(theta: f64, a: i32, b: i32, amp: f64) -> [WeylCoefficient; 2] {
    let ph = 2.0 * PI * theta * f64::from(a) * f64::from(b);
    [
        WeylCoefficient { a, b, re: amp, im: 0.0 },
        WeylCoefficient { a: -a, b: -b, re: amp * ph.cos(), im: amp * ph.sin() },
    ]
}

#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub theta: f64,
    pub n: i32,
    pub h: Vec<WeylCoefficient>,
}

pub fn build_lattice(theta: f64, n: i32, h: Vec<WeylCoefficient>) -> Result<LatticeModel, NumericError> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(NumericError::InvalidParameter(format!("theta = {theta} outside (0, 1)")));
    }
    if n < 4 {
        return Err(NumericError::InvalidParameter(format!("truncation N = {n} below 4")));
    }
    let model = LatticeModel { theta, n, h };
    for c in &model.h {
        if 4 * c.a.abs().max(c.b.abs()) > n {
            return Err(NumericError::InvalidParameter(format!(
                "Weyl factor mode ({}, {}) exceeds N/4",
                c.a, c.b
            )));
        }
    }
    for c in &model.h {
        let partner = model.coefficient(-c.a, -c.b);
        let ph = 2.0 * PI * theta * f64::from(c.a) * f64::from(c.b);
        let expected = c.value().conj() * c64::new(ph.cos(), ph.sin());
        if (partner - expected).norm() > 1e-12 * (1.0 + c.value().norm()) {
            return Err(NumericError::NotHermitian);
        }
    }
    Ok(model)
}

impl LatticeModel {
    pub fn dim(&self) -> usize {
        let s = (2 * self.n + 1) as usize;
        s * s
    }

    pub fn index(&self, n: i32, m: i32) -> Option<usize> {
        if n.abs() > self.n || m.abs() > self.n {
            return None;
        }
        let s = 2 * self.n + 1;
        Some(((n + self.n) * s + (m + self.n)) as usize)
    }

    pub fn mode(&self, idx: usize) -> (i32, i32) {
        let s = (2 * self.n + 1) as usize;
        ((idx / s) as i32 - self.n, (idx % s) as i32 - self.n)
    }

    /// Sum of the coefficients of `U^a V^b` in `h`.
    pub fn coefficient(&self, a: i32, b: i32) -> c64 {
        self.h.iter().filter(|c| c.a == a && c.b == b).map(|c| c.value()).sum()
    }

    /// Eigenvalues `n² + m²` of the flat Laplacian.
    pub fn laplacian_diag(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| {
            let (n, m) = self.mode(i);
            f64::from(n * n + m * m)
        }).collect()
    }

    /// Truncated left multiplication by `Σ c_{ab} U^a V^b`:
    /// `U^a V^b e_{n,m} = e^{2πiθbn} e_{n+a,m+b}`.
    pub fn left_multiplication(&self, coeffs: &[WeylCoefficient]) -> Mat<c64> {
        let d = self.dim();
        let mut l = Mat::<c64>::zeros(d, d);
        for c in coeffs {
            for j in 0..d {
                let (n, m) = self.mode(j);
                if let Some(t) = self.index(n + c.a, m + c.b) {
                    let ph = 2.0 * PI * self.theta * f64::from(c.b) * f64::from(n);
                    l[(t, j)] += c.value() * c64::new(ph.cos(), ph.sin());
                }
            }
        }
        l
    }

    /// Action of `U` or `V` on a mode vector.
    pub fn apply_generator(&self, which: char, x: &[c64]) -> Vec<c64> {
        let (a, b) = if which == 'U' { (1, 0) } else { (0, 1) };
        let mut y = vec![c64::new(0.0, 0.0); x.len()];
        for (j, v) in x.iter().enumerate() {
            let (n, m) = self.mode(j);
            if let Some(t) = self.index(n + a, m + b) {
                let ph = 2.0 * PI * self.theta * f64::from(b) * f64::from(n);
                y[t] += v * c64::new(ph.cos(), ph.sin());
            }
        }
        y
    }

    /// Spectrum of `k△k`, ascending, and the extreme eigenvalues of `k²`.
    pub fn spectrum(&self) -> Result<Spectrum, NumericError> {
        let lap = self.laplacian_diag();
        if self.h.iter().all(|c| c.value().norm() == 0.0) {
            let mut ev = lap;
            ev.sort_by(f64::total_cmp);
            return Ok(Spectrum { eigenvalues: ev, k2_min: 1.0, k2_max: 1.0 });
        }
        let d = self.dim();
        let lh = self.left_multiplication(&self.h);
        let eig = lh.self_adjoint_eigen(Side::Lower).map_err(|e| NumericError::InvalidParameter(format!("{e:?}")))?;
        let w: Vec<f64> = (0..d).map(|i| eig.S().column_vector()[i].re).collect();
        let u = eig.U();
        let scaled = Mat::<c64>::from_fn(d, d, |i, j| u[(i, j)] * (w[j] / 2.0).exp());
        let k = &scaled * u.adjoint();
        let kd = Mat::<c64>::from_fn(d, d, |i, j| k[(i, j)] * lap[j]);
        let a = &kd * &k;
        let ev = a.self_adjoint_eigenvalues(Side::Lower).map_err(|e| NumericError::InvalidParameter(format!("{e:?}")))?;
        let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Spectrum { eigenvalues: ev, k2_min: lo.exp(), k2_max: hi.exp() })
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub k2_min: f64,
    pub k2_max: f64,
}

/// Geometric grid `t ∈ [lo/(κN²), hi/(κN²)]`, `κ` the smallest eigenvalue of `k²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self { lo: 20.0, hi: 200.0, points: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaEstimate {
    pub c_minus1: f64,
    pub c0: f64,
    pub c1: f64,
    pub kernel_dim: usize,
    pub condition: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub min_eigenvalue: f64,
}

pub const MAX_CONDITION: f64 = 1e8;

/// Fits `Σ e^{-tλ} - dim ker = c₋₁/t + c₀ + c₁t` over the window; `c₀`
/// estimates `ζ(0)`.
pub fn zeta0_from_spectrum(spec: &Spectrum, n: i32, window: &FitWindow) -> Result<ZetaEstimate, NumericError> {
    if window.points < 3 || !(window.lo > 0.0 && window.hi > window.lo) {
        return Err(NumericError::InvalidParameter("fit window needs 0 < lo < hi and at least 3 points".into()));
    }
    let ev = &spec.eigenvalues;
    let lmax = ev.iter().copied().fold(0.0, f64::max);
    let kernel = ev.iter().filter(|&&l| l < 1e-8 * lmax).count();
    let scale = spec.k2_min * f64::from(n * n);
    let (t0, t1) = (window.lo / scale, window.hi / scale);
    let ts: Vec<f64> = (0..window.points)
        .map(|i| t0 * (t1 / t0).powf(i as f64 / (window.points - 1) as f64))
        .collect();
    let x = DMatrix::from_fn(ts.len(), 3, |i, j| match j {
        0 => 1.0 / ts[i],
        1 => 1.0,
        _ => ts[i],
    });
    let y = DVector::from_iterator(
        ts.len(),
        ts.iter().map(|t| ev.iter().map(|l| (-t * l.max(0.0)).exp()).sum::<f64>() - kernel as f64),
    );
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = smax / smin;
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(NumericError::IllConditioned(condition));
    }
    let c = svd.solve(&y, 1e-14).map_err(|e| NumericError::InvalidParameter(e.into()))?;
    Ok(ZetaEstimate {
        c_minus1: c[0],
        c0: c[1],
        c1: c[2],
        kernel_dim: kernel,
        condition,
        t_min: t0,
        t_max: t1,
        min_eigenvalue: ev.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

pub fn zeta0_estimate(model: &LatticeModel, window: &FitWindow) -> Result<ZetaEstimate, NumericError> {
    let spec = model.spectrum()?;
    zeta0_from_spectrum(&spec, model.n, window)
}

pub fn golden_theta() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// The Weyl factors used by the default zeta report.
pub fn standard_weyl_factors(theta: f64) -> Vec<(&'static str, Vec<WeylCoefficient>)> {
    let mut h3 = cosine_term(theta, 1, 0, 0.2).to_vec();
    h3.extend(cosine_term(theta, 0, 1, 0.2));
    let mut h4 = cosine_term(theta, 1, 0, 0.3).to_vec();
    h4.extend(cosine_term(theta, 0, 1, 0.3));
    h4.extend(cosine_term(theta, 1, 1, 0.2));
    vec![
        ("flat", vec![]),
        ("cos-u", cosine_term(theta, 1, 0, 0.3).to_vec()),
        ("cos-uv", cosine_term(theta, 1, 1, 0.25).to_vec()),
        ("cos-u-v", h3),
        ("mixed", h4),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_relation() {
        let m = build_lattice(golden_theta(), 4, vec![]).unwrap();
        let mut e = vec![c64::new(0.0, 0.0); m.dim()];
        e[m.index(0, 0).unwrap()] = c64::new(1.0, 0.0);
        let vu = m.apply_generator('V', &m.apply_generator('U', &e));
        let uv = m.apply_generator('U', &m.apply_generator('V', &e));
        let ph = 2.0 * PI * golden_theta();
        let i = m.index(1, 1).unwrap();
        assert!((vu[i] - c64::new(ph.cos(), ph.sin()) * uv[i]).norm() < 1e-14);
        assert_eq!(m.laplacian_diag()[m.index(1, 0).unwrap()], 1.0);
    }

    #[test]
    fn interior_columns_are_orthonormal() {
        let m = build_lattice(0.3, 5, vec![]).unwrap();
        let l = m.left_multiplication(&[WeylCoefficient { a: 0, b: 1, re: 1.0, im: 0.0 }]);
        for n in -4..=4 {
            for mm in -4..4 {
                let j = m.index(n, mm).unwrap();
                let norm: f64 = (0..m.dim()).map(|i| l[(i, j)].norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_and_wide_support() {
        let bad = vec![WeylCoefficient { a: 1, b: 0, re: 0.3, im: 0.0 }];
        assert!(matches!(build_lattice(0.3, 8, bad), Err(NumericError::NotHermitian)));
        let wide = cosine_term(0.3, 3, 0, 0.1).to_vec();
        assert!(build_lattice(0.3, 8, wide).is_err());
        assert!(build_lattice(1.5, 8, vec![]).is_err());
    }

    #[test]
    fn weyl_factor_spectrum_is_nonnegative() {
        let m = build_lattice(golden_theta(), 6, cosine_term(golden_theta(), 1, 1, 0.3).to_vec()).unwrap();
        let s = m.spectrum().unwrap();
        assert!(s.eigenvalues[0] > -1e-10);
        assert!(s.k2_min < 1.0 && s.k2_max > 1.0);
    }

    #[test]
    fn flat_torus_estimate() {
        let m = build_lattice(golden_theta(), 20, vec![]).unwrap();
        let z = zeta0_estimate(&m, &FitWindow::default()).unwrap();
        assert_eq!(z.kernel_dim, 1);
        assert!((z.c0 + 1.0).abs() < 0.1, "{z:?}");
    }
}
