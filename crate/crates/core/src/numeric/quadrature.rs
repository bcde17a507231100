//! Globally adaptive Gauss–Kronrod (7/15) quadrature for scalar and
//! vector-valued integrands on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

#[derive(Clone, Debug)]
pub struct VectorQuadrature {
    pub value: Vec<f64>,
    /// Euclidean norm of the error estimate.
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn rule<F: FnMut(f64, &mut [f64])>(f: &mut F, dim: usize, a: f64, b: f64, buf: &mut [f64]) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    f(c, buf);
    for d in 0..dim {
        k[d] += WGK[7] * buf[d];
        g[d] += WG[3] * buf[d];
    }
    for (j, &x) in XGK[..7].iter().enumerate() {
        for s in [-1.0, 1.0] {
            f(c + s * h * x, buf);
            for d in 0..dim {
                k[d] += WGK[j] * buf[d];
                if j % 2 == 1 {
                    g[d] += WG[j / 2] * buf[d];
                }
            }
        }
    }
    let diff: Vec<f64> = k.iter().zip(&g).map(|(x, y)| (x - y) * h).collect();
    for v in &mut k {
        *v *= h;
    }
    Segment { a, b, value: k, error: norm(&diff) }
}

/// Integrates `f: [a, b] -> R^dim`; `f(x, out)` writes the value into `out`.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> VectorQuadrature {
    let mut buf = vec![0.0; dim];
    let first = rule(&mut f, dim, a, b, &mut buf);
    let mut evals = 15;
    let mut total = first.value.clone();
    let mut err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * norm(&total));
        if err <= tol {
            return VectorQuadrature { value: total, error: err, evals, converged: true };
        }
        if heap.len() >= opts.max_intervals {
            return VectorQuadrature { value: total, error: err, evals, converged: false };
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return VectorQuadrature { value: total, error: err, evals, converged: false };
        }
        let l = rule(&mut f, dim, worst.a, mid, &mut buf);
        let r = rule(&mut f, dim, mid, worst.b, &mut buf);
        evals += 30;
        for d in 0..dim {
            total[d] += l.value[d] + r.value[d] - worst.value[d];
        }
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        // re-sum occasionally so the running error does not drift
        if heap.len() % 64 == 0 {
            err = heap.iter().map(|s| s.error).sum();
        }
    }
}

pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadratureOptions) -> Quadrature {
    let r = integrate_vec(|x, out| out[0] = f(x), 1, a, b, opts);
    Quadrature { value: r.value[0], error: r.error, evals: r.evals, converged: r.converged }
}

/// `∫₀^∞ f(u) du` through `u = t/(1-t)`.
pub fn integrate_half_line_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    opts: &QuadratureOptions,
) -> VectorQuadrature {
    integrate_vec(
        |t, out| {
            let s = 1.0 - t;
            f(t / s, out);
            let jac = 1.0 / (s * s);
            for v in out.iter_mut() {
                *v *= jac;
            }
        },
        dim,
        0.0,
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, &QuadratureOptions::default());
        assert!(r.converged);
        assert!((r.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &QuadratureOptions::default());
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn half_line_vector() {
        let r = integrate_half_line_vec(
            |u, out| {
                out[0] = 1.0 / (1.0 + u * u);
                out[1] = (-u).exp();
            },
            2,
            &QuadratureOptions::default(),
        );
        assert!(r.converged);
        assert!((r.value[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
        assert!((r.value[1] - 1.0).abs() < 1e-11);
    }
}
