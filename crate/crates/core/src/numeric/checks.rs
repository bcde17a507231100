//! Registry of the randomized identity checks run by `verify`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::identities::{check_byparts_modular, check_frechet_identities, check_move_lemma, check_trace_vanish};
use super::matrix::{random_hermitian, random_matrix, rng, MatrixAlgebraInstance};
use super::NumericError;
use crate::modular::{k_from_h, ModularFunctionExpr, Sampler};
use crate::rational::qi;

/// Spectrum bound of the random `k`: eigenvalues in `[eps, 1/eps]`.
pub const DEFAULT_EPS: f64 = 0.1;

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    /// Label of the identity being checked.
    fn anchor(&self) -> &'static str;
    fn threshold(&self) -> f64;
    /// Error of one random instance of dimension `d`.
    fn run(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<f64, NumericError>;
}

pub struct MoveLemma;

impl Check for MoveLemma {
    fn name(&self) -> &'static str {
        "move_lemma"
    }
    fn anchor(&self) -> &'static str {
        "move-lemma"
    }
    fn threshold(&self) -> f64 {
        1e-6
    }
    fn run(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<f64, NumericError> {
        let inst = MatrixAlgebraInstance::random(d, DEFAULT_EPS, rng);
        let rho = random_matrix(d, rng);
        let mut worst = 0f64;
        for m in 1..=3 {
            worst = worst.max(check_move_lemma(&inst, &rho, m)?);
        }
        Ok(worst)
    }
}

pub struct ByParts;

impl Check for ByParts {
    fn name(&self) -> &'static str {
        "byparts"
    }
    fn anchor(&self) -> &'static str {
        "trace-by-parts"
    }
    fn threshold(&self) -> f64 {
        1e-10
    }
    fn run(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<f64, NumericError> {
        let inst = MatrixAlgebraInstance::random(d, DEFAULT_EPS, rng);
        let a = random_matrix(d, rng);
        let b = random_matrix(d, rng);
        let m = rng.gen_range(1..=3u8);
        let mut f = ModularFunctionExpr::term(qi(1), 0, Some(m));
        f.add_term(qi(rng.gen_range(-3..=3)), rng.gen_range(-2..=2), None);
        check_byparts_modular(&inst, &a, &b, &f)
    }
}

pub struct TraceVanish {
    k: Sampler,
}

impl TraceVanish {
    pub fn new() -> Result<Self, NumericError> {
        Ok(Self { k: Sampler::new(k_from_h()?) })
    }
}

impl Check for TraceVanish {
    fn name(&self) -> &'static str {
        "trace_vanish"
    }
    fn anchor(&self) -> &'static str {
        "k-odd-trace"
    }
    fn threshold(&self) -> f64 {
        1e-10
    }
    fn run(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<f64, NumericError> {
        let inst = MatrixAlgebraInstance::random(d, DEFAULT_EPS, rng);
        let x = random_matrix(d, rng);
        Ok(check_trace_vanish(&inst, &self.k, &x))
    }
}

pub struct Frechet;

impl Check for Frechet {
    fn name(&self) -> &'static str {
        "frechet"
    }
    fn anchor(&self) -> &'static str {
        "log-derivative"
    }
    fn threshold(&self) -> f64 {
        1e-8
    }
    fn run(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<f64, NumericError> {
        let psi = random_hermitian(d, rng);
        let c = random_matrix(d, rng);
        let e = check_frechet_identities(&psi, &c)?;
        Ok(e.left.max(e.right))
    }
}

pub struct ModularRewrite;

impl Check for ModularRewrite {
    fn name(&self) -> &'static str {
        "modular_rewrite"
    }
    fn anchor(&self) -> &'static str {
        "modular-rewrite"
    }
    fn threshold(&self) -> f64 {
        1e-10
    }
    fn run(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<f64, NumericError> {
        let psi = random_hermitian(d, rng);
        let c = random_matrix(d, rng);
        let e = check_frechet_identities(&psi, &c)?;
        Ok(e.half_power.max(e.full_power))
    }
}

pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        Self { checks: Vec::new() }
    }

    pub fn standard() -> Result<Self, NumericError> {
        let mut r = Self::empty();
        r.register(Box::new(MoveLemma));
        r.register(Box::new(ByParts));
        r.register(Box::new(TraceVanish::new()?));
        r.register(Box::new(Frechet));
        r.register(Box::new(ModularRewrite));
        Ok(r)
    }

    pub fn register(&mut self, c: Box<dyn Check>) {
        self.checks.push(c);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    /// Keeps only the named checks, in the given order.
    pub fn select(mut self, names: &[String]) -> Result<Self, NumericError> {
        let mut out = Vec::new();
        for n in names {
            let Some(i) = self.checks.iter().position(|c| c.name() == n) else {
                return Err(NumericError::InvalidParameter(format!("unknown check {n}")));
            };
            out.push(self.checks.remove(i));
        }
        Ok(Self { checks: out })
    }

    pub fn run(&self, cfg: &VerifyConfig) -> Vec<ReportRecord> {
        let jobs: Vec<(&dyn Check, usize, u64)> = self
            .checks
            .iter()
            .flat_map(|c| cfg.dims.iter().flat_map(move |&d| cfg.seeds.iter().map(move |&s| (c.as_ref(), d, s))))
            .collect();
        jobs.into_par_iter().map(|(c, d, s)| run_one(c, d, s, cfg.tolerance_scale)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seeds: Vec<u64>,
    pub dims: Vec<usize>,
    pub tolerance_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seeds: (0..100).collect(), dims: vec![4, 6, 8], tolerance_scale: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    pub anchor: String,
    pub dim: usize,
    pub seed: u64,
    /// `None` when the check itself failed to evaluate.
    pub error: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

fn instance_seed(seed: u64, d: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ d as u64
}

pub fn run_one(c: &dyn Check, d: usize, seed: u64, tolerance_scale: f64) -> ReportRecord {
    let threshold = c.threshold() * tolerance_scale;
    let mut r = rng(instance_seed(seed, d));
    let (error, message) = match c.run(d, &mut r) {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(e.to_string())),
    };
    ReportRecord {
        check: c.name().into(),
        anchor: c.anchor().into(),
        dim: d,
        seed,
        error,
        threshold,
        pass: error.is_some_and(|e| e.is_finite() && e < threshold),
        message,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_selects_by_name() {
        let r = CheckRegistry::standard().unwrap();
        assert_eq!(r.names(), ["move_lemma", "byparts", "trace_vanish", "frechet", "modular_rewrite"]);
        let s = r.select(&["frechet".into(), "byparts".into()]).unwrap();
        assert_eq!(s.names(), ["frechet", "byparts"]);
        assert!(CheckRegistry::standard().unwrap().select(&["nope".into()]).is_err());
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let r = CheckRegistry::standard().unwrap();
        let cfg = VerifyConfig { seeds: vec![0, 1], dims: vec![4], tolerance_scale: 1.0 };
        let a = r.run(&cfg);
        assert_eq!(a.len(), 10);
        assert!(a.iter().all(|x| x.pass), "{a:?}");
        assert_eq!(a, r.run(&cfg));
    }

    #[test]
    fn tiny_tolerance_fails() {
        let r = CheckRegistry::standard().unwrap().select(&["move_lemma".into()]).unwrap();
        let cfg = VerifyConfig { seeds: vec![3], dims: vec![4], tolerance_scale: 1e-12 };
        assert!(!r.run(&cfg)[0].pass);
    }
}
