//! Batch commands behind the `ncgb` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use ncgb_core::modular::special::{linear_grid, to_csv};
use ncgb_core::modular::{h_from_f, k_from_h, sample};
use ncgb_core::numeric::checks::{CheckRegistry, ReportRecord, VerifyConfig};
use ncgb_core::numeric::lattice::{
    build_lattice, golden_theta, standard_weyl_factors, zeta0_estimate, FitWindow, WeylCoefficient,
};
use ncgb_core::rational::Q;
use ncgb_core::reduction::validate::{validate, validate_closed_forms};
use ncgb_core::reduction::derive_with;

pub const ZETA_FLAT_TOLERANCE: f64 = 0.1;
pub const ZETA_SPREAD_TOLERANCE: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Derive,
    Verify,
    Zeta,
    Plot,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub out: Option<PathBuf>,
    /// Include full term lists in the derive trace.
    pub trace: bool,
    pub seeds: Vec<u64>,
    pub dims: Vec<usize>,
    pub checks: Option<Vec<String>>,
    pub theta: f64,
    pub truncation: i32,
    pub weyl: Option<PathBuf>,
    pub fit: FitWindow,
    pub grid: (f64, f64, f64),
    pub tolerance_scale: f64,
    pub perturbation: Option<Q>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let v = VerifyConfig::default();
        Self {
            command,
            out: None,
            trace: false,
            seeds: v.seeds,
            dims: v.dims,
            checks: None,
            theta: golden_theta(),
            truncation: 20,
            weyl: None,
            fit: FitWindow::default(),
            grid: (-6.0, 6.0, 0.05),
            tolerance_scale: 1.0,
            perturbation: None,
        }
    }
}

/// Output of a command: the report body, a short human summary and
/// whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: String,
    pub summary: String,
    pub ok: bool,
}

fn push_json(out: &mut String, v: &impl Serialize) {
    out.push_str(&serde_json::to_string(v).expect("report records serialize"));
    out.push('\n');
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Derive => run_derive(cfg),
        Command::Verify => run_verify(cfg),
        Command::Zeta => run_zeta(cfg),
        Command::Plot => run_plot(cfg),
    }
}

pub fn run_derive(cfg: &RunConfig) -> Result<Outcome> {
    let d = derive_with(cfg.perturbation.as_ref()).context("reduction failed")?;
    let mut report = String::new();
    for r in &d.records {
        let mut v = serde_json::to_value(r)?;
        if !cfg.trace {
            v.as_object_mut().expect("record is an object").remove("terms");
        }
        v.as_object_mut().expect("record is an object").insert("kind".into(), json!("stage"));
        push_json(&mut report, &v);
    }
    let checks: Vec<_> = validate(&d).into_iter().chain(validate_closed_forms()).collect();
    let mut summary = String::new();
    for c in &checks {
        let mut v = serde_json::to_value(c)?;
        v.as_object_mut().expect("check is an object").insert("kind".into(), json!("check"));
        push_json(&mut report, &v);
        if !c.pass {
            writeln!(summary, "FAIL {} [{}]\n{}", c.name, c.anchor, c.diff)?;
        }
    }
    let ok = checks.iter().all(|c| c.pass);
    let statement = format!(
        "zeta(0) + 1 = {} * phi(F(Delta)(d_j k) d_j k), F = {}; K odd => zeta(0) = -1 independent of k",
        d.prefactor, d.f
    );
    push_json(&mut report, &json!({ "kind": "result", "f": d.f.to_string(), "pass": ok, "statement": statement }));
    writeln!(summary, "{} of {} derivation checks passed", checks.iter().filter(|c| c.pass).count(), checks.len())?;
    if ok {
        writeln!(summary, "{statement}")?;
    }
    Ok(Outcome { report, summary, ok })
}

pub fn run_verify(cfg: &RunConfig) -> Result<Outcome> {
    let mut registry = CheckRegistry::standard()?;
    if let Some(names) = &cfg.checks {
        registry = registry.select(names)?;
    }
    let vcfg = VerifyConfig { seeds: cfg.seeds.clone(), dims: cfg.dims.clone(), tolerance_scale: cfg.tolerance_scale };
    let records = registry.run(&vcfg);
    let mut report = String::new();
    for r in &records {
        push_json(&mut report, r);
    }
    let mut summary = String::new();
    for name in registry.names() {
        let rs: Vec<&ReportRecord> = records.iter().filter(|r| r.check == name).collect();
        let passed = rs.iter().filter(|r| r.pass).count();
        let worst = rs.iter().filter_map(|r| r.error).fold(0.0, f64::max);
        let anchor = rs.first().map(|r| r.anchor.as_str()).unwrap_or("");
        let status = if passed == rs.len() { "PASS" } else { "FAIL" };
        writeln!(summary, "{status} {name} [{anchor}]: {passed}/{} within threshold, max error {worst:.3e}", rs.len())?;
        for r in rs.iter().filter(|r| !r.pass) {
            writeln!(
                summary,
                "  {name} [{anchor}] dim {} seed {}: error {:?} threshold {:.1e}{}",
                r.dim,
                r.seed,
                r.error,
                r.threshold,
                r.message.as_deref().map(|m| format!(" ({m})")).unwrap_or_default()
            )?;
        }
    }
    Ok(Outcome { report, summary, ok: records.iter().all(|r| r.pass) })
}

#[derive(Clone, Debug, Serialize)]
struct ZetaRecord<'a> {
    kind: &'static str,
    weyl: &'a str,
    theta: f64,
    truncation: i32,
    c0: f64,
    c_minus1: f64,
    c1: f64,
    kernel_dim: usize,
    condition: f64,
    t_min: f64,
    t_max: f64,
}

pub fn read_weyl(path: &std::path::Path) -> Result<Vec<WeylCoefficient>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing Weyl coefficients in {}", path.display()))
}

pub fn run_zeta(cfg: &RunConfig) -> Result<Outcome> {
    let factors: Vec<(String, Vec<WeylCoefficient>)> = match &cfg.weyl {
        Some(p) => {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "weyl".into());
            vec![("flat".into(), vec![]), (name, read_weyl(p)?)]
        }
        None => standard_weyl_factors(cfg.theta).into_iter().map(|(n, h)| (n.to_string(), h)).collect(),
    };
    let mut report = String::new();
    let mut summary = String::new();
    let mut estimates = Vec::new();
    for (name, h) in &factors {
        let model = build_lattice(cfg.theta, cfg.truncation, h.clone()).with_context(|| format!("Weyl factor {name}"))?;
        let z = zeta0_estimate(&model, &cfg.fit).with_context(|| format!("Weyl factor {name}"))?;
        push_json(
            &mut report,
            &ZetaRecord {
                kind: "estimate",
                weyl: name,
                theta: cfg.theta,
                truncation: cfg.truncation,
                c0: z.c0,
                c_minus1: z.c_minus1,
                c1: z.c1,
                kernel_dim: z.kernel_dim,
                condition: z.condition,
                t_min: z.t_min,
                t_max: z.t_max,
            },
        );
        writeln!(summary, "{name}: c0 = {:.6} (kernel {}, condition {:.1})", z.c0, z.kernel_dim, z.condition)?;
        estimates.push((name.clone(), h.is_empty(), z.c0));
    }
    let lo = estimates.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    let hi = estimates.iter().map(|e| e.2).fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let flat_ok = estimates
        .iter()
        .filter(|e| e.1)
        .all(|e| (e.2 + 1.0).abs() <= ZETA_FLAT_TOLERANCE * cfg.tolerance_scale);
    let spread_ok = spread <= ZETA_SPREAD_TOLERANCE * cfg.tolerance_scale;
    push_json(&mut report, &json!({ "kind": "summary", "spread": spread, "flat_ok": flat_ok, "spread_ok": spread_ok }));
    writeln!(summary, "spread across Weyl factors: {spread:.3e}")?;
    Ok(Outcome { report, summary, ok: flat_ok && spread_ok })
}

pub fn grid_points(grid: (f64, f64, f64)) -> Result<Vec<f64>> {
    let (a, b, step) = grid;
    if !(step > 0.0 && b > a) {
        bail!("grid needs start < end and a positive step");
    }
    let n = ((b - a) / step).round() as usize + 1;
    Ok(linear_grid(a, b, n))
}

/// CSV tables of `h` and `K`; with an output directory they go to
/// `h.csv` and `K.csv`.
pub fn run_plot(cfg: &RunConfig) -> Result<Outcome> {
    let grid = grid_points(cfg.grid)?;
    let h = to_csv(&sample(&h_from_f()?, &grid));
    let k = to_csv(&sample(&k_from_h()?, &grid));
    let summary = format!("sampled h and K at {} points on [{}, {}]\n", grid.len(), cfg.grid.0, cfg.grid.1);
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("h.csv"), &h)?;
        std::fs::write(dir.join("K.csv"), &k)?;
        return Ok(Outcome { report: String::new(), summary, ok: true });
    }
    Ok(Outcome { report: format!("{h}\n{k}"), summary, ok: true })
}

/// Parses `100` (seeds `0..100`), `a..b` or a comma list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        return Ok((a..b).collect());
    }
    if s.contains(',') {
        return s.split(',').map(|x| Ok(x.trim().parse()?)).collect();
    }
    let n: u64 = s.trim().parse()?;
    Ok((0..n).collect())
}

/// Parses `start:end:step`.
pub fn parse_grid(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, st] = parts[..] else { bail!("grid must be start:end:step") };
    Ok((a.trim().parse()?, b.trim().parse()?, st.trim().parse()?))
}
