use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, ValueEnum};

use ncgb_cli::{parse_grid, parse_seeds, run, Command, RunConfig};
use ncgb_core::numeric::lattice::FitWindow;
use ncgb_core::rational::parse_q;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Derive,
    Verify,
    Zeta,
    Plot,
}

/// Gauss-Bonnet computation for the noncommutative two-torus.
#[derive(Debug, Parser)]
#[command(name = "ncgb", version)]
struct Args {
    #[arg(long, value_enum)]
    command: Cmd,
    /// Report file (a directory for `plot`); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include full term lists in the derive trace.
    #[arg(long)]
    trace: bool,
    /// Seed count `N`, range `a..b` or list `a,b,c`.
    #[arg(long, default_value = "100")]
    seeds: String,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    dims: Vec<usize>,
    /// Subset of verification checks, comma separated.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 20)]
    truncation: i32,
    /// JSON list of `{a, b, re, im}` coefficients of `h`.
    #[arg(long)]
    weyl: Option<PathBuf>,
    #[arg(long, default_value_t = FitWindow::default().lo)]
    fit_lo: f64,
    #[arg(long, default_value_t = FitWindow::default().hi)]
    fit_hi: f64,
    #[arg(long, default_value_t = FitWindow::default().points)]
    fit_points: usize,
    /// `start:end:step`.
    #[arg(long, default_value = "-6:6:0.05")]
    grid: String,
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Test mode: add this rational to one coefficient of the derivation.
    #[arg(long, hide = true)]
    inject_perturbation: Option<String>,
}

fn config(a: Args) -> Result<RunConfig> {
    let command = match a.command {
        Cmd::Derive => Command::Derive,
        Cmd::Verify => Command::Verify,
        Cmd::Zeta => Command::Zeta,
        Cmd::Plot => Command::Plot,
    };
    let mut cfg = RunConfig::new(command);
    cfg.out = a.out;
    cfg.trace = a.trace;
    cfg.seeds = parse_seeds(&a.seeds)?;
    cfg.dims = a.dims;
    cfg.checks = a.checks;
    if let Some(t) = a.theta {
        cfg.theta = t;
    }
    cfg.truncation = a.truncation;
    cfg.weyl = a.weyl;
    cfg.fit = FitWindow { lo: a.fit_lo, hi: a.fit_hi, points: a.fit_points };
    cfg.grid = parse_grid(&a.grid)?;
    cfg.tolerance_scale = a.tolerance_scale;
    cfg.perturbation = a
        .inject_perturbation
        .map(|s| parse_q(&s).ok_or_else(|| anyhow::anyhow!("bad rational {s}")))
        .transpose()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    faer::set_global_parallelism(faer::Par::Seq);
    let result = config(Args::parse()).and_then(|cfg| {
        let outcome = run(&cfg)?;
        match (&cfg.out, cfg.command) {
            (Some(p), c) if c != Command::Plot => std::fs::write(p, &outcome.report)?,
            _ => print!("{}", outcome.report),
        }
        eprint!("{}", outcome.summary);
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
