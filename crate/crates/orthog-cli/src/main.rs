//! Experiment runner for the orthog library: drives the transference
//! sweeps, invariant suites and kernel/g evaluations from a config file,
//! writes machine-readable results, and exits nonzero when any check
//! fails its tolerance.

mod config;
mod experiments;
mod report;

use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use config::Config;
use experiments::Params;

#[derive(Parser)]
#[command(
    name = "orthog",
    about = "Orthogonal-polynomial g-function experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment recipe (line-oriented `key = value` with one [section]
    /// per experiment; unknown keys are rejected)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for summary.txt, CSV tables and plot data
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Quadrature order override
    #[arg(long, global = true)]
    order: Option<usize>,

    /// Spectral truncation override
    #[arg(long, global = true)]
    trunc: Option<usize>,

    /// Sweep grid override, comma-separated (e.g. 1e2,1e3,1e4)
    #[arg(long, global = true)]
    sweep: Option<String>,

    /// Tolerance override for the experiment's main check
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonality and eigenfunction-identity suites over the family grid
    Orthocheck,
    /// Closed-form g norms against quadrature plus the 1/4-Parseval split
    Gnorm,
    /// Scaling-limit sweeps: norms, inner products, g-norm transfer
    Transfer,
    /// One Gasper linearization row by triple-product quadrature
    Linearize,
    /// Heat-kernel positivity, mass and symmetry on a grid
    Kernel,
    /// Empirical ||g f||_p / ||f||_p ratios with refinement stability
    Ratios,
}

impl Command {
    fn section(&self) -> &'static str {
        match self {
            Command::Orthocheck => "orthocheck",
            Command::Gnorm => "gnorm",
            Command::Transfer => "transfer",
            Command::Linearize => "linearize",
            Command::Kernel => "kernel",
            Command::Ratios => "ratios",
        }
    }
}

fn main() {
    let code = match run() {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run() -> Result<bool> {
    let cli = Cli::parse();

    // worker-thread cap from the environment
    if let Ok(threads) = std::env::var("ORTHOG_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }

    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let section = cfg.section(cli.command.section());

    let params = Params {
        family: section.get("family").map(str::to_string),
        direction: section.get("direction").map(str::to_string),
        alpha: section.f64("alpha")?,
        beta: section.f64("beta")?,
        function: section.get("function").map(str::to_string),
        sweep: match &cli.sweep {
            Some(s) => Some(config::parse_f64_list(s)?),
            None => section.f64_list("sweep")?,
        },
        t_list: section.f64_list("t")?,
        p_list: section.f64_list("p")?,
        trunc: cli.trunc.or(section.usize("trunc")?),
        order: cli.order.or(section.usize("order")?),
        nmax: section.usize("nmax")?,
        kmax: section.usize("kmax")?,
        m: section.usize("m")?,
        n: section.usize("n")?,
        grid: section.usize("grid")?,
        tolerance: cli.tolerance.or(section.f64("tolerance")?),
    };
    let out_dir = section
        .get("out")
        .map(PathBuf::from)
        .unwrap_or_else(|| cli.out.clone());

    let report = match cli.command {
        Command::Orthocheck => experiments::run_orthocheck(&params)?,
        Command::Gnorm => experiments::run_gnorm(&params)?,
        Command::Transfer => experiments::run_transfer(&params)?,
        Command::Linearize => experiments::run_linearize(&params)?,
        Command::Kernel => experiments::run_kernel(&params)?,
        Command::Ratios => experiments::run_ratios(&params)?,
    };
    report.emit(&out_dir)?;
    print!("{}", report.summary_text());
    Ok(report.passed())
}
