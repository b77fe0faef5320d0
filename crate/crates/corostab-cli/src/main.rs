//! Batch front end: stability scans, hypo-elastic simulations,
//! counterexample searches and report emission.
//!
//! Exit codes: 0 success / expectations met, 2 verdict mismatch against a
//! declared expectation, 1 usage or execution error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_params, parse_region, FileConfig, Resolved};

#[derive(Debug)]
pub struct CliError {
    pub usage: bool,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            usage: true,
            message: message.into(),
        }
    }

    pub fn exec(err: impl std::fmt::Display) -> Self {
        CliError {
            usage: false,
            message: err.to_string(),
        }
    }

    pub fn usage_from(err: impl std::fmt::Display) -> Self {
        CliError {
            usage: true,
            message: err.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "corostab",
    about = "Corotational stability scans, hypo-elastic simulations and counterexample searches for isotropic Cauchy-elastic laws",
    version
)]
struct Cli {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for scans (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Constitutive law name (see `catalog`).
    #[arg(long)]
    law: Option<String>,

    /// Law or zero-grade parameters, `key=value[,key=value...]`.
    #[arg(long = "params", value_name = "K=V")]
    params: Vec<String>,

    /// Rate: zj | gn | log | spin:nu1,nu2,nu3 | oldroyd | truesdell.
    #[arg(long)]
    rate: Option<String>,

    /// Eigenvalue region for B, `lo:hi`.
    #[arg(long)]
    region: Option<String>,

    /// Number of scan samples.
    #[arg(long)]
    samples: Option<usize>,

    /// RNG seed (falls back to COROSTAB_SEED).
    #[arg(long)]
    seed: Option<u64>,

    /// Output path prefix (writes <out>.json / <out>.csv).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a stability + invertibility scan and test declared expectations.
    Check {
        #[command(flatten)]
        common: CommonArgs,

        /// Verdict expectations: csp-positive | csp-negative |
        /// tsts-positive | tsts-negative | agreement | det-correspondence.
        #[arg(long = "expect")]
        expect: Vec<String>,
    },
    /// Integrate a hypo-elastic rate equation along a deformation path.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,

        /// Stiffness source: zero-grade | induced | zero.
        #[arg(long)]
        stiffness: Option<String>,

        /// Path: shear | uniaxial | triaxial | rotation | rotshear | static.
        #[arg(long)]
        path: Option<String>,

        /// Shear rate for shear paths.
        #[arg(long)]
        gamma: Option<f64>,

        /// Angular rate for rotation paths.
        #[arg(long)]
        omega: Option<f64>,

        /// Time step.
        #[arg(long)]
        dt: Option<f64>,

        /// Final time.
        #[arg(long = "t-end")]
        t_end: Option<f64>,
    },
    /// Search for a negative direction of the induced stiffness.
    Search {
        #[command(flatten)]
        common: CommonArgs,

        /// Probe budget.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// List registered laws, rates and paths.
    Catalog,
}

fn resolve(file: &FileConfig, common: &CommonArgs) -> Result<Resolved, CliError> {
    let mut params = file.params.clone().unwrap_or_default();
    for (k, v) in parse_params(&common.params)? {
        params.insert(k, v);
    }
    let region = match (&common.region, &file.region) {
        (Some(s), _) => Some(parse_region(s)?),
        (None, Some(s)) => Some(parse_region(s)?),
        (None, None) => None,
    };
    Ok(Resolved {
        law: common.law.clone().or_else(|| file.law.clone()),
        params,
        rate: common.rate.clone().or_else(|| file.rate.clone()),
        region,
        samples: common.samples.or(file.samples),
        seed: common.seed.or(file.seed),
        path: file.path.clone(),
        gamma: file.gamma.unwrap_or(1.0),
        omega: file.omega.unwrap_or(1.0),
        a: file.a.unwrap_or([0.5, 0.0, 0.0]),
        dt: file.dt.unwrap_or(1e-3),
        t_end: file.t_end.unwrap_or(1.0),
        stiffness: file.stiffness.clone(),
        expect: file.expect.clone().unwrap_or_default(),
        budget: file.budget.unwrap_or(100_000),
        out: common.out.clone().or_else(|| file.out.clone()),
        jobs: file.jobs,
    })
}

fn run() -> Result<i32, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return Ok(0);
        }
        Err(e) => return Err(CliError::usage(e.to_string())),
    };
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };

    match &cli.command {
        Command::Check { common, expect } => {
            let mut cfg = resolve(&file, common)?;
            if !expect.is_empty() {
                cfg.expect = expect.clone();
            }
            init_pool(cli.jobs.or(cfg.jobs))?;
            commands::cmd_check(&cfg)
        }
        Command::Simulate {
            common,
            stiffness,
            path,
            gamma,
            omega,
            dt,
            t_end,
        } => {
            let mut cfg = resolve(&file, common)?;
            if stiffness.is_some() {
                cfg.stiffness = stiffness.clone();
            }
            if path.is_some() {
                cfg.path = path.clone();
            }
            if let Some(g) = gamma {
                cfg.gamma = *g;
            }
            if let Some(w) = omega {
                cfg.omega = *w;
            }
            if let Some(d) = dt {
                cfg.dt = *d;
            }
            if let Some(te) = t_end {
                cfg.t_end = *te;
            }
            init_pool(cli.jobs.or(cfg.jobs))?;
            commands::cmd_simulate(&cfg)
        }
        Command::Search { common, budget } => {
            let mut cfg = resolve(&file, common)?;
            if let Some(b) = budget {
                cfg.budget = *b;
            }
            init_pool(cli.jobs.or(cfg.jobs))?;
            commands::cmd_search(&cfg)
        }
        Command::Catalog => commands::cmd_catalog(),
    }
}

fn init_pool(jobs: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::usage("--jobs must be >= 1".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::exec(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            if e.usage {
                eprintln!("usage error: {}", e.message);
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(1)
        }
    }
}
