//! Batch front end for the two-photon Dicke model crate.
//!
//! Commands: solve | series | sweep | phase-diagram | scaling |
//! oracle-check. Outputs are figure-ready CSV (or JSON) with the resolved
//! configuration embedded; identical configurations produce byte-identical
//! files. Exit codes: 0 ok, 2 config error, 3 domain error, 4 oracle
//! mismatch. `DICKE2P_THREADS` caps the worker count of the parallel
//! sweeps.

// Negated comparisons like `!(t >= 0.0)` are NaN guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CommonArgs, RangeSpec, Resolved, Spacing};

/// Errors mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or I/O problem (exit 2).
    Config(String),
    /// The physics rejected the parameters (exit 3).
    Domain(String),
    /// An oracle comparison failed its tolerance (exit 4).
    OracleMismatch(String),
}

impl From<dicke2p::Error> for CliError {
    fn from(e: dicke2p::Error) -> Self {
        use dicke2p::Error::*;
        match e {
            NonPositiveFrequency { .. } | ZeroQubits => CliError::Config(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::OracleMismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Domain(m) | CliError::OracleMismatch(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dicke2p",
    version,
    about = "Mean-field phase structure and quadrature squeezing of the two-photon Dicke model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean-field solution (both order-parameter branches).
    Solve(SolveArgs),
    /// Squeezing time series; --branch both writes `+` and `-` files.
    Series(SeriesArgs),
    /// Minimum squeezing against N epsilon at fixed t or over a t grid.
    Sweep(SweepArgs),
    /// Phase tags over a (N epsilon, g) grid plus the boundary curve.
    PhaseDiagram(PhaseDiagramArgs),
    /// Critical scaling of squeezing magnitude and period near omega/2.
    Scaling(ScalingArgs),
    /// Regenerate derived values and verify closed forms against oracles.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// End of the time window (defaults to 100).
    #[arg(long)]
    t_max: Option<f64>,
    /// Samples per oscillation period, at least 50 (defaults to 200).
    #[arg(long)]
    resolution: Option<u32>,
}

impl SeriesArgs {
    pub fn resolved_t_max(&self, r: &Resolved) -> Result<f64, CliError> {
        let t_max = match self.t_max {
            Some(v) => v,
            None => r.file.get::<f64>("t-max")?.unwrap_or(100.0),
        };
        if !(t_max > 0.0) {
            return Err(CliError::Config(format!(
                "t-max must be positive, got {t_max}"
            )));
        }
        Ok(t_max)
    }

    pub fn resolved_resolution(&self, r: &Resolved) -> Result<u32, CliError> {
        let resolution = match self.resolution {
            Some(v) => v,
            None => r.file.get::<u32>("resolution")?.unwrap_or(200),
        };
        if resolution < 50 {
            return Err(CliError::Config(format!(
                "resolution must be at least 50 points per period, got {resolution}"
            )));
        }
        Ok(resolution)
    }
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Swept N epsilon axis as min,max,count (linear spacing).
    #[arg(long)]
    n_eps_range: Option<RangeSpec>,
    /// Fixed evaluation time (single squeezing value per N epsilon).
    #[arg(long, conflicts_with = "t_range")]
    t: Option<f64>,
    /// Time grid as min,max,count (one squeezing value per grid cell).
    #[arg(long)]
    t_range: Option<RangeSpec>,
}

impl SweepArgs {
    pub fn resolved_n_eps_range(&self, r: &Resolved) -> Result<RangeSpec, CliError> {
        match self.n_eps_range {
            Some(v) => Ok(v),
            None => r.file.get::<RangeSpec>("n-eps-range")?.ok_or_else(|| {
                CliError::Config("sweep requires --n-eps-range min,max,count".into())
            }),
        }
    }

    pub fn resolved_t(&self, r: &Resolved) -> Result<Option<f64>, CliError> {
        let t = match self.t {
            Some(v) => Some(v),
            None => r.file.get::<f64>("t")?,
        };
        if let Some(t) = t {
            if !(t >= 0.0) {
                return Err(CliError::Config(format!("t must be non-negative, got {t}")));
            }
        }
        Ok(t)
    }

    pub fn resolved_t_range(&self, r: &Resolved) -> Result<Option<RangeSpec>, CliError> {
        match self.t_range {
            Some(v) => Ok(Some(v)),
            None if self.t.is_some() => Ok(None),
            None => r.file.get::<RangeSpec>("t-range"),
        }
    }
}

#[derive(Args)]
pub struct PhaseDiagramArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Coupling axis in units of omega as min,max,count
    /// (defaults to 0,0.55,111).
    #[arg(long)]
    g_range: Option<RangeSpec>,
    /// N epsilon axis in units of omega as min,max,count
    /// (defaults to 0.05,1.2,116).
    #[arg(long)]
    n_eps_range: Option<RangeSpec>,
}

impl PhaseDiagramArgs {
    pub fn resolved_g_range(&self, r: &Resolved) -> Result<RangeSpec, CliError> {
        Ok(match self.g_range {
            Some(v) => v,
            None => r.file.get::<RangeSpec>("g-range")?.unwrap_or(RangeSpec {
                min: 0.0,
                max: 0.55,
                count: 111,
            }),
        })
    }

    pub fn resolved_n_eps_range(&self, r: &Resolved) -> Result<RangeSpec, CliError> {
        Ok(match self.n_eps_range {
            Some(v) => v,
            None => r
                .file
                .get::<RangeSpec>("n-eps-range")?
                .unwrap_or(RangeSpec {
                    min: 0.05,
                    max: 1.2,
                    count: 116,
                }),
        })
    }
}

#[derive(Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Delta axis (omega/2 - g) as min,max,count
    /// (defaults to 1e-4,1e-2,20).
    #[arg(long)]
    delta_range: Option<RangeSpec>,
    /// Spacing of the delta axis (defaults to log).
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
    /// Verify the origin fit against an injected exact line and exit.
    #[arg(long)]
    self_test: bool,
}

impl ScalingArgs {
    pub fn resolved_delta_range(&self, r: &Resolved) -> Result<RangeSpec, CliError> {
        Ok(match self.delta_range {
            Some(v) => v,
            None => r
                .file
                .get::<RangeSpec>("delta-range")?
                .unwrap_or(RangeSpec {
                    min: 1e-4,
                    max: 1e-2,
                    count: 20,
                }),
        })
    }

    pub fn resolved_spacing(&self, r: &Resolved) -> Result<Spacing, CliError> {
        Ok(match self.spacing {
            Some(v) => v,
            None => r.file.get::<Spacing>("spacing")?.unwrap_or(Spacing::Log),
        })
    }
}

#[derive(Args)]
pub struct OracleCheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Test hook: offset added to g_beta on the closed-form side, to
    /// prove a mismatch is caught (exit 4).
    #[arg(long)]
    perturb_gbeta: Option<f64>,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("DICKE2P_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.parse().map_err(|_| {
        CliError::Config(format!(
            "DICKE2P_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    if n == 0 {
        return Err(CliError::Config(
            "DICKE2P_THREADS must be at least 1".into(),
        ));
    }
    #[cfg(feature = "parallel")]
    dicke2p::set_thread_cap(n).map_err(CliError::Config)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(args) => {
            let r = Resolved::from_args(&args.common)?;
            commands::run_solve(&r)
        }
        Command::Series(args) => {
            let r = Resolved::from_args(&args.common)?;
            commands::run_series(&r, args)
        }
        Command::Sweep(args) => {
            let r = Resolved::from_args(&args.common)?;
            commands::run_sweep(&r, args)
        }
        Command::PhaseDiagram(args) => {
            let r = Resolved::from_args(&args.common)?;
            commands::run_phase_diagram(&r, args)
        }
        Command::Scaling(args) => {
            let r = Resolved::from_args(&args.common)?;
            commands::run_scaling(&r, args)
        }
        Command::OracleCheck(args) => {
            let r = Resolved::from_args(&args.common)?;
            commands::run_oracle_check(&r, args)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {}", e.message());
        return ExitCode::from(e.exit_code());
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
