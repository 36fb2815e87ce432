//! Command-line arguments and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smallsphere_core::{Error, Rational, Result, RicciSource};
use smallsphere_oracle::{Grid, OracleConfig, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "smallsphere", version, about = "Exact small-sphere mass expansion and its numerical oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the exact ledger on the flat and round jets plus random jets.
    Verify(RunArgs),
    /// Print the mass expansion of one jet.
    Expand(RunArgs),
    /// Fit numerical geodesic-sphere data and compare with exact values.
    Oracle(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Number of random jets (default 50 for verify, 5 for oracle).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, env = "SMALLSPHERE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// flat | round:a | random:n | file:path
    #[arg(long, value_parser = parse_source)]
    pub ricci: Option<RicciSource>,
    /// Laplacian of the scalar curvature, as p/q.
    #[arg(long, value_parser = parse_rational)]
    pub delta_r: Option<Rational>,
    /// Comma-separated radii, strictly decreasing.
    #[arg(long, value_delimiter = ',', default_value = "0.16,0.08,0.04,0.02")]
    pub radii: Vec<f64>,
    /// Latitude x longitude node counts.
    #[arg(long, value_parser = parse_grid, default_value = "32x64")]
    pub grid: Grid,
    #[arg(long)]
    pub tol_sigma_dot: Option<f64>,
    #[arg(long)]
    pub tol_h_dot: Option<f64>,
    #[arg(long)]
    pub tol_h_ddot: Option<f64>,
    #[arg(long)]
    pub tol_k_dot: Option<f64>,
    #[arg(long)]
    pub tol_constant: Option<f64>,
    #[arg(long)]
    pub tol_order: Option<f64>,
    /// JSON output file; for `oracle`, a directory receiving JSON and CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

fn parse_source(s: &str) -> std::result::Result<RicciSource, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.parse().map_err(|e: smallsphere_core::error::ParseRationalError| e.to_string())
}

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid must look like 32x64, got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad grid size {t:?}: {e}"));
    Ok(Grid::new(n(a)?, n(b)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Expand,
    Oracle,
}

/// Validated settings for one command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub seed: u64,
    pub trials: usize,
    pub ricci: Option<RicciSource>,
    pub delta_r: Option<Rational>,
    pub radii: Vec<f64>,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: CommandKind, args: RunArgs) -> Result<Self> {
        let trials = args.trials.unwrap_or(match command {
            CommandKind::Oracle => 5,
            _ => 50,
        });
        if trials < 1 {
            return Err(Error::Input("--trials must be at least 1".into()));
        }
        if args.radii.is_empty() || args.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::Input("--radii must be positive numbers".into()));
        }
        if args.radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Input("--radii must be strictly decreasing".into()));
        }
        if command == CommandKind::Oracle && (args.grid.n_lat < 16 || args.grid.n_lon < 32) {
            return Err(Error::Input("--grid must be at least 16x32 for the oracle".into()));
        }
        let mut tol = Tolerances::default();
        let overrides = [
            (args.tol_sigma_dot, &mut tol.sigma_dot),
            (args.tol_h_dot, &mut tol.h_dot),
            (args.tol_h_ddot, &mut tol.h_ddot),
            (args.tol_k_dot, &mut tol.k_dot),
            (args.tol_constant, &mut tol.constant),
            (args.tol_order, &mut tol.order),
        ];
        for (value, slot) in overrides {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Input(format!("tolerance {v} must be non-negative")));
                }
                *slot = v;
            }
        }
        Ok(Self {
            command,
            seed: args.seed,
            trials,
            ricci: args.ricci,
            delta_r: args.delta_r,
            radii: args.radii,
            grid: args.grid,
            tolerances: tol,
            out: args.out,
            format: args.format,
        })
    }

    pub fn oracle_config(&self) -> OracleConfig {
        OracleConfig {
            radii: self.radii.clone(),
            grid: self.grid,
            tolerances: self.tolerances,
            ..OracleConfig::default()
        }
    }
}
