use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use singspec::cli::{self, CommandKind, PartialConfig};

/// Band-gap spectra and resolvent analysis of 1D Schrödinger operators
/// with distributional potentials.
#[derive(Parser)]
#[command(name = "singspec", version, about)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a potential into sigma' + tau and emit it with provenance.
    Decompose(CommonArgs),
    /// Locate spectral bands and gaps of a periodic potential.
    Bands(CommonArgs),
    /// Sample dispersion branches lambda_k(theta) over the angle grid.
    Dispersion(CommonArgs),
    /// Fiber eigenvalues for every angle on the grid.
    Eigs(CommonArgs),
    /// Mollification / uniform-resolvent-convergence experiment.
    Converge(CommonArgs),
    /// Cross-validate the delta-comb monodromy against the transfer-matrix
    /// oracle.
    KpCheck(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Potential spec file (JSON).
    #[arg(long)]
    potential: Option<PathBuf>,
    /// Output directory for CSV/JSON artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Integration tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda_max: Option<f64>,
    /// Number of theta samples on [0, 2 pi).
    #[arg(long)]
    theta_grid: Option<usize>,
    /// Galerkin mesh spacing.
    #[arg(long)]
    mesh_h: Option<f64>,
    /// Truncation half-width (interval [-L, L]).
    #[arg(long = "L")]
    half_width: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// First decomposition window (aperiodic potentials).
    #[arg(long, allow_negative_numbers = true)]
    n_min: Option<i64>,
    /// Last decomposition window (aperiodic potentials).
    #[arg(long, allow_negative_numbers = true)]
    n_max: Option<i64>,
    /// Mollifier levels for `converge`, comma separated.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    /// Resolvent evaluation point for `converge` (defaults to a certified
    /// value below the spectrum).
    #[arg(long, allow_negative_numbers = true)]
    lambda_resolvent: Option<f64>,
    /// JSON config file supplying any of the above; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn into_partial(self) -> Result<PartialConfig, singspec::Error> {
        let from_flags = PartialConfig {
            potential: self.potential,
            out: self.out,
            tol: self.tol,
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
            theta_grid: self.theta_grid,
            mesh_h: self.mesh_h,
            half_width: self.half_width,
            seed: self.seed,
            n_min: self.n_min,
            n_max: self.n_max,
            levels: self.levels,
            lambda_resolvent: self.lambda_resolvent,
        };
        let base = match self.config {
            None => PartialConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| singspec::Error::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text)?
            }
        };
        Ok(from_flags.over(base))
    }
}

fn main() -> ExitCode {
    singspec::init_thread_pool_from_env();
    let args = CliArgs::parse();
    let (kind, common) = match args.command {
        Command::Decompose(c) => (CommandKind::Decompose, c),
        Command::Bands(c) => (CommandKind::Bands, c),
        Command::Dispersion(c) => (CommandKind::Dispersion, c),
        Command::Eigs(c) => (CommandKind::Eigs, c),
        Command::Converge(c) => (CommandKind::Converge, c),
        Command::KpCheck(c) => (CommandKind::KpCheck, c),
    };
    let outcome = common
        .into_partial()
        .and_then(|partial| cli::RunConfig::resolve(kind, partial))
        .and_then(|config| cli::run(&config));
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let payload = serde_json::json!({
                "error": {
                    "kind": err.kind(),
                    "message": err.to_string(),
                }
            });
            eprintln!("{payload}");
            ExitCode::FAILURE
        }
    }
}
