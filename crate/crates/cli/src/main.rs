use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frame_rkhs::DEFAULT_RANK_TOL;
use frame_rkhs_cli::commands::{self, DEFAULT_SAMPLES};
use frame_rkhs_cli::{CliError, Options, Outcome};

/// Finite frames, their reproducing kernels and Karhunen–Loève sampling.
#[derive(Parser)]
#[command(name = "frame-rkhs", version)]
struct Cli {
    /// Relative threshold below which Gramian eigenvalues count as zero.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Write a machine-readable JSON result to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the sampler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of Monte-Carlo samples.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Use the plain kernel Σ φₙ(s) φₙ(t) instead of the inverse-Gramian one.
    #[arg(long, global = true)]
    naive: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bounds, rank and Parseval check of a frame file.
    Analyze { path: PathBuf },
    /// Reproducing kernel matrix of a frame file.
    Kernel { path: PathBuf },
    /// Spectrum of the Hilbert matrix for several sizes.
    Hilbert {
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
        sizes: Vec<usize>,
    },
    /// Variance sandwich and Monte-Carlo check for a model file.
    GpSim { path: PathBuf },
    /// Canonical tight frame of a frame file.
    Canonical { path: PathBuf },
    /// Residuals of the finite frame and kernel identities.
    Verify { path: PathBuf },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let opts = Options {
        rank_tol: cli.rank_tol,
        out: cli.out,
        seed: cli.seed,
        samples: cli.samples,
        naive: cli.naive,
    };
    match cli.command {
        Command::Analyze { path } => commands::analyze(&path, &opts),
        Command::Kernel { path } => commands::kernel(&path, &opts),
        Command::Hilbert { sizes } => commands::hilbert(&sizes, &opts),
        Command::GpSim { path } => commands::gp_sim(&path, &opts),
        Command::Canonical { path } => commands::canonical(&path, &opts),
        Command::Verify { path } => commands::verify(&path, &opts),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
