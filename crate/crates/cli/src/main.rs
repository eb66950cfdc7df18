mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "lowesa", version, about = "Low-weight Pauli back-propagation for noisy parameterized circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ObsArgs {
    /// Pauli observable such as `+ZIX`.
    #[arg(long)]
    obs: Option<String>,
    /// File of `weight pauli` lines.
    #[arg(long)]
    obs_file: Option<PathBuf>,
}

#[derive(Args)]
struct ThetaArgs {
    /// Angles in radians, comma separated, one per parameter slot.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long)]
    theta_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Back-propagate an observable and write its coefficient file.
    Run {
        #[arg(long)]
        circuit: PathBuf,
        #[command(flatten)]
        obs: ObsArgs,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Abort once this many paths have been explored.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a coefficient file.
    Eval {
        #[arg(long)]
        series: PathBuf,
        #[command(flatten)]
        theta: ThetaArgs,
        /// Rotation-to-slot map replacing the one stored in the file.
        #[arg(long)]
        slots: Option<String>,
        /// Fixed angles as `slot=angle,...`; `--theta` then lists the remaining slots.
        #[arg(long, allow_hyphen_values = true)]
        fix: Option<String>,
    },
    /// Dense simulation of a circuit at fixed angles.
    Oracle {
        #[arg(long)]
        circuit: PathBuf,
        #[command(flatten)]
        obs: ObsArgs,
        #[command(flatten)]
        theta: ThetaArgs,
    },
    /// Truncation error by Monte-Carlo and Parseval against the error bound.
    Compare {
        #[arg(long)]
        circuit: PathBuf,
        #[command(flatten)]
        obs: ObsArgs,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Path budget for the untruncated reference series.
        #[arg(long, default_value_t = lowesa::oracle::DEFAULT_PATH_BUDGET)]
        budget: u64,
    },
    /// Error bounds and path counts.
    Bound {
        /// Read the noise summary and rotation count from a circuit.
        #[arg(long, conflicts_with_all = ["p", "pz", "m"])]
        circuit: Option<PathBuf>,
        /// `min(p_x, p_y)` over rotations.
        #[arg(long)]
        p: Option<f64>,
        /// `min(p_z)` over rotations.
        #[arg(long)]
        pz: Option<f64>,
        /// Number of rotations, for the path count.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long)]
        cutoff: usize,
        /// Chebyshev factor for the fixed-angle tail bound.
        #[arg(long, default_value_t = 2.0)]
        k: f64,
    },
    /// Timing table over generated circuits, single-threaded.
    Bench {
        #[arg(long, default_value = "fig2")]
        family: String,
        /// Qubit counts, `4,9,16` or `4:16`.
        #[arg(long)]
        qubits: String,
        #[arg(long)]
        cutoffs: String,
        #[arg(long, default_value_t = 6)]
        layers: usize,
        #[arg(long, default_value_t = 1)]
        circuits: usize,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Symmetric rotation noise `p_x = p_y = p_z`.
        #[arg(long, default_value_t = 0.0)]
        p: f64,
    },
    /// Write a generated benchmark circuit.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        layers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Symmetric rotation noise `p_x = p_y = p_z`.
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    pub const COMPARISON: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const INVARIANT: u8 = 3;
    pub const BUDGET: u8 = 4;

    pub fn input(msg: String) -> Self {
        CliError { code: Self::PARSE, msg }
    }

    pub fn comparison(msg: String) -> Self {
        CliError { code: Self::COMPARISON, msg }
    }
}

impl From<lowesa::Error> for CliError {
    fn from(e: lowesa::Error) -> Self {
        let code = match e {
            lowesa::Error::Parse { .. } => Self::PARSE,
            lowesa::Error::BudgetExceeded { .. } => Self::BUDGET,
            _ => Self::INVARIANT,
        };
        CliError { code, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
