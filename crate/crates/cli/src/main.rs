//! `angulon`: SCFP tables, Hamiltonian blocks, fixed-point solves and density
//! sweeps from the command line. Every output is CSV with 15 significant
//! digits.
//!
//! Exit status: 0 on success, 1 on a numerical failure, 2 on a usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "angulon", version, about = "Angulon spectra at fixed total angular momentum")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Model configuration file (`key = value` lines, physical units).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override one configuration key; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Phonon number: truncation level for `block`, closure order for
    /// `solve`, highest particle number for `scfp`.
    #[arg(long = "n", global = true, value_name = "N")]
    pub n: Option<usize>,
    /// Largest phonon angular momentum kept in a block.
    #[arg(long, global = true, value_name = "LAMBDA_MAX")]
    pub lmax: Option<u32>,
    /// Total angular momentum of the block or solve.
    #[arg(long = "L", global = true, value_name = "L")]
    pub l: Option<u32>,
    /// Progress and timing on standard error.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Oracle SCFP table for one phonon angular momentum, with the published
    /// table comparison report.
    Scfp {
        #[arg(long, value_name = "LAMBDA")]
        lambda: u32,
    },
    /// Spectra (`k,index,eigenvalue`) of truncated blocks, or one full
    /// block matrix with `--matrix`.
    Block {
        /// Wavenumbers; every grid point when absent.
        #[arg(long, value_name = "K", num_args = 1.., value_delimiter = ',')]
        k: Vec<f64>,
        /// Write the labelled matrix of a single `k` instead of spectra.
        #[arg(long)]
        matrix: bool,
    },
    /// Fixed-point energy at the configured density; coordinates go to
    /// `--out`.
    Solve {
        /// Self-energy trace (`k,E,sigma`) at the solution.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        /// Drop the two-phonon shift (N = 2 only).
        #[arg(long)]
        no_epsilon: bool,
    },
    /// Energy against logarithmic density for the N = 2, L = 0 closure.
    Sweep,
    /// Dispersion and couplings (`k,omega,U0,U1`) on the grid.
    ModelDump,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(anyhow::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<angulon::Error> for CliError {
    fn from(e: angulon::Error) -> Self {
        match e {
            angulon::Error::Config(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other.into()),
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ANGULON_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("ANGULON_THREADS must be a positive integer, got '{raw}'")))?;
    if n == 0 {
        return Err(CliError::Usage("ANGULON_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Numerical(e.into()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let g = &cli.global;
    match cli.command {
        Command::Scfp { lambda } => commands::scfp(g, lambda),
        Command::Block { k, matrix } => commands::block(g, &k, matrix),
        Command::Solve { trace, no_epsilon } => commands::solve(g, trace.as_deref(), !no_epsilon),
        Command::Sweep => commands::sweep(g),
        Command::ModelDump => commands::model_dump(g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("usage error: {msg}"),
                CliError::Numerical(err) => eprintln!("error: {err:#}"),
            }
            ExitCode::from(e.code())
        }
    }
}
