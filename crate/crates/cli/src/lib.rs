//! Command-line front end for `fermisep`.
//!
//! Exit codes: 0 ok, 1 a check failed, 2 usage or malformed input,
//! 3 I/O, 4 numeric failure.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod record;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fermisep",
    version,
    about = "Separability of pure N-fermion states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze a state file: purity, entropy, E_L, E_VN and verdicts.
    Analyze(AnalyzeArgs),
    /// Generate seeded random states (or Slater determinants) as state files.
    Random(RandomArgs),
    /// Cross-check the analysis against the dense-tensor oracle on random instances.
    Verify(VerifyArgs),
    /// Compare the randomized projection test with the purity verdict.
    Esbl(EsblArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = fermisep::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Emit the JSON report (shorthand for --format json).
    #[arg(long, conflicts_with_all = ["csv", "format"])]
    pub json: bool,
    /// Emit a CSV header and row (shorthand for --format csv).
    #[arg(long, conflicts_with = "format")]
    pub csv: bool,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Show entropies in bits in text output.
    #[arg(long)]
    pub bits: bool,
}

impl AnalyzeArgs {
    pub fn output_format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            self.format.unwrap_or(OutputFormat::Text)
        }
    }
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    /// State `i` of the batch uses seed `seed + i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generate Slater determinants instead of generic states.
    #[arg(long)]
    pub slater: bool,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Output directory; files are named state_0000.json, state_0001.json, …
    /// Without it a single state is written to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    pub d_max: usize,
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    /// Random states and Slater determinants per (N, D) cell, each.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupt one amplitude on the analysis path (exercises the failure exit).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct EsblArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = fermisep::DEFAULT_ESBL_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = fermisep::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long)]
    pub json: bool,
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<fermisep::Error> for CliError {
    fn from(e: fermisep::Error) -> Self {
        use fermisep::Error::*;
        let code = match e {
            NotUnitary(_) | NotHermitian(_) | NotDensityMatrix(_) | DegenerateOrbitals(_) => {
                EXIT_NUMERIC
            }
            _ => EXIT_USAGE,
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(EXIT_IO, e.to_string())
    }
}

/// Runs one command, writing its report to `out`. Returns the exit code
/// for completed runs (0 or 1).
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze(args) => commands::analyze(&args, out),
        Command::Random(args) => commands::random(&args, out),
        Command::Verify(args) => commands::verify(&args, out),
        Command::Esbl(args) => commands::esbl(&args, out),
    }
}
