mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holofactor::Mode;

#[derive(Parser, Debug)]
#[command(
    name = "holofactor",
    version,
    about = "Exact positivity certificates and holomorphic factorizations of Hermitian forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Input file holding an expression or form JSON (`-` reads stdin)
    #[arg(value_name = "FILE", required_unless_present = "expr")]
    file: Option<PathBuf>,
    /// Inline expression or form JSON
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
    /// Number of complex variables (default: largest index used)
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write the report JSON to this path
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Write every certificate as its own JSON file into this directory
    #[arg(long, value_name = "DIR")]
    certs: Option<PathBuf>,
    /// Print the report JSON instead of a summary
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test the coefficient matrix of ||z||^{2d}·F for positivity
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "strict")]
        mode: Mode,
        /// Multiplier exponent
        #[arg(long, default_value_t = 0)]
        d: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Find the least d for which ||z||^{2d}·F passes the test
    Stabilize {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "strict")]
        mode: Mode,
        #[arg(long = "dmax", default_value_t = 16)]
        d_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact and floating-point holomorphic factor of ||z||^{2d}·F
    Factor {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "semi")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        d: u32,
        /// Significant digits of the numeric factor
        #[arg(long, default_value_t = 12)]
        float_digits: usize,
        /// Also write the numeric factor to this path
        #[arg(long, value_name = "PATH")]
        numeric: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stabilize every member of a family file (`label: expression` per line)
    Sweep {
        #[arg(value_name = "FAMILY")]
        family: PathBuf,
        #[arg(long, default_value = "strict")]
        mode: Mode,
        #[arg(long = "dmax", default_value_t = 16)]
        d_max: u32,
        /// Write the CSV table to this path
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Run members concurrently; output order is unchanged
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ellipticity of a constant-coefficient principal symbol
    Symbol {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "dmax", default_value_t = 16)]
        d_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Re-check every certificate, factor and report in a JSON file
    Verify {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        /// Print the verification result as JSON
        #[arg(long)]
        json: bool,
    },
    /// Split F into positive and negative sums of squares
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(commands::run(cli.command))
}
