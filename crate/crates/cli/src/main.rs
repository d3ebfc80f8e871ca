mod commands;
mod error;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

/// Exact search and verification for families of k-sets with bounded
/// matching number.
#[derive(Parser, Debug)]
#[command(name = "emc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a named family as JSON
    Construct(ConstructArgs),
    /// Left-compress a family read as JSON
    Compress(CompressArgs),
    /// Solve an instance exactly
    Solve(SolveArgs),
    /// Run a verification suite; exit 0 iff every check passes
    Verify(VerifyArgs),
    /// Evaluate the closed-form bounds exactly
    Bounds(BoundsArgs),
    /// Solve a grid of instances and write CSV
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    A,
    B,
    Star,
    Kleitman,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum, ignore_case = true)]
    kind: Kind,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    /// Matching bound (A and B)
    #[arg(long)]
    s: Option<u32>,
    /// Centre of a star, or the element a Kleitman family avoids
    #[arg(long)]
    x: Option<u32>,
    /// Also print size, matching number and degrees to stderr
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct CompressArgs {
    /// Family JSON (default: stdin)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    MaxSize,
    MinDisjointPairs,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    /// Families must have no s pairwise disjoint members
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[arg(long, value_enum, default_value = "max-size")]
    objective: ObjectiveArg,
    /// Family size (required for min-disjoint-pairs)
    #[arg(long)]
    fixed_size: Option<u64>,
    #[arg(long)]
    min_degree: Option<u64>,
    #[arg(long)]
    max_degree: Option<u64>,
    /// Search only left-compressed families
    #[arg(long)]
    left_compressed: bool,
    /// Family JSON of sets every solution must contain
    #[arg(long)]
    forced: Option<PathBuf>,
    /// Family JSON of sets no solution may contain
    #[arg(long)]
    forbidden: Option<PathBuf>,
    /// Return every optimal family
    #[arg(long)]
    enumerate_optima: bool,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Seconds
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long, env = "EMC_WORKERS", default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 8)]
    split_depth: u32,
    /// Also write the instance in LP format
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Write the result JSON here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: Suite,
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, env = "EMC_WORKERS", default_value_t = 1, global = true)]
    workers: usize,
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Value and uniqueness of the optimum at n = sk
    Kleitman {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
    },
    /// Both shift-degree inequalities on a left-compressed family
    Shiftdeg {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Left-compress the input first
        #[arg(long)]
        compress: bool,
    },
    /// Partition double count for the complement of a family on [sk]
    DoubleCount {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Exact density gap at n = sk + 1
    DropRatio {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
    },
    /// Optimum against max(|A|, |B|)
    Emc {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
    },
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    s: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Exact rational, e.g. 1/1000
    #[arg(long)]
    delta: String,
    #[arg(long = "C")]
    c: String,
    #[arg(long)]
    delta0: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Grid file
    #[arg(long)]
    grid: PathBuf,
    /// CSV destination (default: stdout)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, env = "EMC_WORKERS", default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Seconds per instance
    #[arg(long)]
    time_budget: Option<f64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Compress(a) => commands::compress(a),
        Command::Solve(a) => commands::solve(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Sweep(a) => sweep::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::ChecksFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
