//! `amorph`: separation-number experiments from the command line.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "amorph", version, about = "Asymptotic separation numbers and amorphic complexity")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Master seed
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output file (standard output when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Print the output column documentation and exit
    #[arg(long)]
    schema: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep a (delta, nu) grid and write the sep/span table as CSV
    Sweep(PlanArgs),
    /// Fit scaling exponents from a sweep CSV or a fresh sweep
    Estimate {
        /// Sweep CSV to fit instead of running a sweep
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Exact Toeplitz quantities: periodic structure and predicted exponent
    Toeplitz {
        /// Template over {0,1,*}, e.g. 0001*1*
        #[arg(long)]
        word: String,
        /// Length of the leading zero block; the word must read 0^m 1 v
        #[arg(long)]
        m: Option<usize>,
        /// Number of skeleton levels in the density table
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Also sweep the subshift and check the upper bound
        #[arg(long)]
        sweep: bool,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Besicovitch distances, box dimension and total boundedness of a subshift
    Besicovitch {
        #[command(flatten)]
        plan: PlanArgs,
        /// Scales of the box count, e.g. 2^-1..2^-6
        #[arg(long, default_value = "2^-1..2^-6")]
        eps: String,
        #[arg(long, value_enum, default_value_t = BoxArg::Packing)]
        r#box: BoxArg,
        /// Write the distance matrix of the largest sample as CSV
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Pinched skew product: boundary lines, Lyapunov exponent, SNA test
    Pinched {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Rotation number (decimal or `golden`)
        #[arg(long, default_value = "golden")]
        omega: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 200)]
        depth: u32,
        /// Peak centres evaluated exactly
        #[arg(long, default_value_t = 64)]
        taus: usize,
        #[arg(long, default_value = "1e6")]
        lyapunov_horizon: String,
        /// Write the boundary lines as CSV
        #[arg(long)]
        lines: Option<PathBuf>,
        /// Also sweep orbits started on the approximated graph
        #[arg(long)]
        exponent: bool,
        #[arg(long, default_value_t = 3)]
        exclude_peaks: u64,
        #[arg(long, default_value_t = 0.01)]
        exclude_radius: f64,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Power and product checks of the scaling exponent
    Props {
        #[command(flatten)]
        plan: PlanArgs,
        /// Second factor of the product check
        #[arg(long)]
        with: Option<String>,
        #[arg(long, default_value_t = 2)]
        power: u32,
    },
    /// Brute-force oracle suite for the greedy estimators
    Selftest {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 15)]
        max_points: usize,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct PlanArgs {
    /// System spec, e.g. `sturmian:alpha=golden` or `product(rotation:alpha=0.3,doubling)`
    #[arg(long)]
    pub system: Option<String>,
    /// Delta grid: values, `2^-k`, or ranges `2^-a..2^-b`
    #[arg(long)]
    pub deltas: Option<String>,
    /// Nu grid, same syntax as --deltas
    #[arg(long)]
    pub nus: Option<String>,
    /// Sample sizes, comma-separated and ascending
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub horizon: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub plan: Option<PlanKind>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    SuffixMax,
    Terminal,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    Standard,
    Wandering,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxArg {
    Packing,
    Covering,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.schema {
        print!("{}", commands::SCHEMA);
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(1);
    };
    if cli.workers > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&command, cli.seed, cli.out.as_deref()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
