use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lowdin",
    version,
    about = "Löwdin symmetric orthogonalization: superposition and coherence resource computations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Significant digits for printed results.
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u8).range(1..=17), global = true)]
    pub digits: u8,

    /// Smallest accepted Gram eigenvalue.
    #[arg(long, global = true)]
    pub eps_pd: Option<f64>,

    /// Tolerance for Hermiticity, unit diagonal and normalization checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub log2: bool,

    /// Increase log verbosity (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Square roots, spectrum and Löwdin basis of a Gram matrix.
    Lowdin {
        /// Gram matrix JSON (a previous `lowdin --format json` output is accepted too).
        gram: PathBuf,
        /// Check the minimal-displacement property against N random unitaries.
        #[arg(long, value_name = "N")]
        verify_minimality: Option<usize>,
        /// Seed for --verify-minimality.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Map a nonorthogonal-basis state into the Löwdin basis.
    Forward {
        state: PathBuf,
    },
    /// Map a Löwdin-basis state back to the nonorthogonal basis.
    Backward {
        state: PathBuf,
        /// Gram matrix to use instead of the state's `overlap`.
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// Optimal single-copy conversion probability between two states.
    Transform {
        source: PathBuf,
        target: PathBuf,
    },
    /// Probability of distilling the maximal resource state.
    Distill {
        state: PathBuf,
    },
    /// Golden state over a uniform overlap.
    #[command(allow_negative_numbers = true)]
    Golden {
        d: usize,
        s: f64,
        #[arg(value_enum, default_value_t = Sign::Plus)]
        sign: Sign,
    },
    /// l1 measures and relative entropy of coherence.
    Measure {
        state: PathBuf,
    },
    /// l1 measures of x(η|c0> + |c1>) and its Löwdin image over a range of overlaps.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = -0.9)]
        s_min: f64,
        #[arg(long, default_value_t = 0.9)]
        s_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
