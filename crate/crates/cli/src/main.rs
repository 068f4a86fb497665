//! `topo`: command-line access to the fintopo engine.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fintopo::collection::DEFAULT_ENUMERATION_BOUND;

#[derive(Parser)]
#[command(name = "topo", version, about = "Compact families and hyperspace topologies on finite spaces")]
pub struct Cli {
    /// Read the input document from this file instead of stdin.
    #[arg(short, long, global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Write the output to this file instead of stdout.
    #[arg(short, long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Emit JSON on a single line.
    #[arg(long, global = true)]
    pub compact: bool,
    /// Largest open lattice for which κ is enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BOUND)]
    pub bound: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct SpaceArg {
    /// Use a built-in space (S2, D3, P3, Q4, ...) instead of reading input.
    #[arg(long, value_name = "NAME")]
    pub space: Option<String>,
}

#[derive(Args, Clone)]
pub struct GeneratorArgs {
    /// Every labeled space on 1..=N points.
    #[arg(long, value_name = "N", conflicts_with = "random")]
    pub exhaustive: Option<usize>,
    /// Deduplicate the exhaustive enumeration up to homeomorphism.
    #[arg(long, requires = "exhaustive")]
    pub iso: bool,
    /// Random spaces on N points.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random spaces.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check that a space is a topology and report its basic properties.
    Validate(SpaceArg),
    /// Run the claim battery on one or more spaces.
    Analyze {
        #[command(flatten)]
        space: SpaceArg,
        #[command(flatten)]
        generator: GeneratorArgs,
        /// Worker threads for the battery.
        #[arg(long)]
        threads: Option<usize>,
        /// Record per-claim wall time.
        #[arg(long)]
        timing: bool,
        /// Sampled subcollections when κ is too large to enumerate.
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Compute the canonical collections of a space, or the properties of a
    /// given collection.
    Collection {
        #[command(flatten)]
        space: SpaceArg,
        /// Emit only this collection (kappa, k, p, lambda, lambda_down, sigma).
        #[arg(long)]
        name: Option<String>,
    },
    /// The topology on the opens generated by a collection.
    Hyper {
        #[command(flatten)]
        space: SpaceArg,
        /// Built-in collection to use when the input is a space.
        #[arg(long, default_value = "kappa")]
        name: String,
        /// Compare with the topology of another built-in collection.
        #[arg(long, value_name = "NAME")]
        compare: Option<String>,
    },
    /// Level families and the measure collection of a point measure.
    Measure {
        #[command(subcommand)]
        action: MeasureAction,
    },
    /// Search for instances satisfying a predicate expression.
    Search {
        /// Expression over the registered predicates, e.g. `kappa != lambda`.
        #[arg(long, short = 'e', required_unless_present = "list")]
        expr: Option<String>,
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(long)]
        max_instances: Option<usize>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        max_seconds: Option<f64>,
        /// Random subcollections tried per space when κ is large.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        /// Print the registered predicates and exit.
        #[arg(long)]
        list: bool,
    },
    /// Graphviz output.
    ExportDot {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, value_enum, default_value_t = DotKind::Lattice)]
        kind: DotKind,
        /// Built-in collection for `--kind hyper` when the input is a space.
        #[arg(long, default_value = "kappa")]
        name: String,
    },
}

#[derive(Subcommand)]
pub enum MeasureAction {
    /// The level family `M_r = {U : μ(U) > r}`.
    Level {
        #[arg(long, short = 'r')]
        threshold: String,
    },
    /// Check `(M_m↓U) ∨ (M_m↓U) ⊆ M_r↓U` at the midpoint `m`.
    VerifyJoin {
        /// Comma-separated point labels of the open `U`.
        #[arg(long = "open", short = 'u', value_name = "POINTS", allow_hyphen_values = true)]
        open: String,
        #[arg(long, short = 'r')]
        threshold: String,
    },
    /// Check `(M_m₁↓U₁) ∩ (M_m₂↓U₂) ⊆ M_r`.
    VerifySplit {
        #[arg(long, value_name = "POINTS", allow_hyphen_values = true)]
        u1: String,
        #[arg(long, value_name = "POINTS", allow_hyphen_values = true)]
        u2: String,
        #[arg(long, short = 'r')]
        threshold: String,
    },
    /// The collection γ_μ of level families and its properties.
    Gamma,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DotKind {
    Lattice,
    Hyper,
    Inclusion,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("topo: {e:#}");
            ExitCode::from(2)
        }
    }
}
