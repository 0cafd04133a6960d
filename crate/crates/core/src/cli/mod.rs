//! Command-line front end.
//!
//! Every command renders its whole output in memory first; [`write_output`]
//! then writes it in one go, so a failed run never leaves a partial file.

mod commands;
mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::quantum::ScenarioKind;
use crate::stats::NoiseMode;
use crate::strategy::Representation;
use crate::Result;

pub use commands::execute;
pub use io::{error_json, read_point, write_output};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "p3net", version, about = "Local polytope geometry and nonclassicality tests for the P3 network")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    Svd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    /// Exact point, sampled point, full distribution and checks.
    All,
    /// The full conditional distribution only.
    Full,
    Exact,
    Sampled,
    /// The exact point after seeded Gaussian noise (see `--perturb`).
    Perturbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestMode {
    Point,
    Samples,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output path; `-` writes to stdout.
    #[arg(long, short, default_value = "-")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RepArgs {
    /// full (26-D, 64 vertices) or reduced (8-D, 16 vertices)
    #[arg(long, default_value = "full")]
    pub rep: Representation,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertex table of the local polytope.
    Vertices {
        #[command(flatten)]
        rep: RepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Visibility graph, optionally with a 3-D layout.
    Graph {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, value_enum)]
        layout: Option<Layout>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Shortest paths, generators, clusters, Hamming weights and classification.
    Analyze {
        #[command(flatten)]
        rep: RepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Simulate the key distribution scenario.
    Simulate {
        #[arg(long, default_value = "honest")]
        kind: ScenarioKind,
        /// Depolarizing noise applied to each Bell pair.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Shots per setting pair; 0 skips sampling.
        #[arg(long, default_value_t = 0)]
        shots: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Emit::All)]
        emit: Emit,
        /// Relative Gaussian noise for `--emit perturbed`.
        #[arg(long, default_value_t = 0.05)]
        perturb: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Project a reduced point onto the uncorrelated manifold.
    Project {
        #[arg(long)]
        input: PathBuf,
        /// Reference point for a normalized score.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, default_value_t = 9)]
        starts: usize,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-10)]
        grad_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decide whether an observed behaviour differs from the expected one.
    Test {
        #[arg(long)]
        expected: PathBuf,
        #[arg(long)]
        observed: PathBuf,
        #[arg(long, value_enum, default_value_t = TestMode::Point)]
        mode: TestMode,
        /// Per-component noise level defining the distance deviation.
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value = "relative")]
        noise_mode: NoiseMode,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        /// Required; recorded in the report.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the behaviour-distance and fidelity bounds for two states.
    Bound {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Vertices { out, .. }
            | Command::Graph { out, .. }
            | Command::Analyze { out, .. }
            | Command::Simulate { out, .. }
            | Command::Project { out, .. }
            | Command::Test { out, .. }
            | Command::Bound { out, .. } => out,
        }
    }
}

/// Runs a parsed command line and writes its output.
pub fn run(cli: &Cli) -> Result<()> {
    let text = execute(cli)?;
    write_output(&cli.command.output().output, text.as_bytes())
}
