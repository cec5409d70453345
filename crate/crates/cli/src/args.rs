use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bondperc", version, about = "Bond percolation experiments on planar lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the star–triangle coupling for a triangular parameter triple.
    VerifyCoupling(Flags),
    /// Draw one configuration and write its dump.
    Sample(Flags),
    /// Estimate an arm or axis event over a grid of radii.
    Estimate(Flags),
    /// Compare one-arm decay on the square and triangular lattices.
    Universality(Flags),
    /// Ratios P[A(N, 2n)] / P[A(N, n)].
    QuasiMult(Flags),
    /// Open and open* crossing rates of long rectangles.
    BoxCrossing(Flags),
    /// Sweep one configuration between mixed lattices and check transport.
    SweepDemo(Flags),
    /// Complete (p0, p1) to a self-dual triangular triple.
    SolveSelfDual(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyCoupling(_) => "verify-coupling",
            Command::Sample(_) => "sample",
            Command::Estimate(_) => "estimate",
            Command::Universality(_) => "universality",
            Command::QuasiMult(_) => "quasi-mult",
            Command::BoxCrossing(_) => "box-crossing",
            Command::SweepDemo(_) => "sweep-demo",
            Command::SolveSelfDual(_) => "solve-self-dual",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::VerifyCoupling(f)
            | Command::Sample(f)
            | Command::Estimate(f)
            | Command::Universality(f)
            | Command::QuasiMult(f)
            | Command::BoxCrossing(f)
            | Command::SweepDemo(f)
            | Command::SolveSelfDual(f) => f,
        }
    }
}

/// Flags shared by every subcommand. A `--config` file may supply any of
/// them; values given on the command line take precedence.
#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// JSON file mirroring these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// square, triangular, hexagonal or mixed.
    #[arg(long)]
    pub model: Option<String>,
    /// Comma-separated parameters; one entry may be `auto`.
    #[arg(long)]
    pub p: Option<String>,
    /// First triangle parameter (square: horizontal edges).
    #[arg(long)]
    pub p0: Option<String>,
    /// Second triangle parameter (square: vertical edges).
    #[arg(long)]
    pub p1: Option<String>,
    /// Strip half-height of the mixed lattice.
    #[arg(long)]
    pub m: Option<u32>,
    /// `axis`, `annulus`, or a JSON event specification.
    #[arg(long)]
    pub event: Option<String>,
    /// Number of arms for axis events.
    #[arg(long)]
    pub k: Option<u32>,
    /// Colour sequence such as `1010`.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Inner radius of the annulus.
    #[arg(long = "N")]
    pub inner: Option<u32>,
    /// Outer radius, or a comma-separated grid of radii.
    #[arg(long)]
    pub n: Option<String>,
    /// Monte Carlo trials per radius.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "BONDPERC_WORKERS")]
    pub workers: Option<usize>,
    /// Long-side to short-side ratio for box crossings.
    #[arg(long)]
    pub aspect: Option<f64>,
    /// up or down.
    #[arg(long)]
    pub direction: Option<String>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Omit the timestamp from data files.
    #[arg(long)]
    pub no_timestamp: bool,
    /// Exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
}
