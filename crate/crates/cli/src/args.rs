//! Command-line surface. A parsed [`RunConfig`] fully determines a run.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "sl2act", about = "Free SL2(Z) generators, SL2(Z/p) expander gaps and skew-product diagnostics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for the compute kernels (results do not depend on it).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Override the third generator c, as `a11,a12,a21,a22` with determinant 1.
    #[arg(long = "c", global = true, value_name = "ENTRIES", allow_hyphen_values = true)]
    pub c_override: Option<String>,

    /// Seed for every random draw (solver start vectors, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    /// Report format; defaults to csv for `scan` and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum GensArg {
    #[value(name = "a")]
    #[serde(rename = "a")]
    A,
    #[value(name = "ab")]
    #[serde(rename = "ab")]
    Ab,
    #[value(name = "abc")]
    #[serde(rename = "abc")]
    Abc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum ClassArg {
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "3")]
    #[serde(rename = "3")]
    Three,
    #[value(name = "all")]
    #[serde(rename = "all")]
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Args, Serialize, Deserialize)]
#[group(multiple = false)]
pub struct MethodArgs {
    /// Full dense eigendecomposition (up to 5000 vertices).
    #[arg(long)]
    pub dense: bool,
    /// Matrix-free Lanczos.
    #[arg(long = "iter")]
    pub iterative: bool,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Exhaustively check reduced words up to a length for identity evaluations.
    Freecheck {
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long = "max-len", default_value_t = 10)]
        max_len: usize,
        /// `default` for a, b, c (truncated to the rank) or a file with one
        /// matrix `a11 a12 a21 a22` per line.
        #[arg(long, default_value = "default")]
        gens: String,
    },
    /// Enumerate the subgroup of SL2(Z/p) generated by the projected generators.
    Enumerate {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value = "ab")]
        gens: GensArg,
        /// Write the move table as a little-endian binary file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Spectral gap of one Cayley graph.
    Gap {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value = "ab")]
        gens: GensArg,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 20_000)]
        max_iter: usize,
    },
    /// Spectral gaps over a range of primes, one CSV row per prime.
    Scan {
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        #[arg(long, value_enum, default_value = "all")]
        class: ClassArg,
        #[arg(long, value_enum, default_value = "ab")]
        gens: GensArg,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Orbit structure and Koopman gap of a truncated skew product.
    Simulate {
        #[arg(long, value_delimiter = ',', required = true)]
        kprimes: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = Vec::<u64>::new())]
        lprimes: Vec<u64>,
        /// `trivial`, `random:SEED` or `table:PATH` (JSON list of fiber index tuples).
        #[arg(long, default_value = "trivial")]
        cocycle: String,
        /// Operator-application budget for the Koopman gap solver.
        #[arg(long, default_value_t = 20_000)]
        steps: usize,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Largest separation of nearby pairs under iteration of T_c on <c> x L.
    Defect {
        #[arg(long, value_delimiter = ',', required = true)]
        kprimes: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = Vec::<u64>::new())]
        lprimes: Vec<u64>,
        #[arg(long, default_value = "trivial")]
        cocycle: String,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Freecheck { .. } => "freecheck",
            Command::Enumerate { .. } => "enumerate",
            Command::Gap { .. } => "gap",
            Command::Scan { .. } => "scan",
            Command::Simulate { .. } => "simulate",
            Command::Defect { .. } => "defect",
        }
    }
}

impl RunConfig {
    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Scan { .. } => Format::Csv,
            _ => Format::Json,
        })
    }
}
