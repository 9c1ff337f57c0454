use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "dlab",
    version,
    about = "Numerical experiments with general Dirichlet series"
)]
pub struct Cli {
    /// JSON object of parameters for the chosen subcommand; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report path.
    #[arg(long, global = true, default_value = "report.json")]
    pub out: PathBuf,
    /// Optional CSV table.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Master seed; the DLAB_SEED environment variable overrides it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frequency conditions and basis decompositions.
    #[command(subcommand)]
    Freq(FreqCmd),
    /// Dirichlet polynomial experiments.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Norms and means on torus models.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Perron integrals and decay bounds.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Maximal operators.
    #[command(subcommand)]
    Maximal(MaximalCmd),
    /// Vertical-limit simulation.
    #[command(subcommand)]
    Helson(HelsonCmd),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Freq(FreqCmd::Check(_)) => "freq check",
            Command::Freq(FreqCmd::Basis(_)) => "freq basis",
            Command::Series(SeriesCmd::Abscissa(_)) => "series abscissa",
            Command::Series(SeriesCmd::Abschnitt(_)) => "series abschnitt",
            Command::Group(GroupCmd::Norm(_)) => "group norm",
            Command::Group(GroupCmd::Besicovitch(_)) => "group besicovitch",
            Command::Kernel(KernelCmd::Perron(_)) => "kernel perron",
            Command::Kernel(KernelCmd::Bounds(_)) => "kernel bounds",
            Command::Maximal(MaximalCmd::Carleson(_)) => "maximal carleson",
            Command::Maximal(MaximalCmd::Smax(_)) => "maximal smax",
            Command::Maximal(MaximalCmd::Ratio(_)) => "maximal ratio",
            Command::Helson(HelsonCmd::Simulate(_)) => "helson simulate",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum FreqCmd {
    Check(FreqCheck),
    Basis(FreqBasis),
}

#[derive(Subcommand, Debug)]
pub enum SeriesCmd {
    Abscissa(SeriesAbscissa),
    Abschnitt(SeriesAbschnitt),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    Norm(GroupNorm),
    Besicovitch(GroupBesicovitch),
}

#[derive(Subcommand, Debug)]
pub enum KernelCmd {
    Perron(KernelPerron),
    Bounds(KernelBounds),
}

#[derive(Subcommand, Debug)]
pub enum MaximalCmd {
    Carleson(MaximalCarleson),
    Smax(MaximalSmax),
    Ratio(MaximalRatio),
}

#[derive(Subcommand, Debug)]
pub enum HelsonCmd {
    Simulate(HelsonSimulate),
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FreqCheck {
    /// Frequency rule, e.g. `log(n)`, `n`, `sqrt(log(n))`, `log(log(n))`, `file:<path>`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    /// `bc`, `lc` or `l`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Assert the verdict: `holds`, `fails` or `inconclusive`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FreqBasis {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Relation tolerance for numeric detection.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Symbolic mode: `name=value`, repeatable.
    #[arg(long = "generator")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    /// Symbolic mode: linear combination of generators, repeatable.
    #[arg(long = "value")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesAbscissa {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    /// Coefficient rule: `n^-a`, `random-gaussian(scale)` or `file:<path>`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Haar samples of the torus model (0 disables).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus_samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Treat the nonzero frequencies as linearly independent instead of
    /// searching for integer relations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_independent: Option<bool>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesAbschnitt {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    /// Polynomial JSON file; replaces `--freq`/`--coeff`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Basis cutoff.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Treat the nonzero frequencies as linearly independent instead of
    /// searching for integer relations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_independent: Option<bool>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupNorm {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Exponent, or `inf`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    /// `haar` or `flow`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Treat the nonzero frequencies as linearly independent instead of
    /// searching for integer relations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_independent: Option<bool>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupBesicovitch {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Half-length of the averaging window.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Comma-separated angles of ω; default is the identity.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Treat the nonzero frequencies as linearly independent instead of
    /// searching for integer relations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_independent: Option<bool>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelPerron {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Comma-separated frequencies.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// Comma-separated real coefficients (default all 1).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<String>,
    /// Line-integral mode: compare the Perron line integral at `y` with `y^k`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelBounds {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Comma-separated `y` values; default `±5u, ±8u, ±16u`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    /// Largest window of the outer integral; 0 skips it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaximalCarleson {
    /// Comma-separated real direction.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    /// Polynomial JSON file (`{"dim": .., "terms": [[[α..], [re, im]], ..]}`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<PathBuf>,
    /// Random polynomial: number of terms.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    /// Random polynomial: exponent range `[-degree, degree]`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_den: Option<i64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaximalSmax {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// `smax`, `tmax` (weights `k_N = e^{-uλ_N}`) or `hl`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    /// Exponent `p`, or `weak` for the weak-L1 quasinorm.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centres: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Treat the nonzero frequencies as linearly independent instead of
    /// searching for integer relations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_independent: Option<bool>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaximalRatio {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    /// Length of `D`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Partial sum index `N`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<usize>,
    /// Exponent `k ∈ (0, 1]`; default `1/λ_N`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    /// `flow` or `haar`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Treat the nonzero frequencies as linearly independent instead of
    /// searching for integer relations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_independent: Option<bool>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HelsonSimulate {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chars: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
}
