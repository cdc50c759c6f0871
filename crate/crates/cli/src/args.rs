use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "scargraph", version, about = "Exact diagonalization of constrained coupled graphs")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    /// key=value file; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Report failures as a JSON object on stderr
    #[arg(long, global = true)]
    pub error_json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 1)]
    pub samples: usize,

    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long, global = true, value_enum, default_value_t = SectorArg::Both)]
    pub sector: SectorArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorArg {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Zeckendorf,
    Gray,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// PXP adjacency matrix and its spectrum
    #[command(args_override_self = true)]
    Pxp(PxpArgs),
    /// Draw H_L graphs from the ensemble
    #[command(args_override_self = true)]
    Sample(EnsembleArgs),
    /// Eigenvalues of coupled samples
    #[command(args_override_self = true)]
    Spectrum(EnsembleArgs),
    /// Entanglement of every eigenstate
    #[command(args_override_self = true)]
    EntScan(EntScanArgs),
    /// Certificates, built scars and the census
    #[command(args_override_self = true)]
    ScarScan(EnsembleArgs),
    /// Spacing-ratio statistics
    #[command(args_override_self = true)]
    LevelStats(LevelArgs),
    /// Mean maximum overlap with product states
    #[command(args_override_self = true)]
    OverlapScan(OverlapArgs),
    /// Frequency of triangle and diamond motifs
    #[command(args_override_self = true)]
    SubgraphProb(SubgraphArgs),
    /// Dimer-ladder entanglement, closed form against numerics
    #[command(args_override_self = true)]
    RkCheck(RkArgs),
    /// Schmidt structure of the ±√2 states of the PXP chain
    #[command(args_override_self = true)]
    Sqrt2Check(Sqrt2Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pxp(_) => "pxp",
            Command::Sample(_) => "sample",
            Command::Spectrum(_) => "spectrum",
            Command::EntScan(_) => "ent-scan",
            Command::ScarScan(_) => "scar-scan",
            Command::LevelStats(_) => "level-stats",
            Command::OverlapScan(_) => "overlap-scan",
            Command::SubgraphProb(_) => "subgraph-prob",
            Command::RkCheck(_) => "rk-check",
            Command::Sqrt2Check(_) => "sqrt2-check",
        }
    }

    pub fn params(&self) -> serde_json::Value {
        let v = match self {
            Command::Pxp(a) => serde_json::to_value(a),
            Command::Sample(a) | Command::Spectrum(a) | Command::ScarScan(a) => serde_json::to_value(a),
            Command::EntScan(a) => serde_json::to_value(a),
            Command::LevelStats(a) => serde_json::to_value(a),
            Command::OverlapScan(a) => serde_json::to_value(a),
            Command::SubgraphProb(a) => serde_json::to_value(a),
            Command::RkCheck(a) => serde_json::to_value(a),
            Command::Sqrt2Check(a) => serde_json::to_value(a),
        };
        v.expect("arguments serialize")
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PxpArgs {
    /// Chain length
    #[arg(long = "L")]
    pub l: usize,

    #[arg(long, value_enum, default_value_t = Basis::Zeckendorf)]
    pub basis: Basis,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EnsembleArgs {
    #[arg(long = "D", default_value_t = 20)]
    #[serde(rename = "D")]
    pub d: usize,

    #[arg(long = "Dprime", default_value_t = 14)]
    #[serde(rename = "Dprime")]
    pub d_prime: usize,

    #[arg(long, default_value_t = 0.4)]
    pub p: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EntScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,

    /// λ₁² threshold for rank-one flags
    #[arg(long, default_value_t = 0.8)]
    pub threshold: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LevelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,

    #[arg(long, default_value_t = 25)]
    pub bins: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OverlapArgs {
    #[arg(long = "D", default_value_t = 20)]
    #[serde(rename = "D")]
    pub d: usize,

    #[arg(long = "Dprime", value_delimiter = ',', default_value = "20,18,16,14,12,10")]
    #[serde(rename = "Dprime")]
    pub d_prime: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_value = "0.4")]
    pub p: Vec<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SubgraphArgs {
    #[arg(long = "D", default_value_t = 20)]
    #[serde(rename = "D")]
    pub d: usize,

    #[arg(
        long = "p-grid",
        value_delimiter = ',',
        default_value = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95,1"
    )]
    pub p_grid: Vec<f64>,

    /// Sample the random edges alone, without the path backbone
    #[arg(long)]
    pub no_backbone: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RkArgs {
    #[arg(long = "min-L", default_value_t = 4)]
    pub min_l: usize,

    #[arg(long = "max-L", default_value_t = 16)]
    pub max_l: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Sqrt2Args {
    /// Total chain lengths 2L
    #[arg(long, value_delimiter = ',', default_value = "8,12")]
    pub sites: Vec<usize>,
}
