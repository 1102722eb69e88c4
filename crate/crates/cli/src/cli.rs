use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "iontrap", version, about = "Emission bounds and quantum-jump simulation for ion-trap registers")]
pub struct Cli {
    /// JSON file with default values for any flag (flags take precedence).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Ion database file; the bundled database is used when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub db: Option<PathBuf>,

    /// Skip unknown keys in the database instead of rejecting them.
    #[arg(long, global = true)]
    pub lenient: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the ion database.
    Ions {
        #[command(subcommand)]
        action: IonsAction,
    },
    /// Evaluate the largest factorable bit size for one scenario.
    Bound(BoundArgs),
    /// Reproduce one of the published tables.
    Tables(TablesArgs),
    /// Run a trajectory experiment.
    Simulate {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Debug, Subcommand)]
pub enum IonsAction {
    /// One line per ion.
    List,
    /// Full record of one ion as JSON.
    Show { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Metastable,
    Raman,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BetaArg {
    Computed,
    UnitProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LeakArg {
    GroundPartial,
    HalfGroundPartial,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QecArgs {
    /// Qubit overhead factor.
    #[arg(long)]
    pub q: Option<f64>,
    /// Operation overhead factor.
    #[arg(long)]
    pub c: Option<f64>,
    /// Code parameter; corrects k − 1 errors.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub ion: Option<String>,
    #[arg(long, value_enum)]
    pub encoding: Option<EncodingArg>,
    /// Override the transition case implied by the qubit multipole.
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Elementary steps per L³.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "p-em-1")]
    pub p_em_1: Option<f64>,
    #[arg(long = "p-em-2")]
    pub p_em_2: Option<f64>,
    #[arg(long = "p-em-3")]
    pub p_em_3: Option<f64>,
    #[arg(long = "p-fail")]
    pub p_fail: Option<f64>,
    #[arg(long = "p-out")]
    pub p_out: Option<f64>,
    /// Enable error correction (implied by any of --q, --c, --k).
    #[arg(long)]
    pub qec: bool,
    #[command(flatten)]
    pub overheads: QecArgs,
    #[arg(long, value_enum)]
    pub raman_beta: Option<BetaArg>,
    #[arg(long, value_enum)]
    pub leak_branch: Option<LeakArg>,
    /// Raman detuning from level 2 [rad/s].
    #[arg(long)]
    pub delta2: Option<f64>,
    /// Raman detuning from level 3 [rad/s].
    #[arg(long)]
    pub delta3: Option<f64>,
    /// Qubit Rabi frequency [rad/s]: Ω₀₁ (metastable) or Ω₀₂ (Raman).
    #[arg(long)]
    pub rabi: Option<f64>,
    /// Rabi frequency on the 0–3 transition [rad/s], for the regime check.
    #[arg(long)]
    pub rabi03: Option<f64>,
    /// Two-level Raman estimate from --delta2 and --gamma22 only.
    #[arg(long)]
    pub naive_raman: bool,
    /// Decay constant of level 2 [1/s], for --naive-raman.
    #[arg(long)]
    pub gamma22: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    #[arg(value_parser = ["T1", "T2", "T3", "T4", "t1", "t2", "t3", "t4"])]
    pub table: String,
    #[command(flatten)]
    pub overheads: QecArgs,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// β handling for the uncorrected Raman table.
    #[arg(long, value_enum)]
    pub raman_beta: Option<BetaArg>,
    /// β handling for the error-corrected Raman table.
    #[arg(long, value_enum)]
    pub qec_raman_beta: Option<BetaArg>,
    #[arg(long, value_enum)]
    pub leak_branch: Option<LeakArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Discrete Fourier transform on a small register.
    Dft(DftArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DftArgs {
    /// `auto[:T/τ]`, `tracked[:T/τ]` or a fixed Γ₁₁ [1/s].
    #[arg(long)]
    pub gamma: Option<String>,
    /// Number of trajectories.
    #[arg(long)]
    pub traj: Option<usize>,
    /// Seed of trajectory 0; trajectory i uses seed + i.
    #[arg(long, env = "IONTRAP_SEED")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub ions: Option<usize>,
    /// Phonon number cutoff.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Decay constant of the auxiliary level [1/s].
    #[arg(long)]
    pub aux_gamma: Option<f64>,
    /// Sideband Rabi frequency Ω [rad/s].
    #[arg(long)]
    pub rabi: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Drive single-qubit gates with carrier pulses.
    #[arg(long)]
    pub pulsed: bool,
    /// Run trajectories on one thread.
    #[arg(long)]
    pub sequential: bool,
}
