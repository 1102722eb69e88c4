//! Quantum-jump simulation of a linear ion-trap register.
//!
//! Each ion has the qubit levels 0 and 1 plus an auxiliary level used by
//! the controlled-phase construction; all ions share one centre-of-mass
//! phonon mode truncated at `phonon_cutoff`.

mod dft;
mod ensemble;
mod evolve;
mod gates;
mod layout;
mod operator;
mod report;
mod trajectory;

pub use dft::{
    dft_amplitudes, dft_experiment, excitation_integral, ideal_dft_oracle, paper_function,
    qft_circuit, qft_ideal_state, ClassSummary, DftConfig, DftReport, GammaMode, JumpClass,
    FIDELITY_BINS, PAPER_SUPPORT,
};
pub use ensemble::{map_indexed, run_ensemble};
pub use evolve::{evolve_conditional, Integrator, StepControl};
pub use gates::{
    apply_ideal_gate, compile_circuit, compile_gate, ideal_unitary, Gate, PulseParams,
    SingleQubitMode,
};
pub use layout::{QuantumState, RegisterLayout, AUX, INTERNAL_DIM};
pub use operator::{
    build_carrier_hamiltonian, build_raman_hamiltonian, build_sideband_hamiltonian,
    local_hamiltonian, JumpChannel, PulseTransition, SparseOperator,
};
pub use report::{write_bins_csv, write_summary_json, write_trajectories_csv, BinRow};
pub use trajectory::{
    decay_channels, run_trajectory, run_trajectory_with, Jump, Pulse, PulseProgram, Step,
    TrajectoryOptions, TrajectoryRecord,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("ion index {ion} out of range for {n_ions} ions")]
    IndexOutOfRange { ion: usize, n_ions: usize },
    #[error("detuning must be nonzero")]
    ZeroDetuning,
    #[error("invalid gate operands: {0}")]
    InvalidGateOperands(String),
    #[error("step too large: dt * rate = {product:.3e} exceeds {limit:.1e}")]
    StepTooLarge { product: f64, limit: f64 },
    #[error("squared norm increased from {before} to {after}")]
    NormIncreased { before: f64, after: f64 },
    #[error("input function is identically zero")]
    ZeroFunction,
    #[error("input length {0} is not a power of two >= 2")]
    InvalidLength(usize),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid parameter `{0}`")]
    InvalidParameter(&'static str),
    #[error("state dimension {found} does not match layout dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
