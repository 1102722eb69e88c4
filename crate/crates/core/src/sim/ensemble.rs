use super::layout::QuantumState;
use super::operator::JumpChannel;
use super::trajectory::{run_trajectory_with, PulseProgram, TrajectoryOptions, TrajectoryRecord};
use super::Result;

/// Evaluates `f(0..n)` and returns results in index order. Runs on the rayon
/// pool when `parallel` is set and the `parallel` feature is enabled.
pub fn map_indexed<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

/// Runs `n` trajectories with seeds `seed0 + index`.
#[allow(clippy::too_many_arguments)]
pub fn run_ensemble(
    program: &PulseProgram,
    channels: &[JumpChannel],
    seed0: u64,
    n: usize,
    initial: &QuantumState,
    ideal: Option<&QuantumState>,
    options: &TrajectoryOptions,
    parallel: bool,
) -> Result<Vec<TrajectoryRecord>> {
    map_indexed(n, parallel, |i| {
        run_trajectory_with(
            program,
            channels,
            seed0.wrapping_add(i as u64),
            initial,
            ideal,
            options,
        )
    })
    .into_iter()
    .collect()
}
