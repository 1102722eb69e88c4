use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ensemble::run_ensemble;
use super::gates::{compile_circuit, Gate, PulseParams};
use super::layout::{QuantumState, RegisterLayout};
use super::trajectory::{
    decay_channels, run_trajectory_with, PulseProgram, Step, TrajectoryOptions, TrajectoryRecord,
};
use super::{Result, SimError};

/// Support of f(n) = δ(8, n mod 10) on 32 points.
pub const PAPER_SUPPORT: [usize; 3] = [8, 18, 28];

/// f(n) = 1 if n mod 10 = 8, else 0, for n < 2^m.
pub fn paper_function(m: usize) -> Vec<f64> {
    (0..1usize << m).map(|n| if n % 10 == 8 { 1.0 } else { 0.0 }).collect()
}

fn check_length(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(SimError::InvalidLength(n));
    }
    Ok(())
}

/// y_k = Σ_n x_n e^{2πink/N} / √N with x the normalised input, by direct
/// summation.
pub fn dft_amplitudes(f: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = f.len();
    check_length(n)?;
    let norm: f64 = f.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(SimError::ZeroFunction);
    }
    let scale = 1.0 / (norm * (n as f64).sqrt());
    Ok((0..n)
        .map(|k| {
            f.iter()
                .enumerate()
                .map(|(j, x)| x * Complex64::from_polar(1.0, 2.0 * PI * ((j * k) % n) as f64 / n as f64))
                .sum::<Complex64>()
                * scale
        })
        .collect())
}

/// Output probabilities of the discrete Fourier transform of `f`.
pub fn ideal_dft_oracle(f: &[f64]) -> Result<Vec<f64>> {
    let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(dft_amplitudes(&c)?.into_iter().map(|a| a.norm_sqr()).collect())
}

/// Standard m-qubit QFT network without the final swaps; qubit 0 is the
/// most significant bit and the output register holds k bit-reversed.
pub fn qft_circuit(m: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for j in 0..m {
        gates.push(Gate::Hadamard { target: j });
        for k in j + 1..m {
            gates.push(Gate::ControlledPhase {
                control: k,
                target: j,
                theta: PI / (1u64 << (k - j)) as f64,
            });
        }
    }
    gates
}

pub(crate) fn bit_reverse(x: usize, m: usize) -> usize {
    (0..m).fold(0, |acc, i| (acc << 1) | ((x >> i) & 1))
}

fn embed(layout: &RegisterLayout, amps: &[Complex64]) -> QuantumState {
    let mut out = vec![Complex64::new(0.0, 0.0); layout.dim()];
    for (bits, a) in amps.iter().enumerate() {
        out[layout.computational_index(bits)] = *a;
    }
    QuantumState::from_amplitudes(out)
}

fn initial_state(layout: &RegisterLayout, f: &[f64]) -> Result<QuantumState> {
    let norm: f64 = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(SimError::ZeroFunction);
    }
    let amps: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x / norm, 0.0)).collect();
    Ok(embed(layout, &amps))
}

/// Register state the ideal QFT network produces from `f`: y_k sits at the
/// bit-reversed index of k, phonon in its ground state.
pub fn qft_ideal_state(layout: &RegisterLayout, f: &[f64]) -> Result<QuantumState> {
    let m = layout.n_ions;
    if f.len() != 1 << m {
        return Err(SimError::InvalidLength(f.len()));
    }
    let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let y = dft_amplitudes(&c)?;
    let mut reg = vec![Complex64::new(0.0, 0.0); 1 << m];
    for (k, a) in y.into_iter().enumerate() {
        reg[bit_reverse(k, m)] = a;
    }
    Ok(embed(layout, &reg))
}

/// Readout distribution over k from a final register state.
fn readout(layout: &RegisterLayout, state: &QuantumState) -> Vec<f64> {
    let reg = state.computational_distribution(layout);
    let m = layout.n_ions;
    (0..reg.len()).map(|k| reg[bit_reverse(k, m)]).collect()
}

/// ∫ Σ_j P_j(level 1) dt along the Γ = 0 evolution of `program`, by the
/// trapezoid rule on `samples` sub-steps per pulse.
pub fn excitation_integral(program: &PulseProgram, initial: &QuantumState, samples: usize) -> Result<f64> {
    let layout = program.layout;
    let samples = samples.max(1);
    let mut fine = PulseProgram::new(layout, program.eta);
    for step in &program.steps {
        match step {
            Step::Pulse(p) => {
                for _ in 0..samples {
                    let mut q = *p;
                    q.duration = p.duration / samples as f64;
                    fine.push(Step::Pulse(q));
                }
            }
            Step::Wait { duration } => {
                for _ in 0..samples {
                    fine.push(Step::Wait {
                        duration: duration / samples as f64,
                    });
                }
            }
            other => fine.push(other.clone()),
        }
    }
    let opts = TrajectoryOptions {
        record_populations: true,
        ..TrajectoryOptions::default()
    };
    let rec = run_trajectory_with(&fine, &[], 0, initial, None, &opts)?;
    let start = initial.normalized();
    let mut prev: f64 = (0..layout.n_ions).map(|i| start.level_population(&layout, i, 1)).sum();
    let mut total = 0.0;
    for (step, pops) in fine.steps.iter().zip(&rec.populations) {
        let now: f64 = pops.iter().sum();
        total += 0.5 * (prev + now) * step.duration();
        prev = now;
    }
    Ok(total)
}

/// How Γ₁₁ is set for the DFT experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMode {
    Fixed(f64),
    /// Mean excitation ½ on every ion: Γ₁₁ = (T/τ_sp) / (n_ions · T).
    Auto { t_over_tau: f64 },
    /// Γ₁₁ from the excitation actually present along the Γ = 0 run, so
    /// the expected first-order emission count equals T/τ_sp.
    Tracked { t_over_tau: f64 },
}

impl Default for GammaMode {
    fn default() -> Self {
        GammaMode::Auto { t_over_tau: 1.0 }
    }
}

impl fmt::Display for GammaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaMode::Fixed(g) => write!(f, "{g}"),
            GammaMode::Auto { t_over_tau } if *t_over_tau == 1.0 => f.write_str("auto"),
            GammaMode::Auto { t_over_tau } => write!(f, "auto:{t_over_tau}"),
            GammaMode::Tracked { t_over_tau } if *t_over_tau == 1.0 => f.write_str("tracked"),
            GammaMode::Tracked { t_over_tau } => write!(f, "tracked:{t_over_tau}"),
        }
    }
}

impl FromStr for GammaMode {
    type Err = String;

    /// Accepts a non-negative rate, `auto`, `tracked`, or `auto:<T/τ>` /
    /// `tracked:<T/τ>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let (head, ratio) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let ratio = match ratio {
            Some(r) => {
                let v: f64 = r.parse().map_err(|_| format!("invalid T/tau `{r}`"))?;
                if !(v > 0.0) || !v.is_finite() {
                    return Err(format!("T/tau must be positive, got {r}"));
                }
                v
            }
            None => 1.0,
        };
        match head.to_ascii_lowercase().as_str() {
            "auto" => Ok(GammaMode::Auto { t_over_tau: ratio }),
            "tracked" => Ok(GammaMode::Tracked { t_over_tau: ratio }),
            _ => {
                let g: f64 = s.parse().map_err(|_| format!("invalid gamma `{s}`"))?;
                if !(g >= 0.0) || !g.is_finite() {
                    return Err(format!("gamma must be non-negative, got {s}"));
                }
                Ok(GammaMode::Fixed(g))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpClass {
    ZeroJump,
    OneJump,
    MultiJump,
}

impl JumpClass {
    pub fn of(count: usize) -> Self {
        match count {
            0 => JumpClass::ZeroJump,
            1 => JumpClass::OneJump,
            _ => JumpClass::MultiJump,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            JumpClass::ZeroJump => "zero-jump",
            JumpClass::OneJump => "one-jump",
            JumpClass::MultiJump => "multi-jump",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DftConfig {
    pub n_trajectories: usize,
    pub gamma: GammaMode,
    pub seed0: u64,
    pub layout: RegisterLayout,
    /// Input function over 2^n_ions points; f(n) = δ(8, n mod 10) when absent.
    pub function: Option<Vec<f64>>,
    pub params: PulseParams,
    /// Decay rate of the auxiliary level, if it is given a channel.
    pub aux_gamma: Option<f64>,
    pub options: TrajectoryOptions,
    pub parallel: bool,
}

impl Default for DftConfig {
    fn default() -> Self {
        DftConfig {
            n_trajectories: 100,
            gamma: GammaMode::default(),
            seed0: 0,
            layout: RegisterLayout::new(5, 3).expect("valid default layout"),
            function: None,
            params: PulseParams::default(),
            aux_gamma: None,
            options: TrajectoryOptions::default(),
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub class: JumpClass,
    pub count: usize,
    pub mean_fidelity: Option<f64>,
    /// Mean readout distribution over the class.
    pub distribution: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DftReport {
    pub n_trajectories: usize,
    pub seed0: u64,
    pub gamma_mode: String,
    pub gamma11: f64,
    pub program_duration: f64,
    /// n_ions · Γ₁₁ · T.
    pub t_over_tau_sp: f64,
    pub sideband_pulses: usize,
    pub mean_jumps: f64,
    pub var_jumps: f64,
    pub mean_fidelity: f64,
    /// Counts over [0, 0.05), [0.05, 0.1), ..., [0.95, 1].
    pub fidelity_histogram: Vec<usize>,
    pub ideal_distribution: Vec<f64>,
    pub classes: Vec<ClassSummary>,
    #[serde(skip)]
    pub records: Vec<TrajectoryRecord>,
    /// Readout distribution of every trajectory, by index.
    #[serde(skip)]
    pub distributions: Vec<Vec<f64>>,
}

impl DftReport {
    pub fn class(&self, class: JumpClass) -> &ClassSummary {
        self.classes
            .iter()
            .find(|c| c.class == class)
            .expect("all classes present")
    }

    /// Index of the first trajectory in `class`.
    pub fn first_of(&self, class: JumpClass) -> Option<usize> {
        self.records.iter().position(|r| JumpClass::of(r.emitted_count) == class)
    }
}

pub const FIDELITY_BINS: usize = 20;

/// Runs the DFT of the configured function (by default f(n) = δ(8, n mod 10))
/// on the register through the
/// compiled QFT pulse program, once per trajectory.
pub fn dft_experiment(config: &DftConfig) -> Result<DftReport> {
    if config.n_trajectories == 0 {
        return Err(SimError::InvalidParameter("n_trajectories"));
    }
    let layout = config.layout;
    let m = layout.n_ions;
    let f = config.function.clone().unwrap_or_else(|| paper_function(m));
    if f.len() != 1 << m {
        return Err(SimError::InvalidLength(f.len()));
    }
    let initial = initial_state(&layout, &f)?;
    let ideal = qft_ideal_state(&layout, &f)?;
    let ideal_distribution = ideal_dft_oracle(&f)?;
    let program = compile_circuit(&qft_circuit(m), &layout, &config.params)?;
    let duration = program.duration();
    let gamma11 = match config.gamma {
        GammaMode::Fixed(g) => g,
        GammaMode::Auto { t_over_tau } => t_over_tau / (m as f64 * duration),
        GammaMode::Tracked { t_over_tau } => {
            let integral = excitation_integral(&program, &initial, 32)?;
            t_over_tau / (2.0 * integral)
        }
    };
    if !(gamma11 >= 0.0) || !gamma11.is_finite() {
        return Err(SimError::InvalidParameter("gamma11"));
    }
    let channels = decay_channels(&layout, gamma11, config.aux_gamma);
    let records = run_ensemble(
        &program,
        &channels,
        config.seed0,
        config.n_trajectories,
        &initial,
        Some(&ideal),
        &config.options,
        config.parallel,
    )?;
    let distributions: Vec<Vec<f64>> = records.iter().map(|r| readout(&layout, &r.final_state)).collect();

    let n = records.len() as f64;
    let counts: Vec<f64> = records.iter().map(|r| r.emitted_count as f64).collect();
    let mean_jumps = counts.iter().sum::<f64>() / n;
    let var_jumps = if records.len() > 1 {
        counts.iter().map(|c| (c - mean_jumps).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let fidelities: Vec<f64> = records.iter().map(|r| r.fidelity.unwrap_or(0.0)).collect();
    let mean_fidelity = fidelities.iter().sum::<f64>() / n;
    let mut fidelity_histogram = vec![0usize; FIDELITY_BINS];
    for &fid in &fidelities {
        let bin = ((fid * FIDELITY_BINS as f64) as usize).min(FIDELITY_BINS - 1);
        fidelity_histogram[bin] += 1;
    }
    let classes = [JumpClass::ZeroJump, JumpClass::OneJump, JumpClass::MultiJump]
        .into_iter()
        .map(|class| {
            let members: Vec<usize> = (0..records.len())
                .filter(|&i| JumpClass::of(records[i].emitted_count) == class)
                .collect();
            let count = members.len();
            let (mean_fidelity, distribution) = if count == 0 {
                (None, None)
            } else {
                let mf = members.iter().map(|&i| fidelities[i]).sum::<f64>() / count as f64;
                let mut d = vec![0.0; ideal_distribution.len()];
                for &i in &members {
                    for (acc, p) in d.iter_mut().zip(&distributions[i]) {
                        *acc += p / count as f64;
                    }
                }
                (Some(mf), Some(d))
            };
            ClassSummary {
                class,
                count,
                mean_fidelity,
                distribution,
            }
        })
        .collect();

    Ok(DftReport {
        n_trajectories: config.n_trajectories,
        seed0: config.seed0,
        gamma_mode: config.gamma.to_string(),
        gamma11,
        program_duration: duration,
        t_over_tau_sp: m as f64 * gamma11 * duration,
        sideband_pulses: program.pulses().filter(|p| p.transition.is_sideband()).count(),
        mean_jumps,
        var_jumps,
        mean_fidelity,
        fidelity_histogram,
        ideal_distribution,
        classes,
        records,
        distributions,
    })
}
