use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::evolve::{check_norm, total_emission_rate, Integrator, Segment, StepControl};
use super::layout::{QuantumState, RegisterLayout};
use super::operator::{local_hamiltonian, JumpChannel, PulseTransition, SparseOperator};
use super::{Result, SimError};

/// Constant-amplitude laser pulse on one ion. For sidebands `rabi` is the
/// bare Rabi frequency Ω; the coupling used is ηΩ/√N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pulse {
    pub ion: usize,
    pub transition: PulseTransition,
    pub rabi: f64,
    pub phase: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Pulse(Pulse),
    /// Instantaneous unitary on the qubit levels of one ion, row-major
    /// [u00, u01, u10, u11]. The auxiliary level is untouched.
    Instant { ion: usize, unitary: [Complex64; 4] },
    /// Free evolution.
    Wait { duration: f64 },
}

impl Step {
    pub fn duration(&self) -> f64 {
        match self {
            Step::Pulse(p) => p.duration,
            Step::Instant { .. } => 0.0,
            Step::Wait { duration } => *duration,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseProgram {
    pub layout: RegisterLayout,
    pub eta: f64,
    pub steps: Vec<Step>,
}

impl PulseProgram {
    pub fn new(layout: RegisterLayout, eta: f64) -> Self {
        PulseProgram {
            layout,
            eta,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: PulseProgram) {
        self.steps.extend(other.steps);
    }

    pub fn duration(&self) -> f64 {
        self.steps.iter().map(Step::duration).sum()
    }

    pub fn pulses(&self) -> impl Iterator<Item = &Pulse> {
        self.steps.iter().filter_map(|s| match s {
            Step::Pulse(p) => Some(p),
            _ => None,
        })
    }

    /// Sideband rotation angle summed over pulses, in units of π.
    pub fn sideband_pi_rotations(&self) -> f64 {
        let g = self.layout.coupling(self.eta);
        self.pulses()
            .filter(|p| p.transition.is_sideband())
            .map(|p| g * p.rabi * p.duration / std::f64::consts::PI)
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(SimError::InvalidParameter("eta"));
        }
        for step in &self.steps {
            match step {
                Step::Pulse(p) => {
                    self.layout.check_ion(p.ion)?;
                    if !(p.duration >= 0.0) || !(p.rabi >= 0.0) {
                        return Err(SimError::InvalidPulse(
                            "duration and rabi must be non-negative".into(),
                        ));
                    }
                    if let PulseTransition::AuxSideband { from } = p.transition {
                        if from > 1 {
                            return Err(SimError::InvalidPulse("aux branch must start at 0 or 1".into()));
                        }
                    }
                }
                Step::Instant { ion, .. } => self.layout.check_ion(*ion)?,
                Step::Wait { duration } => {
                    if !(*duration >= 0.0) {
                        return Err(SimError::InvalidPulse("negative wait".into()));
                    }
                }
            }
        }
        Ok(())
    }

    fn local_for(&self, p: &Pulse) -> nalgebra::DMatrix<Complex64> {
        let coupling = if p.transition.is_sideband() {
            self.layout.coupling(self.eta) * p.rabi
        } else {
            p.rabi
        };
        local_hamiltonian(p.transition, coupling, p.phase, self.layout.phonon_cutoff)
    }
}

/// Qubit decay channel with rate Γ₁₁ on every ion, plus optional auxiliary
/// decay channels.
pub fn decay_channels(layout: &RegisterLayout, gamma11: f64, aux_gamma: Option<f64>) -> Vec<JumpChannel> {
    let mut out: Vec<JumpChannel> = (0..layout.n_ions).map(|i| JumpChannel::qubit(i, gamma11)).collect();
    if let Some(g) = aux_gamma {
        out.extend((0..layout.n_ions).map(|i| JumpChannel::aux(i, g)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryOptions {
    pub integrator: Integrator,
    pub step_control: StepControl,
    /// Bisect each threshold crossing inside its step so the recorded jump
    /// time is where ‖ψ‖² reaches r.
    pub locate_jumps: bool,
    /// Record the qubit-level-1 population of every ion after each step.
    pub record_populations: bool,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        TrajectoryOptions {
            integrator: Integrator::LocalExact,
            step_control: StepControl::default(),
            locate_jumps: true,
            record_populations: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jump {
    pub time: f64,
    pub channel: usize,
    pub ion: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub jumps: Vec<Jump>,
    /// Normalised state at program end.
    #[serde(skip)]
    pub final_state: QuantumState,
    pub fidelity: Option<f64>,
    pub emitted_count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub populations: Vec<Vec<f64>>,
}

impl TrajectoryRecord {
    pub fn jump_times(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.time).collect()
    }
}

pub fn run_trajectory(
    program: &PulseProgram,
    channels: &[JumpChannel],
    seed: u64,
    initial: &QuantumState,
    ideal: Option<&QuantumState>,
) -> Result<TrajectoryRecord> {
    run_trajectory_with(program, channels, seed, initial, ideal, &TrajectoryOptions::default())
}

/// Threshold draw in (0, 1).
fn draw(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let r: f64 = rng.random();
        if r > 0.0 {
            return r;
        }
    }
}

fn apply_instant(layout: &RegisterLayout, psi: &mut [Complex64], ion: usize, u: &[Complex64; 4]) {
    let s = layout.stride(ion);
    for i in 0..psi.len() {
        if layout.level(i, ion) == 0 {
            let (a0, a1) = (psi[i], psi[i + s]);
            psi[i] = u[0] * a0 + u[1] * a1;
            psi[i + s] = u[2] * a0 + u[3] * a1;
        }
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

struct Engine<'a> {
    layout: RegisterLayout,
    channels: &'a [JumpChannel],
    rng: ChaCha8Rng,
    r: f64,
    psi: Vec<Complex64>,
    t: f64,
    jumps: Vec<Jump>,
    locate: bool,
}

impl Engine<'_> {
    fn run_segment(&mut self, seg: &mut Segment, duration: f64, dt_max: f64) -> Result<()> {
        if duration <= 0.0 {
            return Ok(());
        }
        let n = (duration / dt_max.min(duration)).ceil().max(1.0);
        let h = duration / n;
        let mut left = duration;
        while left > duration * 1e-12 {
            let step = h.min(left);
            let before = norm_sqr(&self.psi);
            let next = seg.advance(&self.psi, step)?;
            let after = norm_sqr(&next);
            check_norm(before, after)?;
            if after >= self.r {
                self.psi = next;
                self.t += step;
                left -= step;
                continue;
            }
            let (tau, at) = if self.locate {
                self.bisect(seg, step)?
            } else {
                (step, next)
            };
            self.t += tau;
            left -= tau;
            self.jump(at);
        }
        Ok(())
    }

    /// Smallest sub-step (to bisection precision) at which ‖ψ‖² < r.
    fn bisect(&mut self, seg: &mut Segment, step: f64) -> Result<(f64, Vec<Complex64>)> {
        let (mut lo, mut hi) = (0.0, step);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if norm_sqr(&seg.advance(&self.psi, mid)?) < self.r {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let at = seg.advance(&self.psi, hi)?;
        Ok((hi, at))
    }

    fn jump(&mut self, at: Vec<Complex64>) {
        let state = QuantumState::from_amplitudes(at);
        let rates: Vec<f64> = self.channels.iter().map(|c| c.rate(&self.layout, &state)).collect();
        let total: f64 = rates.iter().sum();
        self.r = draw(&mut self.rng);
        if total <= 0.0 {
            self.psi = state.normalized().amplitudes;
            return;
        }
        let u: f64 = self.rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = rates.len() - 1;
        for (j, rate) in rates.iter().enumerate() {
            acc += rate;
            if u < acc && *rate > 0.0 {
                chosen = j;
                break;
            }
        }
        let ch = &self.channels[chosen];
        self.psi = ch.apply(&self.layout, &state).normalized().amplitudes;
        self.jumps.push(Jump {
            time: self.t,
            channel: chosen,
            ion: ch.ion,
        });
    }
}

/// Runs one quantum-jump trajectory: a threshold r is drawn uniformly in
/// (0, 1), the state evolves without renormalisation until ‖ψ‖² < r, a
/// channel is chosen with probability ∝ ⟨ψ|c†c|ψ⟩ and applied, the state is
/// renormalised and a fresh r drawn.
pub fn run_trajectory_with(
    program: &PulseProgram,
    channels: &[JumpChannel],
    seed: u64,
    initial: &QuantumState,
    ideal: Option<&QuantumState>,
    options: &TrajectoryOptions,
) -> Result<TrajectoryRecord> {
    let layout = program.layout;
    program.validate()?;
    for ch in channels {
        ch.validate(&layout)?;
    }
    if initial.dim() != layout.dim() {
        return Err(SimError::DimensionMismatch {
            expected: layout.dim(),
            found: initial.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = draw(&mut rng);
    let mut engine = Engine {
        layout,
        channels,
        rng,
        r,
        psi: initial.normalized().amplitudes,
        t: 0.0,
        jumps: Vec::new(),
        locate: options.locate_jumps,
    };
    let emission = total_emission_rate(channels);
    let decay_dt = if emission > 0.0 {
        options.step_control.decay_limit / emission
    } else {
        f64::INFINITY
    };
    let mut populations = Vec::new();
    for step in &program.steps {
        match step {
            Step::Instant { ion, unitary } => apply_instant(&layout, &mut engine.psi, *ion, unitary),
            Step::Pulse(p) => {
                let local = program.local_for(p);
                let mut seg = match options.integrator {
                    Integrator::LocalExact => Segment::local(&layout, p.ion, &local, channels),
                    Integrator::Rk4 => Segment::rk4(
                        &layout,
                        SparseOperator::embed(&layout, p.ion, &local),
                        channels,
                        options.step_control.rk4_limit,
                    ),
                };
                let dt = decay_dt.min(seg.max_dt());
                engine.run_segment(&mut seg, p.duration, dt)?;
            }
            Step::Wait { duration } => {
                let mut seg = match options.integrator {
                    Integrator::LocalExact => Segment::diagonal(&layout, channels),
                    Integrator::Rk4 => Segment::rk4(
                        &layout,
                        SparseOperator::zero(layout.dim()),
                        channels,
                        options.step_control.rk4_limit,
                    ),
                };
                let dt = decay_dt.min(seg.max_dt());
                engine.run_segment(&mut seg, *duration, dt)?;
            }
        }
        if options.record_populations {
            let state = QuantumState::from_amplitudes(engine.psi.clone());
            populations.push(
                (0..layout.n_ions)
                    .map(|i| state.level_population(&layout, i, 1))
                    .collect(),
            );
        }
    }
    let final_state = QuantumState::from_amplitudes(engine.psi).normalized();
    let fidelity = ideal.map(|id| final_state.fidelity(id));
    let emitted_count = engine.jumps.len();
    Ok(TrajectoryRecord {
        seed,
        jumps: engine.jumps,
        final_state,
        fidelity,
        emitted_count,
        populations,
    })
}
