//! Gate compiler.
//!
//! Two-qubit gates follow the Cirac-Zoller construction through the COM
//! mode. For ControlledPhase(c, t, θ):
//!
//! 1. red-sideband π on c at phase 0: |1_c,0⟩ → −i|0_c,1⟩
//! 2. aux-sideband π on t from level 1 at phase 0
//! 3. aux-sideband π on t from level 1 at phase θ − π; steps 2 and 3 give
//!    |1_t,1⟩ the factor e^{iθ}
//! 4. red-sideband π on c at phase π, returning the phonon
//!
//! CZ is θ = π and CNOT wraps CZ in Hadamards on the target: four sideband
//! π-rotations. Toffoli maps a onto the phonon, moves b = 0 out of the way
//! through its auxiliary level from 0, applies the 2π on t and undoes both:
//! six sideband π-rotations.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::layout::RegisterLayout;
use super::operator::PulseTransition;
use super::trajectory::{Pulse, PulseProgram, Step};
use super::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Toffoli { a: usize, b: usize, target: usize },
    Hadamard { target: usize },
    PhaseShift { target: usize, theta: f64 },
    ControlledPhase { control: usize, target: usize, theta: f64 },
}

impl Gate {
    pub fn ions(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } | Gate::ControlledPhase { control, target, .. } => {
                vec![control, target]
            }
            Gate::Toffoli { a, b, target } => vec![a, b, target],
            Gate::Hadamard { target } | Gate::PhaseShift { target, .. } => vec![target],
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let ions = self.ions();
        for (i, &a) in ions.iter().enumerate() {
            if a >= n {
                return Err(SimError::InvalidGateOperands(format!(
                    "ion {a} out of range for {n} ions"
                )));
            }
            if ions[..i].contains(&a) {
                return Err(SimError::InvalidGateOperands(format!("ion {a} used twice")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingleQubitMode {
    /// Zero-duration ideal unitaries.
    #[default]
    Instantaneous,
    /// Carrier pulses.
    Pulsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    /// Bare Rabi frequency of the sideband beams, rad/s.
    pub rabi: f64,
    /// Carrier Rabi frequency, rad/s.
    pub carrier_rabi: f64,
    pub eta: f64,
    pub single_qubit: SingleQubitMode,
}

impl Default for PulseParams {
    fn default() -> Self {
        PulseParams {
            rabi: 2.0 * PI * 1.0e5,
            carrier_rabi: 2.0 * PI * 1.0e5,
            eta: 0.1,
            single_qubit: SingleQubitMode::Instantaneous,
        }
    }
}

impl PulseParams {
    fn validate(&self) -> Result<()> {
        if !(self.rabi > 0.0) || !self.rabi.is_finite() {
            return Err(SimError::InvalidParameter("rabi"));
        }
        if !(self.carrier_rabi > 0.0) || !self.carrier_rabi.is_finite() {
            return Err(SimError::InvalidParameter("carrier_rabi"));
        }
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(SimError::InvalidParameter("eta"));
        }
        Ok(())
    }
}

struct Builder<'a> {
    layout: &'a RegisterLayout,
    params: &'a PulseParams,
    program: PulseProgram,
}

impl Builder<'_> {
    fn sideband_pi(&mut self, ion: usize, transition: PulseTransition, phase: f64) {
        let g = self.layout.coupling(self.params.eta) * self.params.rabi;
        self.program.push(Step::Pulse(Pulse {
            ion,
            transition,
            rabi: self.params.rabi,
            phase,
            duration: PI / g,
        }));
    }

    fn red_pi(&mut self, ion: usize, phase: f64) {
        self.sideband_pi(ion, PulseTransition::RedSideband, phase);
    }

    fn aux_pi(&mut self, ion: usize, from: u8, phase: f64) {
        self.sideband_pi(ion, PulseTransition::AuxSideband { from }, phase);
    }

    fn carrier(&mut self, ion: usize, angle: f64, phase: f64) {
        self.program.push(Step::Pulse(Pulse {
            ion,
            transition: PulseTransition::QubitCarrier,
            rabi: self.params.carrier_rabi,
            phase,
            duration: angle / self.params.carrier_rabi,
        }));
    }

    fn hadamard(&mut self, ion: usize) {
        match self.params.single_qubit {
            SingleQubitMode::Instantaneous => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.program.push(Step::Instant {
                    ion,
                    unitary: [h, h, h, -h],
                });
            }
            SingleQubitMode::Pulsed => {
                // Z from two π rotations, then a π/2 rotation about y.
                self.carrier(ion, PI, 0.0);
                self.carrier(ion, PI, PI / 2.0);
                self.carrier(ion, PI / 2.0, -PI / 2.0);
            }
        }
    }

    fn phase_shift(&mut self, ion: usize, theta: f64) {
        match self.params.single_qubit {
            SingleQubitMode::Instantaneous => {
                let one = Complex64::new(1.0, 0.0);
                let zero = Complex64::new(0.0, 0.0);
                self.program.push(Step::Instant {
                    ion,
                    unitary: [one, zero, zero, Complex64::from_polar(1.0, theta)],
                });
            }
            SingleQubitMode::Pulsed => {
                self.carrier(ion, PI, 0.0);
                self.carrier(ion, PI, -theta / 2.0);
            }
        }
    }

    fn controlled_phase(&mut self, control: usize, target: usize, theta: f64) {
        self.red_pi(control, 0.0);
        self.aux_pi(target, 1, 0.0);
        self.aux_pi(target, 1, theta - PI);
        self.red_pi(control, PI);
    }

    fn gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::Hadamard { target } => self.hadamard(target),
            Gate::PhaseShift { target, theta } => self.phase_shift(target, theta),
            Gate::ControlledPhase { control, target, theta } => {
                self.controlled_phase(control, target, theta)
            }
            Gate::Cnot { control, target } => {
                self.hadamard(target);
                self.controlled_phase(control, target, PI);
                self.hadamard(target);
            }
            Gate::Toffoli { a, b, target } => {
                self.hadamard(target);
                self.red_pi(a, 0.0);
                self.aux_pi(b, 0, 0.0);
                self.aux_pi(target, 1, 0.0);
                self.aux_pi(target, 1, 0.0);
                self.aux_pi(b, 0, PI);
                self.red_pi(a, PI);
                self.hadamard(target);
            }
        }
    }
}

pub fn compile_gate(gate: &Gate, layout: &RegisterLayout, params: &PulseParams) -> Result<PulseProgram> {
    compile_circuit(std::slice::from_ref(gate), layout, params)
}

pub fn compile_circuit(gates: &[Gate], layout: &RegisterLayout, params: &PulseParams) -> Result<PulseProgram> {
    params.validate()?;
    for g in gates {
        g.validate(layout.n_ions)?;
    }
    let mut b = Builder {
        layout,
        params,
        program: PulseProgram::new(*layout, params.eta),
    };
    for g in gates {
        b.gate(g);
    }
    Ok(b.program)
}

fn bit(x: usize, q: usize, n: usize) -> usize {
    (x >> (n - 1 - q)) & 1
}

/// Applies `gate` to a 2^n state vector, qubit 0 being the most
/// significant bit.
pub fn apply_ideal_gate(state: &mut [Complex64], n_qubits: usize, gate: &Gate) -> Result<()> {
    gate.validate(n_qubits)?;
    if state.len() != 1 << n_qubits {
        return Err(SimError::DimensionMismatch {
            expected: 1 << n_qubits,
            found: state.len(),
        });
    }
    let n = n_qubits;
    let mask = |q: usize| 1usize << (n - 1 - q);
    match *gate {
        Gate::Hadamard { target } => {
            let m = mask(target);
            for x in 0..state.len() {
                if x & m == 0 {
                    let (a, b) = (state[x], state[x | m]);
                    state[x] = (a + b) * FRAC_1_SQRT_2;
                    state[x | m] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        Gate::PhaseShift { target, theta } => {
            let p = Complex64::from_polar(1.0, theta);
            for (x, a) in state.iter_mut().enumerate() {
                if bit(x, target, n) == 1 {
                    *a *= p;
                }
            }
        }
        Gate::ControlledPhase { control, target, theta } => {
            let p = Complex64::from_polar(1.0, theta);
            for (x, a) in state.iter_mut().enumerate() {
                if bit(x, control, n) == 1 && bit(x, target, n) == 1 {
                    *a *= p;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let m = mask(target);
            for x in 0..state.len() {
                if bit(x, control, n) == 1 && x & m == 0 {
                    state.swap(x, x | m);
                }
            }
        }
        Gate::Toffoli { a, b, target } => {
            let m = mask(target);
            for x in 0..state.len() {
                if bit(x, a, n) == 1 && bit(x, b, n) == 1 && x & m == 0 {
                    state.swap(x, x | m);
                }
            }
        }
    }
    Ok(())
}

/// Dense 2^n × 2^n matrix of `gate`.
pub fn ideal_unitary(gate: &Gate, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    let d = 1usize << n_qubits;
    let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for col in 0..d {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[col] = Complex64::new(1.0, 0.0);
        apply_ideal_gate(&mut v, n_qubits, gate)?;
        for (row, a) in v.into_iter().enumerate() {
            m[(row, col)] = a;
        }
    }
    Ok(m)
}
