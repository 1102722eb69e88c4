use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::layout::{QuantumState, RegisterLayout};
use super::operator::{decay_diagonal, JumpChannel, SparseOperator};
use super::{Result, SimError};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative slack allowed on the squared norm between steps before
/// `NormIncreased` is raised.
const NORM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Matrix exponential of the driven ion ⊗ phonon block; spectator ions
    /// decay through an exact diagonal factor.
    #[default]
    LocalExact,
    /// Fixed-step fourth-order Runge-Kutta on the full register.
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    /// Bound on dt·max(‖H‖, Σ2Γ) for Runge-Kutta steps.
    pub rk4_limit: f64,
    /// Bound on dt·Σ2Γ for exact steps.
    pub decay_limit: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rk4_limit: 1e-2,
            decay_limit: 1e-2,
        }
    }
}

/// Σ 2Γ over all channels.
pub(crate) fn total_emission_rate(channels: &[JumpChannel]) -> f64 {
    channels.iter().map(|c| 2.0 * c.gamma).sum()
}

fn rk4_rhs(h: &SparseOperator, decay: &[f64], psi: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = decay.iter().zip(psi).map(|(g, a)| -a * g).collect();
    let minus_i = Complex64::new(0.0, -1.0);
    for &(r, c, v) in &h.entries {
        out[r] += minus_i * v * psi[c];
    }
    out
}

fn axpy(y: &[Complex64], a: f64, x: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(x).map(|(y, x)| y + x * a).collect()
}

fn rk4_step(h: &SparseOperator, decay: &[f64], psi: &[Complex64], dt: f64) -> Vec<Complex64> {
    let k1 = rk4_rhs(h, decay, psi);
    let k2 = rk4_rhs(h, decay, &axpy(psi, dt / 2.0, &k1));
    let k3 = rk4_rhs(h, decay, &axpy(psi, dt / 2.0, &k2));
    let k4 = rk4_rhs(h, decay, &axpy(psi, dt, &k3));
    psi.iter()
        .enumerate()
        .map(|(i, a)| a + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
        .collect()
}

fn rk4_product(h: &SparseOperator, channels: &[JumpChannel], dt: f64) -> f64 {
    dt * h.norm_bound().max(total_emission_rate(channels))
}

/// One Runge-Kutta step of dψ/dt = −i(H − iΣc†c/2)ψ. The state is not
/// renormalised.
pub fn evolve_conditional(
    layout: &RegisterLayout,
    state: &QuantumState,
    hamiltonian: &SparseOperator,
    channels: &[JumpChannel],
    dt: f64,
) -> Result<QuantumState> {
    if state.dim() != layout.dim() || hamiltonian.dim != layout.dim() {
        return Err(SimError::DimensionMismatch {
            expected: layout.dim(),
            found: state.dim(),
        });
    }
    if !(dt > 0.0) {
        return Err(SimError::InvalidParameter("dt"));
    }
    for ch in channels {
        ch.validate(layout)?;
    }
    let limit = StepControl::default().rk4_limit;
    let product = rk4_product(hamiltonian, channels, dt);
    if product > limit {
        return Err(SimError::StepTooLarge { product, limit });
    }
    let decay = decay_diagonal(layout, channels);
    let next = QuantumState::from_amplitudes(rk4_step(hamiltonian, &decay, &state.amplitudes, dt));
    check_norm(state.norm_sqr(), next.norm_sqr())?;
    Ok(next)
}

pub(crate) fn check_norm(before: f64, after: f64) -> Result<()> {
    if after > before * (1.0 + NORM_SLACK) {
        return Err(SimError::NormIncreased { before, after });
    }
    Ok(())
}

/// Propagator for one constant-Hamiltonian program step, evaluable for any
/// sub-duration.
pub(crate) enum Segment {
    Local {
        generator: DMatrix<Complex64>,
        bases: Vec<usize>,
        offsets: Vec<usize>,
        spectator: Vec<f64>,
        cache: Option<(f64, DMatrix<Complex64>, Vec<f64>)>,
    },
    Diagonal {
        decay: Vec<f64>,
    },
    Rk4 {
        hamiltonian: SparseOperator,
        decay: Vec<f64>,
        max_dt: f64,
    },
}

impl Segment {
    /// Exact segment for a pulse on `ion` with local Hamiltonian `local`.
    pub(crate) fn local(
        layout: &RegisterLayout,
        ion: usize,
        local: &DMatrix<Complex64>,
        channels: &[JumpChannel],
    ) -> Self {
        let cutoff = layout.phonon_cutoff;
        let d = layout.local_dim();
        let decay = decay_diagonal(layout, channels);
        let mut own = [0.0; 3];
        for ch in channels.iter().filter(|c| c.ion == ion) {
            own[ch.from as usize] += ch.gamma;
        }
        let mut generator = local * Complex64::new(0.0, -1.0);
        for r in 0..d {
            generator[(r, r)] -= Complex64::new(own[r / cutoff], 0.0);
        }
        let offsets = (0..d)
            .map(|r| layout.local_offset(ion, (r / cutoff) as u8, r % cutoff))
            .collect();
        let spectator = decay
            .iter()
            .enumerate()
            .map(|(i, g)| g - own[layout.level(i, ion) as usize])
            .collect();
        Segment::Local {
            generator,
            bases: layout.block_bases(ion),
            offsets,
            spectator,
            cache: None,
        }
    }

    pub(crate) fn diagonal(layout: &RegisterLayout, channels: &[JumpChannel]) -> Self {
        Segment::Diagonal {
            decay: decay_diagonal(layout, channels),
        }
    }

    pub(crate) fn rk4(
        layout: &RegisterLayout,
        hamiltonian: SparseOperator,
        channels: &[JumpChannel],
        limit: f64,
    ) -> Self {
        let rate = hamiltonian.norm_bound().max(total_emission_rate(channels));
        let max_dt = if rate > 0.0 { limit / rate } else { f64::INFINITY };
        Segment::Rk4 {
            hamiltonian,
            decay: decay_diagonal(layout, channels),
            max_dt,
        }
    }

    /// Largest step this segment accepts, or infinity.
    pub(crate) fn max_dt(&self) -> f64 {
        match self {
            Segment::Rk4 { max_dt, .. } => *max_dt,
            _ => f64::INFINITY,
        }
    }

    pub(crate) fn advance(&mut self, psi: &[Complex64], dt: f64) -> Result<Vec<Complex64>> {
        match self {
            Segment::Local {
                generator,
                bases,
                offsets,
                spectator,
                cache,
            } => {
                let fresh = !matches!(cache, Some((t, _, _)) if *t == dt);
                if fresh {
                    let u = (&*generator * Complex64::new(dt, 0.0)).exp();
                    let s = spectator.iter().map(|g| (-g * dt).exp()).collect();
                    *cache = Some((dt, u, s));
                }
                let (_, u, s) = cache.as_ref().expect("cache filled above");
                let d = offsets.len();
                let mut out = vec![ZERO; psi.len()];
                let mut local = vec![ZERO; d];
                for &base in bases.iter() {
                    for (k, off) in offsets.iter().enumerate() {
                        local[k] = psi[base + off];
                    }
                    for (r, off) in offsets.iter().enumerate() {
                        let mut acc = ZERO;
                        for (c, v) in local.iter().enumerate() {
                            acc += u[(r, c)] * v;
                        }
                        out[base + off] = acc;
                    }
                }
                for (a, f) in out.iter_mut().zip(s.iter()) {
                    *a *= f;
                }
                Ok(out)
            }
            Segment::Diagonal { decay } => Ok(psi
                .iter()
                .zip(decay.iter())
                .map(|(a, g)| a * (-g * dt).exp())
                .collect()),
            Segment::Rk4 {
                hamiltonian,
                decay,
                max_dt,
            } => {
                if dt > *max_dt * (1.0 + 1e-12) {
                    return Err(SimError::StepTooLarge {
                        product: dt / *max_dt * StepControl::default().rk4_limit,
                        limit: StepControl::default().rk4_limit,
                    });
                }
                Ok(rk4_step(hamiltonian, decay, psi, dt))
            }
        }
    }
}
