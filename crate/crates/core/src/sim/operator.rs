use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::layout::{QuantumState, RegisterLayout, AUX, INTERNAL_DIM};
use super::{Result, SimError};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Laser transition driven by a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseTransition {
    /// |0⟩ ↔ |1⟩ with no phonon change.
    QubitCarrier,
    /// |1,n⟩ ↔ |0,n+1⟩.
    RedSideband,
    /// |aux,n⟩ ↔ |from,n+1⟩.
    AuxSideband { from: u8 },
}

impl PulseTransition {
    pub fn is_sideband(self) -> bool {
        !matches!(self, PulseTransition::QubitCarrier)
    }
}

/// Hamiltonian of one ion ⊗ phonon block in the local basis
/// `level * cutoff + n`. `coupling` is the carrier Rabi frequency for the
/// carrier and the sideband Rabi frequency ηΩ/√N for sidebands.
///
/// Phase convention: H = (g/2)(e^{iφ}|lower⟩⟨upper| + h.c.), with the
/// phonon raised on the lower side for sidebands.
pub fn local_hamiltonian(
    transition: PulseTransition,
    coupling: f64,
    phase: f64,
    cutoff: usize,
) -> DMatrix<Complex64> {
    let d = INTERNAL_DIM * cutoff;
    let mut h = DMatrix::from_element(d, d, ZERO);
    let at = |level: u8, n: usize| level as usize * cutoff + n;
    let e = Complex64::from_polar(coupling / 2.0, phase);
    let mut set = |row: usize, col: usize, v: Complex64| {
        h[(row, col)] = v;
        h[(col, row)] = v.conj();
    };
    match transition {
        PulseTransition::QubitCarrier => {
            for n in 0..cutoff {
                set(at(0, n), at(1, n), e);
            }
        }
        PulseTransition::RedSideband => {
            for n in 0..cutoff - 1 {
                set(at(0, n + 1), at(1, n), e * ((n + 1) as f64).sqrt());
            }
        }
        PulseTransition::AuxSideband { from } => {
            for n in 0..cutoff - 1 {
                set(at(from, n + 1), at(AUX, n), e * ((n + 1) as f64).sqrt());
            }
        }
    }
    h
}

/// Local Raman Hamiltonian: level 2 is the intermediate level, detuned by Δ₂,
/// with a carrier drive on 0↔2 and a sideband drive on 1↔2.
fn local_raman(rabi02: f64, g12: f64, delta2: f64, cutoff: usize) -> DMatrix<Complex64> {
    let d = INTERNAL_DIM * cutoff;
    let mut h = DMatrix::from_element(d, d, ZERO);
    let at = |level: u8, n: usize| level as usize * cutoff + n;
    for n in 0..cutoff {
        h[(at(AUX, n), at(AUX, n))] = Complex64::new(-delta2, 0.0);
        let v = Complex64::new(rabi02 / 2.0, 0.0);
        h[(at(AUX, n), at(0, n))] = v;
        h[(at(0, n), at(AUX, n))] = v;
    }
    for n in 0..cutoff - 1 {
        let v = Complex64::new(g12 / 2.0 * ((n + 1) as f64).sqrt(), 0.0);
        h[(at(AUX, n), at(1, n + 1))] = v;
        h[(at(1, n + 1), at(AUX, n))] = v;
    }
    h
}

/// Sparse operator on the full register space, stored as sorted triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    pub dim: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator { dim, entries: Vec::new() }
    }

    /// Lifts a local ion ⊗ phonon matrix to the full register.
    pub fn embed(layout: &RegisterLayout, ion: usize, local: &DMatrix<Complex64>) -> Self {
        let cutoff = layout.phonon_cutoff;
        let d = layout.local_dim();
        let mut local_entries = Vec::new();
        for r in 0..d {
            for c in 0..d {
                let v = local[(r, c)];
                if v != ZERO {
                    let off_r = layout.local_offset(ion, (r / cutoff) as u8, r % cutoff);
                    let off_c = layout.local_offset(ion, (c / cutoff) as u8, c % cutoff);
                    local_entries.push((off_r, off_c, v));
                }
            }
        }
        let mut entries = Vec::new();
        for base in layout.block_bases(ion) {
            for &(r, c, v) in &local_entries {
                entries.push((base + r, base + c, v));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseOperator { dim: layout.dim(), entries }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
            .map(|i| self.entries[i].2)
            .unwrap_or(ZERO)
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        for &(r, c, v) in &self.entries {
            out[r] += v * psi[c];
        }
        out
    }

    /// Largest |H_ij − conj(H_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm of a
    /// Hermitian operator.
    pub fn norm_bound(&self) -> f64 {
        let mut rows = vec![0.0; self.dim];
        for &(r, _, v) in &self.entries {
            rows[r] += v.norm();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }
}

/// Red-sideband Hamiltonian for `ion` with bare Rabi frequency `rabi` and
/// Lamb-Dicke parameter `eta`: matrix element (η/√N)(Ω/2)√(n+1) between
/// |1,n⟩ and |0,n+1⟩, N = `com_effective_ions`.
pub fn build_sideband_hamiltonian(
    layout: &RegisterLayout,
    ion: usize,
    rabi: f64,
    eta: f64,
) -> Result<SparseOperator> {
    layout.check_ion(ion)?;
    if !(eta > 0.0) {
        return Err(SimError::InvalidParameter("eta"));
    }
    if !(rabi >= 0.0) {
        return Err(SimError::InvalidParameter("rabi"));
    }
    let g = layout.coupling(eta) * rabi;
    let local = local_hamiltonian(PulseTransition::RedSideband, g, 0.0, layout.phonon_cutoff);
    Ok(SparseOperator::embed(layout, ion, &local))
}

pub fn build_carrier_hamiltonian(
    layout: &RegisterLayout,
    ion: usize,
    rabi: f64,
    phase: f64,
) -> Result<SparseOperator> {
    layout.check_ion(ion)?;
    if !(rabi >= 0.0) {
        return Err(SimError::InvalidParameter("rabi"));
    }
    let local = local_hamiltonian(PulseTransition::QubitCarrier, rabi, phase, layout.phonon_cutoff);
    Ok(SparseOperator::embed(layout, ion, &local))
}

/// Raman Λ-system on `ion`: −Δ₂|2⟩⟨2| + (Ω₀₂/2)(|2⟩⟨0| + h.c.)
/// + (η/√N)(Ω₁₂/2)(|2⟩⟨1|a + h.c.), with the auxiliary level as level 2.
pub fn build_raman_hamiltonian(
    layout: &RegisterLayout,
    ion: usize,
    rabi02: f64,
    rabi12: f64,
    delta2: f64,
    eta: f64,
) -> Result<SparseOperator> {
    layout.check_ion(ion)?;
    if delta2 == 0.0 || !delta2.is_finite() {
        return Err(SimError::ZeroDetuning);
    }
    if !(eta > 0.0) {
        return Err(SimError::InvalidParameter("eta"));
    }
    let g12 = layout.coupling(eta) * rabi12;
    let local = local_raman(rabi02, g12, delta2, layout.phonon_cutoff);
    Ok(SparseOperator::embed(layout, ion, &local))
}

/// Emission channel √(2Γ)|to⟩⟨from| on one ion. Γ is the amplitude decay
/// rate; the population of `from` decays at 2Γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpChannel {
    pub ion: usize,
    pub from: u8,
    pub to: u8,
    pub gamma: f64,
}

impl JumpChannel {
    /// Qubit decay |1⟩ → |0⟩.
    pub fn qubit(ion: usize, gamma: f64) -> Self {
        JumpChannel { ion, from: 1, to: 0, gamma }
    }

    /// Auxiliary level decay to |0⟩.
    pub fn aux(ion: usize, gamma: f64) -> Self {
        JumpChannel { ion, from: AUX, to: 0, gamma }
    }

    pub fn validate(&self, layout: &RegisterLayout) -> Result<()> {
        layout.check_ion(self.ion)?;
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(SimError::InvalidParameter("gamma"));
        }
        if self.from as usize >= INTERNAL_DIM || self.to as usize >= INTERNAL_DIM || self.from == self.to {
            return Err(SimError::InvalidParameter("channel levels"));
        }
        Ok(())
    }

    /// ⟨ψ|c†c|ψ⟩ for the (possibly unnormalised) state.
    pub fn rate(&self, layout: &RegisterLayout, psi: &QuantumState) -> f64 {
        2.0 * self.gamma
            * psi
                .amplitudes
                .iter()
                .enumerate()
                .filter(|(i, _)| layout.level(*i, self.ion) == self.from)
                .map(|(_, a)| a.norm_sqr())
                .sum::<f64>()
    }

    /// c|ψ⟩.
    pub fn apply(&self, layout: &RegisterLayout, psi: &QuantumState) -> QuantumState {
        let s = layout.stride(self.ion);
        let shift = (self.from as isize - self.to as isize) * s as isize;
        let amp = (2.0 * self.gamma).sqrt();
        let mut out = vec![ZERO; psi.dim()];
        for (i, a) in psi.amplitudes.iter().enumerate() {
            if layout.level(i, self.ion) == self.from {
                out[(i as isize - shift) as usize] = a * amp;
            }
        }
        QuantumState::from_amplitudes(out)
    }
}

/// Per-basis-state amplitude decay rate Σ Γ_j over channels whose `from`
/// level is occupied, i.e. the diagonal of Σ c†c/2.
pub(crate) fn decay_diagonal(layout: &RegisterLayout, channels: &[JumpChannel]) -> Vec<f64> {
    let mut d = vec![0.0; layout.dim()];
    for ch in channels {
        if ch.gamma == 0.0 {
            continue;
        }
        for (i, v) in d.iter_mut().enumerate() {
            if layout.level(i, ch.ion) == ch.from {
                *v += ch.gamma;
            }
        }
    }
    d
}
