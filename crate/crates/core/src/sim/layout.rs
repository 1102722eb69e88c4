use num_complex::Complex64;
use serde::Serialize;

use super::{Result, SimError};

/// Internal levels per ion: the qubit levels 0 and 1 and an auxiliary level.
pub const INTERNAL_DIM: usize = 3;
pub const AUX: u8 = 2;

/// Register of ions sharing one centre-of-mass mode.
///
/// Basis index: ion 0 is the most significant digit (base 3), the phonon
/// number the least significant (base `phonon_cutoff`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    pub n_ions: usize,
    pub internal_dim: usize,
    pub phonon_cutoff: usize,
    /// Number of ions carrying the COM mode mass; the sideband coupling is
    /// η/√(com_effective_ions).
    pub com_effective_ions: usize,
}

impl RegisterLayout {
    pub fn new(n_ions: usize, phonon_cutoff: usize) -> Result<Self> {
        if n_ions == 0 || n_ions > 12 {
            return Err(SimError::InvalidLayout("n_ions must be in 1..=12".into()));
        }
        if phonon_cutoff < 2 {
            return Err(SimError::InvalidLayout("phonon_cutoff must be >= 2".into()));
        }
        Ok(RegisterLayout {
            n_ions,
            internal_dim: INTERNAL_DIM,
            phonon_cutoff,
            com_effective_ions: n_ions,
        })
    }

    pub fn with_com_effective_ions(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(SimError::InvalidLayout("com_effective_ions must be >= 1".into()));
        }
        self.com_effective_ions = n;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        INTERNAL_DIM.pow(self.n_ions as u32) * self.phonon_cutoff
    }

    /// Dimension of one ion ⊗ phonon block.
    pub fn local_dim(&self) -> usize {
        INTERNAL_DIM * self.phonon_cutoff
    }

    pub fn stride(&self, ion: usize) -> usize {
        self.phonon_cutoff * INTERNAL_DIM.pow((self.n_ions - 1 - ion) as u32)
    }

    pub fn level(&self, index: usize, ion: usize) -> u8 {
        ((index / self.stride(ion)) % INTERNAL_DIM) as u8
    }

    pub fn phonon(&self, index: usize) -> usize {
        index % self.phonon_cutoff
    }

    pub fn index(&self, levels: &[u8], phonon: usize) -> usize {
        debug_assert_eq!(levels.len(), self.n_ions);
        let mut idx = 0;
        for &l in levels {
            idx = idx * INTERNAL_DIM + l as usize;
        }
        idx * self.phonon_cutoff + phonon
    }

    /// Index of the computational basis state `bits` (ion 0 is the most
    /// significant bit) with the phonon in its ground state.
    pub fn computational_index(&self, bits: usize) -> usize {
        let levels: Vec<u8> = (0..self.n_ions)
            .map(|ion| ((bits >> (self.n_ions - 1 - ion)) & 1) as u8)
            .collect();
        self.index(&levels, 0)
    }

    /// Sideband coupling factor η/√(com_effective_ions).
    pub fn coupling(&self, eta: f64) -> f64 {
        eta / (self.com_effective_ions as f64).sqrt()
    }

    pub fn check_ion(&self, ion: usize) -> Result<()> {
        if ion >= self.n_ions {
            return Err(SimError::IndexOutOfRange { ion, n_ions: self.n_ions });
        }
        Ok(())
    }

    /// First full index of every ion ⊗ phonon block of `ion`. Local level l
    /// and phonon n sit at `base + l * stride(ion) + n`.
    pub fn block_bases(&self, ion: usize) -> Vec<usize> {
        let s = self.stride(ion);
        let inner = s / self.phonon_cutoff;
        let outer = self.dim() / (INTERNAL_DIM * s);
        let mut bases = Vec::with_capacity(outer * inner);
        for a in 0..outer {
            for m in 0..inner {
                bases.push(a * INTERNAL_DIM * s + m * self.phonon_cutoff);
            }
        }
        bases
    }

    /// Offset of local state (level, phonon) inside a block of `ion`.
    pub fn local_offset(&self, ion: usize, level: u8, phonon: usize) -> usize {
        level as usize * self.stride(ion) + phonon
    }
}

/// Unnormalised amplitude vector. Its squared norm is the probability that
/// no emission has occurred since the last renormalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    pub amplitudes: Vec<Complex64>,
}

impl QuantumState {
    pub fn basis(layout: &RegisterLayout, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        QuantumState { amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        QuantumState { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for a in &mut self.amplitudes {
                *a /= n;
            }
        }
    }

    pub fn normalized(&self) -> Self {
        let mut s = self.clone();
        s.normalize();
        s
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨ideal|ψ⟩|² with ψ normalised.
    pub fn fidelity(&self, ideal: &QuantumState) -> f64 {
        let n = self.norm_sqr() * ideal.norm_sqr();
        if n == 0.0 {
            return 0.0;
        }
        self.inner(ideal).norm_sqr() / n
    }

    /// Population of `level` on `ion`, relative to the squared norm.
    pub fn level_population(&self, layout: &RegisterLayout, ion: usize, level: u8) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| layout.level(*i, ion) == level)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            / total
    }

    /// Population outside the phonon ground state, relative to the squared norm.
    pub fn excited_phonon_population(&self, layout: &RegisterLayout) -> f64 {
        let total = self.norm_sqr();
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| layout.phonon(*i) != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            / total
    }

    /// Probability of each computational basis state (summed over phonon
    /// numbers), indexed by the bit string with ion 0 most significant.
    /// States with an ion in the auxiliary level are not counted.
    pub fn computational_distribution(&self, layout: &RegisterLayout) -> Vec<f64> {
        let total = self.norm_sqr();
        let mut out = vec![0.0; 1 << layout.n_ions];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let mut bits = 0usize;
            let mut valid = true;
            for ion in 0..layout.n_ions {
                let l = layout.level(i, ion);
                if l == AUX {
                    valid = false;
                    break;
                }
                bits = (bits << 1) | l as usize;
            }
            if valid {
                out[bits] += a.norm_sqr();
            }
        }
        if total > 0.0 {
            for p in &mut out {
                *p /= total;
            }
        }
        out
    }
}
