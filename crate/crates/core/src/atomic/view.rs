use serde::Serialize;

use super::{AtomicDataError, IonSpec, Multipole, Result};

/// Which multipole drives the qubit, deciding whether the dipole-coupled
/// extraneous level sees the carrier (case a) or a sideband (case b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TransitionCase {
    AQuadrupole,
    BOctupole,
}

impl TransitionCase {
    pub fn from_multipole(m: Multipole) -> Option<Self> {
        match m {
            Multipole::E2 => Some(TransitionCase::AQuadrupole),
            Multipole::E3 => Some(TransitionCase::BOctupole),
            Multipole::E1 => None,
        }
    }
}

fn missing(ion: &IonSpec, what: &str) -> AtomicDataError {
    AtomicDataError::MissingField(format!("{}: {what}", ion.name))
}

/// Quantities for a qubit on the metastable 0↔1 transition with level 2 as
/// the extraneous dipole level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetastableView {
    pub case: Option<TransitionCase>,
    pub omega01: f64,
    pub omega02: f64,
    pub omega21: f64,
    /// Γ₁₁ of the qubit level.
    pub gamma11: f64,
    pub gamma22_00: f64,
    pub gamma22_11: f64,
    /// Sum of the tabulated partials of level 2.
    pub gamma22: f64,
    /// Level 2 → ground constant used by the error-corrected estimates.
    pub qec_gamma22_00: f64,
    pub gamma_out: f64,
}

impl MetastableView {
    pub fn from_ion(ion: &IonSpec) -> Result<Self> {
        let omega01 = ion.transition(0, 1)?.omega;
        let omega02 = ion.transition(0, 2)?.omega;
        let omega21 = ion
            .transition(1, 2)
            .map(|t| t.omega)
            .unwrap_or(omega02 - omega01);
        let gamma22_00 = ion
            .partial_rate(2, 0)
            .ok_or_else(|| missing(ion, "gamma 2->0"))?;
        let gamma22_11 = ion.partial_rate(2, 1).unwrap_or(0.0);
        Ok(MetastableView {
            case: ion.qubit_multipole().and_then(TransitionCase::from_multipole),
            omega01,
            omega02,
            omega21,
            gamma11: ion.partial_rate(1, 0).unwrap_or(0.0),
            gamma22_00,
            gamma22_11,
            gamma22: gamma22_00 + gamma22_11,
            qec_gamma22_00: ion.qec_gamma_upper_to_ground.unwrap_or(gamma22_00),
            gamma_out: ion.gamma_out,
        })
    }

    /// Δ₂₀ = ω₀₂ − ω₀₁, the detuning of the qubit laser from 0↔2.
    pub fn delta20(&self) -> f64 {
        self.omega02 - self.omega01
    }

    /// Δ₂₁ = |2ω₀₁ − ω₀₂|, the detuning of the qubit laser from 1↔2.
    pub fn delta21(&self) -> f64 {
        (2.0 * self.omega01 - self.omega02).abs()
    }
}

/// The same ion seen as a Raman qubit. Levels are renumbered: the metastable
/// level becomes the far-detuned level 2 and the dipole level becomes level 3.
/// Zeeman splittings are neglected, so ω₀₂ here is the metastable ω₀₁ and
/// ω₁₃ ≈ ω₀₃ is the metastable ω₀₂.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamanView {
    pub case: Option<TransitionCase>,
    pub omega02: f64,
    pub omega13: f64,
    pub omega03: f64,
    /// Δ₃ = ω₀₃ − ω₀₂: detuning of the Raman lasers from level 3.
    pub delta3: f64,
    /// Total constant of level 2 (the metastable level).
    pub gamma22: f64,
    pub gamma22_00: f64,
    /// Total constant of level 3 as tabulated for Raman qubits.
    pub gamma33: f64,
    /// Level 3 → ground partial from the transition records.
    pub gamma33_00: f64,
    /// Level 3 → ground constant used by the error-corrected estimates.
    pub qec_gamma33_00: f64,
    pub gamma_out: f64,
}

impl RamanView {
    pub fn from_ion(ion: &IonSpec) -> Result<Self> {
        let m = MetastableView::from_ion(ion)?;
        Ok(RamanView {
            case: m.case,
            omega02: m.omega01,
            omega13: m.omega02,
            omega03: m.omega02,
            delta3: m.omega02 - m.omega01,
            gamma22: ion.total_rate(1).unwrap_or(m.gamma11),
            gamma22_00: m.gamma11,
            gamma33: ion.raman_gamma_upper_total.unwrap_or(m.gamma22),
            gamma33_00: m.gamma22_00,
            qec_gamma33_00: m.qec_gamma22_00,
            gamma_out: m.gamma_out,
        })
    }

    /// β = Γ₃₃Γ₂₂→₀₀ / (Γ₂₂Γ₃₃→₀₀).
    pub fn beta(&self) -> f64 {
        let level2 = if self.gamma22 > 0.0 {
            self.gamma22_00 / self.gamma22
        } else {
            1.0
        };
        self.gamma33 / self.gamma33_00 * level2
    }
}
