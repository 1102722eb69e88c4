use serde::{Deserialize, Serialize};

use crate::atomic::{IonSpec, MetastableView, RamanView, TransitionCase};

use super::{BoundsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Metastable,
    Raman,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateCountModel {
    pub epsilon: f64,
    pub ions_per_bit: u32,
}

impl Default for GateCountModel {
    fn default() -> Self {
        GateCountModel {
            epsilon: 216.0,
            ions_per_bit: 5,
        }
    }
}

impl GateCountModel {
    pub fn validate(&self) -> Result<()> {
        positive("epsilon", self.epsilon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionBudgets {
    pub p_em_1: f64,
    pub p_em_2: f64,
    pub p_em_3: f64,
    pub p_fail: f64,
    pub p_out: f64,
}

impl Default for EmissionBudgets {
    fn default() -> Self {
        EmissionBudgets {
            p_em_1: 1.0,
            p_em_2: 1.0,
            p_em_3: 1.0,
            p_fail: 1.0,
            p_out: 1.0,
        }
    }
}

impl EmissionBudgets {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_em_1", self.p_em_1),
            ("p_em_2", self.p_em_2),
            ("p_em_3", self.p_em_3),
            ("p_fail", self.p_fail),
            ("p_out", self.p_out),
        ] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(BoundsError::OutOfRange(name));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QecOverheads {
    pub q: f64,
    pub c: f64,
    pub k: u32,
}

impl Default for QecOverheads {
    fn default() -> Self {
        QecOverheads { q: 5.0, c: 5.0, k: 2 }
    }
}

impl QecOverheads {
    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 1.0) || !self.q.is_finite() {
            return Err(BoundsError::OutOfRange("q"));
        }
        if !(self.c >= 1.0) || !self.c.is_finite() {
            return Err(BoundsError::OutOfRange("c"));
        }
        if self.k < 2 {
            return Err(BoundsError::OutOfRange("k"));
        }
        Ok(())
    }
}

/// How β enters the Raman estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RamanBeta {
    /// β from the decay constants, multiplied by the emission budgets.
    #[default]
    Computed,
    /// The product of β and the emission budgets is set to 1.
    UnitProduct,
}

/// Which constant stands for Γ₃₃→₁₁ in the error-corrected Raman estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeakBranch {
    /// Γ₃₃→₁₁ = Γ₃₃→₀₀: both Zeeman sublevels see the full ground partial.
    #[default]
    GroundPartial,
    /// Γ₃₃→₁₁ = Γ₃₃→₀₀ / 2: the ground partial is shared equally.
    HalfGroundPartial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundScenario {
    pub ion: IonSpec,
    pub encoding: Encoding,
    pub transition_case: TransitionCase,
    pub eta: f64,
    pub gate_model: GateCountModel,
    pub budgets: EmissionBudgets,
    pub qec: Option<QecOverheads>,
    /// Raman one-photon detuning from level 2; required only for Raman times.
    pub delta2: Option<f64>,
    /// Raman detuning from level 3; derived from the ion when absent.
    pub delta3: Option<f64>,
    pub raman_beta: RamanBeta,
    pub leak_branch: LeakBranch,
}

impl BoundScenario {
    /// A scenario with the paper's defaults: η = 1, ε = 216, unit budgets,
    /// no error correction and the transition case taken from the qubit
    /// multipole.
    pub fn new(ion: &IonSpec, encoding: Encoding) -> Result<Self> {
        let transition_case = ion
            .qubit_multipole()
            .and_then(TransitionCase::from_multipole)
            .ok_or_else(|| {
                BoundsError::MissingTransitionData(format!(
                    "{}: qubit transition must be E2 or E3",
                    ion.name
                ))
            })?;
        Ok(BoundScenario {
            ion: ion.clone(),
            encoding,
            transition_case,
            eta: 1.0,
            gate_model: GateCountModel::default(),
            budgets: EmissionBudgets::default(),
            qec: None,
            delta2: None,
            delta3: None,
            raman_beta: RamanBeta::default(),
            leak_branch: LeakBranch::default(),
        })
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_qec(mut self, qec: QecOverheads) -> Self {
        self.qec = Some(qec);
        self
    }

    pub fn with_case(mut self, case: TransitionCase) -> Self {
        self.transition_case = case;
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.gate_model.epsilon
    }

    pub fn validate(&self) -> Result<()> {
        positive("eta", self.eta)?;
        self.gate_model.validate()?;
        self.budgets.validate()?;
        if let Some(q) = &self.qec {
            q.validate()?;
        }
        if let Some(d) = self.delta2 {
            nonzero_detuning(d)?;
        }
        if let Some(d) = self.delta3 {
            nonzero_detuning(d)?;
        }
        Ok(())
    }

    pub(crate) fn require_encoding(&self, expected: Encoding) -> Result<()> {
        if self.encoding != expected {
            return Err(BoundsError::WrongEncoding {
                expected,
                found: self.encoding,
            });
        }
        Ok(())
    }

    pub(crate) fn require_qec(&self) -> Result<QecOverheads> {
        self.qec.ok_or(BoundsError::MissingQec)
    }

    pub(crate) fn require_no_qec(&self) -> Result<()> {
        if self.qec.is_some() {
            return Err(BoundsError::UnexpectedQec);
        }
        Ok(())
    }

    pub(crate) fn metastable(&self) -> Result<MetastableView> {
        self.ion
            .metastable_view()
            .map_err(|e| BoundsError::MissingTransitionData(e.to_string()))
    }

    pub(crate) fn raman(&self) -> Result<RamanView> {
        let mut view = self
            .ion
            .raman_view()
            .map_err(|e| BoundsError::MissingTransitionData(e.to_string()))?;
        if let Some(d3) = self.delta3 {
            view.delta3 = d3.abs();
        }
        Ok(view)
    }
}

pub(crate) fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(BoundsError::NonPositiveInput(name))
    }
}

pub(crate) fn nonzero_detuning(d: f64) -> Result<()> {
    if d == 0.0 || !d.is_finite() {
        Err(BoundsError::ZeroDetuning)
    } else {
        Ok(())
    }
}
