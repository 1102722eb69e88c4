//! Analytic estimates: gate and computation times, extraneous-level
//! populations and the intensity-independent upper bounds on the bit size L,
//! with and without error correction.
//!
//! All functions are pure. Inputs are SI with angular frequencies in 1/s.
//! Bounds are returned as real numbers; use [`floor_bits`] for a bit count.

mod scenario;
mod tables;

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::atomic::{MetastableView, TransitionCase};
use crate::constants::{C_LIGHT, EPSILON0, HBAR};

pub use scenario::{
    BoundScenario, EmissionBudgets, Encoding, GateCountModel, LeakBranch, QecOverheads, RamanBeta,
};
pub use tables::{reproduce_table, reproduce_table_with, Table, TableCell, TableId, TableRow, TableSettings};

use scenario::{nonzero_detuning, positive};

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("input `{0}` must be positive")]
    NonPositiveInput(&'static str),
    #[error("frequency must be positive")]
    NonPositiveFrequency,
    #[error("`{0}` is out of range")]
    OutOfRange(&'static str),
    #[error("detuning must be nonzero")]
    ZeroDetuning,
    #[error("error-correction overheads are required")]
    MissingQec,
    #[error("this estimate does not include error correction")]
    UnexpectedQec,
    #[error("missing transition data: {0}")]
    MissingTransitionData(String),
    #[error("scenario encoding is {found:?}, expected {expected:?}")]
    WrongEncoding { expected: Encoding, found: Encoding },
    #[error("regime is ambiguous: the two couplings differ by a factor {ratio:.3}")]
    AmbiguousRegime { ratio: f64 },
    #[error("ion `{0}` not in database")]
    MissingIon(String),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

/// Largest integer bit size not exceeding the bound.
pub fn floor_bits(l: f64) -> u32 {
    if l.is_finite() && l > 0.0 {
        l.floor() as u32
    } else {
        0
    }
}

fn qec_factors(qec: Option<&QecOverheads>) -> Result<(f64, f64)> {
    match qec {
        Some(q) => {
            q.validate()?;
            Ok((q.q, q.c))
        }
        None => Ok((1.0, 1.0)),
    }
}

/// Duration of one CNOT, the elementary step: 4π√(5qL)·c/(ηΩ₀₁).
/// Without overheads q = c = 1.
pub fn cnot_time(l: f64, eta: f64, omega01: f64, qec: Option<&QecOverheads>) -> Result<f64> {
    positive("L", l)?;
    positive("eta", eta)?;
    positive("omega01", omega01)?;
    let (q, c) = qec_factors(qec)?;
    Ok(4.0 * PI * (5.0 * q * l).sqrt() * c / (eta * omega01))
}

/// Raman CNOT duration 8πΔ₂/Ω₀₂², times c with error correction.
pub fn raman_cnot_time(delta2: f64, omega02: f64, qec: Option<&QecOverheads>) -> Result<f64> {
    nonzero_detuning(delta2)?;
    positive("omega02", omega02)?;
    let (_, c) = qec_factors(qec)?;
    Ok(8.0 * PI * delta2.abs() / (omega02 * omega02) * c)
}

/// Total computation time εL³ elementary steps long. `omega` is Ω₀₁ for
/// metastable qubits and the Raman Rabi frequency Ω₀₂ otherwise.
pub fn total_time(l: f64, scenario: &BoundScenario, omega: f64) -> Result<f64> {
    positive("L", l)?;
    scenario.validate()?;
    let steps = scenario.epsilon() * l.powi(3);
    let step = match scenario.encoding {
        Encoding::Metastable => cnot_time(l, scenario.eta, omega, scenario.qec.as_ref())?,
        Encoding::Raman => {
            let delta2 = scenario
                .delta2
                .ok_or_else(|| BoundsError::MissingTransitionData("Raman detuning delta2".into()))?;
            raman_cnot_time(delta2, omega, scenario.qec.as_ref())?
        }
    };
    Ok(step * steps)
}

/// Computation time of an error-corrected metastable register when Ω₀₁ is
/// chosen to exhaust the failure budget:
/// 400π²c²q²ε/η² · (ε/p_fail)^(1/k) · Γ₁₁/Ω₀₁² · L^(5+3/k).
pub fn time_at_failure_budget(l: f64, scenario: &BoundScenario, omega01: f64, gamma11: f64) -> Result<f64> {
    positive("L", l)?;
    positive("omega01", omega01)?;
    positive("gamma11", gamma11)?;
    scenario.validate()?;
    let qec = scenario.require_qec()?;
    let eps = scenario.epsilon();
    let k = f64::from(qec.k);
    Ok(400.0 * PI * PI * qec.c * qec.c * qec.q * qec.q * eps / (scenario.eta * scenario.eta)
        * (eps / scenario.budgets.p_fail).powf(1.0 / k)
        * gamma11
        / (omega01 * omega01)
        * l.powf(5.0 + 3.0 / k))
}

/// Spontaneous lifetime of a register of 5qL ions at mean excitation ½:
/// 1/(5qLΓ₁₁).
pub fn lifetime(l: f64, gamma11: f64, qec: Option<&QecOverheads>) -> Result<f64> {
    positive("L", l)?;
    positive("gamma11", gamma11)?;
    let (q, _) = qec_factors(qec)?;
    Ok(1.0 / (5.0 * q * l * gamma11))
}

/// Ω²/Γ = 6π c³ ε₀ E² / (ħ ω³) for a transition of frequency ω driven by a
/// field of amplitude E.
pub fn einstein_ratio(omega: f64, e_field: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(BoundsError::NonPositiveFrequency);
    }
    if !(e_field >= 0.0) || !e_field.is_finite() {
        return Err(BoundsError::NonPositiveInput("E_field"));
    }
    Ok(6.0 * PI * C_LIGHT.powi(3) * EPSILON0 * e_field * e_field / (HBAR * omega.powi(3)))
}

/// Ω₀₁/Γ₁₁ such that p_em_1 emissions are expected during the computation:
/// 20πε√(5L⁹)/(η p_em_1).
pub fn required_rabi_ratio(l: f64, eta: f64, epsilon: f64, p_em_1: f64) -> Result<f64> {
    positive("L", l)?;
    positive("eta", eta)?;
    positive("epsilon", epsilon)?;
    positive("p_em_1", p_em_1)?;
    Ok(20.0 * PI * epsilon * (5.0 * l.powi(9)).sqrt() / (eta * p_em_1))
}

/// Population of the extraneous level when both qubit levels couple to it:
/// ½(Ω₀₂²/4Δ₀₂² + Ω₁₂²/4Δ₁₂²).
pub fn pop_extraneous(omega_02: f64, delta_02: f64, omega_12: f64, delta_12: f64) -> Result<f64> {
    nonzero_detuning(delta_02)?;
    nonzero_detuning(delta_12)?;
    Ok(0.5
        * (omega_02 * omega_02 / (4.0 * delta_02 * delta_02)
            + omega_12 * omega_12 / (4.0 * delta_12 * delta_12)))
}

/// Single-branch variant used with error correction: Ω₀₂²/8Δ₂².
pub fn pop_extraneous_qec(omega_02: f64, delta_2: f64) -> Result<f64> {
    nonzero_detuning(delta_2)?;
    Ok(omega_02 * omega_02 / (8.0 * delta_2 * delta_2))
}

/// Expected number of emissions from level 2 over the whole computation,
/// 2Γ₂₂ρ₂₂T, for a metastable register whose Ω₀₁ is fixed by the p_em_1
/// budget. The dipole Rabi frequencies follow from Ω₀₁ because one laser
/// field drives all three transitions.
pub fn emission_product_metastable(
    view: &MetastableView,
    l: f64,
    eta: f64,
    epsilon: f64,
    p_em_1: f64,
    omega01: f64,
) -> Result<f64> {
    positive("omega01", omega01)?;
    positive("gamma11", view.gamma11)?;
    positive("eta", eta)?;
    positive("p_em_1", p_em_1)?;
    let gamma11 = view.gamma11;
    let t = 400.0 * PI * PI * epsilon * epsilon / (eta * eta * p_em_1) * gamma11
        / (omega01 * omega01)
        * l.powi(8);
    let omega02_sq =
        omega01 * omega01 / gamma11 * view.gamma22_00 * (view.omega01 / view.omega02).powi(3);
    let omega12_sq =
        omega01 * omega01 / gamma11 * view.gamma22_11 * (view.omega01 / view.omega21).powi(3);
    let rho22 = pop_extraneous(omega02_sq.sqrt(), view.delta20(), omega12_sq.sqrt(), view.delta21())?;
    Ok(2.0 * view.gamma22 * rho22 * t)
}

/// Intensity-independent bound for a metastable qubit without error
/// correction. Case a carries η² under a 1/8 power; case b is η-free with a
/// 1/7 power.
pub fn bound_metastable(s: &BoundScenario) -> Result<f64> {
    s.validate()?;
    s.require_encoding(Encoding::Metastable)?;
    s.require_no_qec()?;
    let v = s.metastable()?;
    positive("gamma22", v.gamma22)?;
    nonzero_detuning(v.delta20())?;
    nonzero_detuning(v.delta21())?;
    let eps = s.epsilon();
    let p = s.budgets.p_em_1 * s.budgets.p_em_2;
    let g = v.gamma22;
    let branch0 = v.gamma22_00 / (v.delta20().powi(2) * g);
    let branch1 = v.gamma22_11 / (v.delta21().powi(2) * g);
    let r0 = v.omega01 / v.omega02;
    let r1 = v.omega01 / v.omega21;
    Ok(match s.transition_case {
        TransitionCase::AQuadrupole => {
            let denom = branch0 * r0.powi(3) + branch1 * r1.powi(3);
            (s.eta * s.eta * p / (100.0 * PI * PI * eps * eps * g * g) / denom).powf(1.0 / 8.0)
        }
        TransitionCase::BOctupole => {
            let denom = branch0 * r0 + branch1 * r1;
            (p / (20.0 * PI * PI * eps * eps * g * g) / denom).powf(1.0 / 7.0)
        }
    })
}

/// Two-level Raman estimate (Δ₂p/(8πεΓ₂₂))^(1/3), which ignores further levels.
pub fn bound_raman_naive(delta2: f64, gamma22: f64, epsilon: f64, p_em_2: f64) -> Result<f64> {
    positive("delta2", delta2)?;
    positive("gamma22", gamma22)?;
    positive("epsilon", epsilon)?;
    positive("p_em_2", p_em_2)?;
    Ok((delta2 * p_em_2 / (8.0 * PI * epsilon * gamma22)).cbrt())
}

fn raman_beta_product(s: &BoundScenario, beta: f64, budgets: f64) -> f64 {
    match s.raman_beta {
        RamanBeta::Computed => beta * budgets,
        RamanBeta::UnitProduct => 1.0,
    }
}

/// Intensity-independent bound for Raman qubits limited by level 3.
/// Case a: {Δ₃²p₂p₃η²β/(80π²ε²Γ₃₃²)(ω₁₃/ω₀₂)³}^(1/7);
/// case b: {Δ₃²p₂p₃β/(16π²ε²Γ₃₃²)(ω₁₃/ω₀₂)³}^(1/6).
pub fn bound_raman(s: &BoundScenario) -> Result<f64> {
    s.validate()?;
    s.require_encoding(Encoding::Raman)?;
    s.require_no_qec()?;
    let v = s.raman()?;
    positive("gamma33", v.gamma33)?;
    positive("gamma33_00", v.gamma33_00)?;
    nonzero_detuning(v.delta3)?;
    let eps = s.epsilon();
    let pb = raman_beta_product(s, v.beta(), s.budgets.p_em_2 * s.budgets.p_em_3);
    let common = v.delta3 * v.delta3 * pb / (eps * eps * v.gamma33 * v.gamma33)
        * (v.omega13 / v.omega02).powi(3);
    Ok(match s.transition_case {
        TransitionCase::AQuadrupole => (common * s.eta * s.eta / (80.0 * PI * PI)).powf(1.0 / 7.0),
        TransitionCase::BOctupole => (common / (16.0 * PI * PI)).powf(1.0 / 6.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RamanRegime {
    Level3Dominates,
    Level2Dominates,
}

/// Which far-detuned level controls the Raman dynamics, comparing Ω₀₃²/Δ₃
/// with Ω₀₂²/Δ₂. Regimes closer than a factor 10 are rejected.
pub fn raman_regime(omega03: f64, delta3: f64, omega02: f64, delta2: f64) -> Result<RamanRegime> {
    raman_regime_with_factor(omega03, delta3, omega02, delta2, 10.0)
}

pub fn raman_regime_with_factor(
    omega03: f64,
    delta3: f64,
    omega02: f64,
    delta2: f64,
    factor: f64,
) -> Result<RamanRegime> {
    nonzero_detuning(delta3)?;
    nonzero_detuning(delta2)?;
    positive("factor", factor)?;
    let s3 = omega03 * omega03 / delta3.abs();
    let s2 = omega02 * omega02 / delta2.abs();
    if s3 >= factor * s2 && s3 > 0.0 {
        Ok(RamanRegime::Level3Dominates)
    } else if s2 >= factor * s3 && s2 > 0.0 {
        Ok(RamanRegime::Level2Dominates)
    } else {
        let ratio = if s2 > 0.0 { s3 / s2 } else { f64::NAN };
        Err(BoundsError::AmbiguousRegime { ratio })
    }
}

/// Lower limit on the Raman computation time, 8πεL³Γ₃₃→₀₀/(Γ₂₂→₀₀Δ₃),
/// multiplied by c when error-correction overheads are given.
pub fn raman_time_lower_bound(
    l: f64,
    epsilon: f64,
    gamma33_00: f64,
    gamma22_00: f64,
    delta3: f64,
    qec_c: Option<f64>,
) -> Result<f64> {
    positive("L", l)?;
    positive("epsilon", epsilon)?;
    positive("gamma33_00", gamma33_00)?;
    positive("gamma22_00", gamma22_00)?;
    positive("delta3", delta3)?;
    let c = match qec_c {
        Some(c) if c >= 1.0 => c,
        Some(_) => return Err(BoundsError::OutOfRange("c")),
        None => 1.0,
    };
    Ok(8.0 * PI * epsilon * l.powi(3) * gamma33_00 / (gamma22_00 * delta3) * c)
}

/// Intensity-dependent error-corrected bound for a single-error code with
/// correction after every logical operation:
/// (η² p_fail (Ω₀₁/Γ₁₁)² / (2000π² q³c²ε))^(1/6).
pub fn bound_qec_intensity(s: &BoundScenario, omega01_over_gamma11: f64) -> Result<f64> {
    positive("eta", s.eta)?;
    s.gate_model.validate()?;
    let qec = s.require_qec()?;
    qec.validate()?;
    positive("omega01_over_gamma11", omega01_over_gamma11)?;
    let p_fail = s.budgets.p_fail;
    if !(0.0..=1.0).contains(&p_fail) {
        return Err(BoundsError::OutOfRange("p_fail"));
    }
    let x = s.eta * s.eta * p_fail * omega01_over_gamma11.powi(2)
        / (2000.0 * PI * PI * qec.q.powi(3) * qec.c * qec.c * s.epsilon());
    Ok(x.powf(1.0 / 6.0))
}

/// Error probability of one block of N logical operations with a
/// single-error code: 4π√(5qL)/(ηΩ₀₁) · 5cqLΓ₁₁ · N.
pub fn qec_block_error(l: f64, eta: f64, omega01: f64, gamma11: f64, qec: &QecOverheads, n: f64) -> Result<f64> {
    positive("N", n)?;
    positive("gamma11", gamma11)?;
    let step = cnot_time(l, eta, omega01, Some(&QecOverheads { c: 1.0, ..*qec }))?;
    Ok(step * 5.0 * qec.c * qec.q * l * gamma11 * n)
}

/// Probability that a computation of εL³ operations fails when blocks of N
/// operations are each corrected: p_N² εL³/N.
pub fn qec_failure_probability(p_n: f64, n: f64, epsilon: f64, l: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_n) {
        return Err(BoundsError::OutOfRange("p_N"));
    }
    if !(n >= 1.0) || !n.is_finite() {
        return Err(BoundsError::OutOfRange("N"));
    }
    positive("epsilon", epsilon)?;
    positive("L", l)?;
    Ok(p_n * p_n * epsilon * l.powi(3) / n)
}

/// Error-corrected metastable bound for a code correcting k−1 errors.
/// Case a: exponent k/(5k+3) with η²; case b: exponent k/(4k+3), η-free.
pub fn bound_qec_metastable(s: &BoundScenario) -> Result<f64> {
    let (base, exponent) = qec_metastable_base(s)?;
    Ok(base.powf(exponent))
}

fn qec_metastable_base(s: &BoundScenario) -> Result<(f64, f64)> {
    s.validate()?;
    s.require_encoding(Encoding::Metastable)?;
    let qec = s.require_qec()?;
    let v = s.metastable()?;
    positive("gamma_out", v.gamma_out)?;
    positive("gamma22_00", v.qec_gamma22_00)?;
    let delta2 = v.delta20();
    nonzero_detuning(delta2)?;
    let eps = s.epsilon();
    let k = f64::from(qec.k);
    let b = &s.budgets;
    let common = delta2 * delta2 * b.p_out
        / (qec.c * qec.c * qec.q * qec.q * eps * v.gamma_out * v.qec_gamma22_00)
        * (b.p_fail / eps).powf(1.0 / k);
    let ratio = v.omega02 / v.omega01;
    Ok(match s.transition_case {
        TransitionCase::AQuadrupole => (
            common * s.eta * s.eta / (100.0 * PI * PI) * ratio.powi(3),
            k / (5.0 * k + 3.0),
        ),
        TransitionCase::BOctupole => (common / (20.0 * PI * PI) * ratio, k / (4.0 * k + 3.0)),
    })
}

/// The single-error (k = 2) forms, written out with p_fail^(1/2), ε^(3/2)
/// and exponents 2/13 (case a) and 2/11 (case b).
pub fn bound_qec_metastable_k2(s: &BoundScenario) -> Result<f64> {
    s.validate()?;
    s.require_encoding(Encoding::Metastable)?;
    let qec = s.require_qec()?;
    if qec.k != 2 {
        return Err(BoundsError::OutOfRange("k"));
    }
    let v = s.metastable()?;
    positive("gamma_out", v.gamma_out)?;
    positive("gamma22_00", v.qec_gamma22_00)?;
    let delta2 = v.delta20();
    let b = &s.budgets;
    let num = delta2 * delta2 * b.p_fail.sqrt() * b.p_out;
    let den = qec.q * qec.q * qec.c * qec.c * s.epsilon().powf(1.5) * v.qec_gamma22_00 * v.gamma_out;
    let ratio = v.omega02 / v.omega01;
    Ok(match s.transition_case {
        TransitionCase::AQuadrupole => {
            (s.eta * s.eta * num / (100.0 * PI * PI * den) * ratio.powi(3)).powf(2.0 / 13.0)
        }
        TransitionCase::BOctupole => (num / (20.0 * PI * PI * den) * ratio).powf(2.0 / 11.0),
    })
}

fn qec_raman_parts(s: &BoundScenario) -> Result<(QecOverheads, f64, f64, f64)> {
    s.validate()?;
    s.require_encoding(Encoding::Raman)?;
    let qec = s.require_qec()?;
    let v = s.raman()?;
    positive("gamma_out", v.gamma_out)?;
    positive("gamma33_00", v.qec_gamma33_00)?;
    nonzero_detuning(v.delta3)?;
    let gamma33_11 = match s.leak_branch {
        LeakBranch::GroundPartial => v.qec_gamma33_00,
        LeakBranch::HalfGroundPartial => v.qec_gamma33_00 / 2.0,
    };
    let eps = s.epsilon();
    let k = f64::from(qec.k);
    let common = v.delta3 * v.delta3
        / (qec.c * qec.c * eps * v.gamma_out * gamma33_11)
        * (v.omega13 / v.omega02).powi(3)
        * (s.budgets.p_fail / eps).powf(1.0 / k);
    let level2 = if v.gamma22 > 0.0 { v.gamma22_00 / v.gamma22 } else { 1.0 };
    let beta_p = raman_beta_product(s, level2, s.budgets.p_em_3);
    Ok((qec, k, common, beta_p))
}

/// Error-corrected Raman bound for a code correcting k−1 errors.
///
/// Case a substitutes α = βη²/(5Lq) into the k/(3k+3) form, giving
/// {βp₃η²Δ₃²/(80π²qc²εΓ_outΓ₃₃→₁₁)(ω₁₃/ω₀₂)³(p_fail/ε)^(1/k)}^(k/(4k+3)).
/// Case b: {βp₃Δ₃²/(32π²c²εΓ_outΓ₃₃→₁₁)(ω₀₃/ω₀₂)³(p_fail/ε)^(1/k)}^(k/(3k+3)).
pub fn bound_qec_raman(s: &BoundScenario) -> Result<f64> {
    let (qec, k, common, beta_p) = qec_raman_parts(s)?;
    Ok(match s.transition_case {
        TransitionCase::AQuadrupole => (common * beta_p * s.eta * s.eta / (80.0 * PI * PI * qec.q))
            .powf(k / (4.0 * k + 3.0)),
        TransitionCase::BOctupole => (common * beta_p / (32.0 * PI * PI)).powf(k / (3.0 * k + 3.0)),
    })
}

/// Case-a error-corrected Raman bound with an explicit α:
/// {αp₃Δ₃²/(16π²c²εΓ_outΓ₃₃→₁₁)(ω₁₃/ω₀₂)³(p_fail/ε)^(1/k)}^(k/(3k+3)).
pub fn bound_qec_raman_alpha(s: &BoundScenario, alpha: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    let (_, k, common, _) = qec_raman_parts(s)?;
    Ok((alpha * s.budgets.p_em_3 * common / (16.0 * PI * PI)).powf(k / (3.0 * k + 3.0)))
}

#[cfg(test)]
mod tests;
