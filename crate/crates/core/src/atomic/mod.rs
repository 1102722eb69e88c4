//! Ion and transition data.
//!
//! Frequencies and decay constants are angular quantities in 1/s. The stored
//! decay constant Γ is the amplitude (half-width) constant: a level with
//! constant Γ loses population at rate 2Γ.
//!
//! Level indices follow the metastable-qubit numbering: `0` is the ground
//! level, `1` the long-lived qubit level and `2` the dipole-coupled level
//! that the qubit laser perturbs. The Zeeman/Raman picture renumbers these
//! (see [`RamanView`]).

mod view;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use view::{MetastableView, RamanView, TransitionCase};

/// The database that ships with the crate.
pub const BUNDLED_DATABASE: &str = include_str!("../../data/ions.json");

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum AtomicDataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("missing field: {0}")]
    MissingField(String),
    #[error("validation error in {field}: {reason}")]
    Validation { field: String, reason: String },
    #[error("unknown transition {from}-{to} for ion {ion}")]
    UnknownTransition { ion: String, from: u8, to: u8 },
    #[error("input `{0}` must be positive")]
    NonPositiveInput(&'static str),
    #[error("unknown ion `{0}`")]
    UnknownIon(String),
}

impl AtomicDataError {
    fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        AtomicDataError::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, AtomicDataError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Multipole {
    E1,
    E2,
    E3,
}

impl fmt::Display for Multipole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Multipole::E1 => "E1",
            Multipole::E2 => "E2",
            Multipole::E3 => "E3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelRef {
    pub index: u8,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub from: u8,
    pub to: u8,
    #[serde(rename = "omega_rad_per_s")]
    pub omega: f64,
    pub multipole: Multipole,
    /// Partial decay constants of the upper level `to`, keyed by destination level.
    pub gamma_partial: BTreeMap<u8, f64>,
    /// Stored total decay constant of the upper level, when tabulated.
    #[serde(
        rename = "gamma_total_per_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub gamma_total: Option<f64>,
}

impl TransitionSpec {
    pub fn connects(&self, a: u8, b: u8) -> bool {
        (self.from == a && self.to == b) || (self.from == b && self.to == a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    pub levels: Vec<LevelRef>,
    pub transitions: Vec<TransitionSpec>,
    /// Decay constant of channels from the dipole level that leave the qubit
    /// system (the "Γ_out" of the error-corrected estimates).
    #[serde(rename = "gamma_out_per_s")]
    pub gamma_out: f64,
    /// Dipole level → ground constant as tabulated for the error-corrected
    /// estimates. Kept apart from the transition partials, which come from a
    /// different source for some ions.
    #[serde(
        rename = "qec_gamma_upper_to_ground_per_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub qec_gamma_upper_to_ground: Option<f64>,
    /// Total constant of the dipole level as tabulated for Raman qubits.
    #[serde(
        rename = "raman_gamma_upper_total_per_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub raman_gamma_upper_total: Option<f64>,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

impl IonSpec {
    pub fn level(&self, index: u8) -> Option<&LevelRef> {
        self.levels.iter().find(|l| l.index == index)
    }

    pub fn transition(&self, a: u8, b: u8) -> Result<&TransitionSpec> {
        self.transitions
            .iter()
            .find(|t| t.connects(a, b))
            .ok_or_else(|| AtomicDataError::UnknownTransition {
                ion: self.name.clone(),
                from: a.min(b),
                to: a.max(b),
            })
    }

    /// Partial decay constant `upper → lower`, gathered over all records.
    pub fn partial_rate(&self, upper: u8, lower: u8) -> Option<f64> {
        self.transitions
            .iter()
            .filter(|t| t.to == upper)
            .find_map(|t| t.gamma_partial.get(&lower).copied())
    }

    /// Total decay constant of a level: the sum of its partials.
    pub fn total_rate(&self, upper: u8) -> Option<f64> {
        let mut any = false;
        let sum = self
            .transitions
            .iter()
            .filter(|t| t.to == upper)
            .flat_map(|t| t.gamma_partial.values())
            .inspect(|_| any = true)
            .sum();
        any.then_some(sum)
    }

    /// Qubit multipole: the multipole class of the 0↔1 transition.
    pub fn qubit_multipole(&self) -> Option<Multipole> {
        self.transition(0, 1).ok().map(|t| t.multipole)
    }

    pub fn metastable_view(&self) -> Result<MetastableView> {
        MetastableView::from_ion(self)
    }

    pub fn raman_view(&self) -> Result<RamanView> {
        RamanView::from_ion(self)
    }

    /// Provenance keys every numeric datum of this ion should carry.
    pub fn provenance_keys(&self) -> Vec<String> {
        let mut keys = Vec::new();
        if self.mass_kg.is_some() {
            keys.push("mass".to_string());
        }
        for t in &self.transitions {
            keys.push(format!("omega {}-{}", t.from, t.to));
            for dest in t.gamma_partial.keys() {
                keys.push(format!("gamma {}->{}", t.to, dest));
            }
            if t.gamma_total.is_some() {
                keys.push(format!("gamma_total {}", t.to));
            }
        }
        keys.push("gamma_out".to_string());
        if self.qec_gamma_upper_to_ground.is_some() {
            keys.push("qec_gamma_upper_to_ground".to_string());
        }
        if self.raman_gamma_upper_total.is_some() {
            keys.push("raman_gamma_upper_total".to_string());
        }
        keys
    }

    /// Keys from [`IonSpec::provenance_keys`] with no recognised source tag.
    pub fn missing_provenance(&self) -> Vec<String> {
        self.provenance_keys()
            .into_iter()
            .filter(|k| !self.provenance.get(k).is_some_and(|tag| is_source_tag(tag)))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let ion = &self.name;
        if ion.trim().is_empty() {
            return Err(AtomicDataError::validation("name", "empty ion name"));
        }
        let mut labels = HashSet::new();
        let mut indices = HashSet::new();
        for l in &self.levels {
            let field = format!("{ion}.levels[{}]", l.index);
            if l.index > 3 {
                return Err(AtomicDataError::validation(field, "index must be 0..=3"));
            }
            if l.label.trim().is_empty() {
                return Err(AtomicDataError::validation(field, "empty label"));
            }
            if !indices.insert(l.index) {
                return Err(AtomicDataError::validation(field, "duplicate level index"));
            }
            if !labels.insert(l.label.as_str()) {
                return Err(AtomicDataError::validation(field, "duplicate level label"));
            }
        }
        if let Some(m) = self.mass_kg {
            if !(m > 0.0) {
                return Err(AtomicDataError::validation(format!("{ion}.mass_kg"), "must be > 0"));
            }
        }
        let mut destinations: HashSet<(u8, u8)> = HashSet::new();
        for t in &self.transitions {
            let field = format!("{ion}.transitions[{}-{}]", t.from, t.to);
            if !indices.contains(&t.from) || !indices.contains(&t.to) {
                return Err(AtomicDataError::validation(field, "references undeclared level"));
            }
            if t.from == t.to {
                return Err(AtomicDataError::validation(field, "from and to coincide"));
            }
            if !(t.omega > 0.0) || !t.omega.is_finite() {
                return Err(AtomicDataError::validation(field, "omega must be > 0"));
            }
            for (dest, rate) in &t.gamma_partial {
                if !indices.contains(dest) {
                    return Err(AtomicDataError::validation(
                        format!("{field}.gamma_partial[{dest}]"),
                        "references undeclared level",
                    ));
                }
                if !(*rate >= 0.0) || !rate.is_finite() {
                    return Err(AtomicDataError::validation(
                        format!("{field}.gamma_partial[{dest}]"),
                        format!("decay constant must be >= 0, got {rate}"),
                    ));
                }
                if !destinations.insert((t.to, *dest)) {
                    return Err(AtomicDataError::validation(
                        format!("{field}.gamma_partial[{dest}]"),
                        "partial listed twice for the same upper level",
                    ));
                }
            }
        }
        // Closure checks need every partial of an upper level, hence a second pass.
        for t in &self.transitions {
            if let Some(total) = t.gamma_total {
                let field = format!("{ion}.transitions[{}-{}].gamma_total_per_s", t.from, t.to);
                let sum = self.total_rate(t.to).unwrap_or(0.0);
                if !(total >= 0.0) || (sum - total).abs() > 1e-12 * total.abs().max(f64::MIN_POSITIVE) {
                    return Err(AtomicDataError::validation(
                        field,
                        format!("total {total} differs from sum of partials {sum}"),
                    ));
                }
            }
        }
        if let (Ok(a), Ok(b), Ok(c)) = (
            self.transition(0, 1),
            self.transition(0, 2),
            self.transition(1, 2),
        ) {
            let expected = b.omega - a.omega;
            if (c.omega - expected).abs() > 1e-9 * b.omega {
                return Err(AtomicDataError::validation(
                    format!("{ion}.transitions[1-2].omega_rad_per_s"),
                    format!("expected omega(0-2) - omega(0-1) = {expected}"),
                ));
            }
        }
        for (field, value) in [
            ("gamma_out_per_s", Some(self.gamma_out)),
            ("qec_gamma_upper_to_ground_per_s", self.qec_gamma_upper_to_ground),
            ("raman_gamma_upper_total_per_s", self.raman_gamma_upper_total),
        ] {
            if let Some(v) = value {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(AtomicDataError::validation(
                        format!("{ion}.{field}"),
                        format!("decay constant must be >= 0, got {v}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Recognised provenance tags: a literature marker `A`..`J`, a quote from the
/// running text, or a derivation note.
fn is_source_tag(tag: &str) -> bool {
    let tag = tag.trim();
    matches!(tag, "A" | "B" | "C" | "D" | "E" | "F" | "G" | "H" | "I" | "J")
        || tag.starts_with("derived")
        || tag.starts_with("text")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonDatabase {
    pub schema_version: u32,
    pub ions: Vec<IonSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Unknown keys are errors.
    #[default]
    Strict,
    /// Unknown keys are reported and skipped.
    Lenient,
}

impl IonDatabase {
    pub fn bundled() -> Self {
        Self::from_json_str(BUNDLED_DATABASE).expect("bundled ion database is valid")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json_str_with(text, Strictness::Strict).map(|(db, _)| db)
    }

    /// Parses and validates a database. Returns the unknown keys that were
    /// skipped (always empty in strict mode).
    pub fn from_json_str_with(text: &str, strictness: Strictness) -> Result<(Self, Vec<String>)> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| AtomicDataError::Parse(e.to_string()))?;
        let unknown = strip_unknown_keys(&mut value);
        if strictness == Strictness::Strict {
            if let Some(first) = unknown.first() {
                return Err(AtomicDataError::validation(first.clone(), "unknown key"));
            }
        }
        let db: IonDatabase = serde_json::from_value(value).map_err(classify_serde_error)?;
        db.validate()?;
        Ok((db, unknown))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("database serializes")
    }

    pub fn get(&self, name: &str) -> Option<&IonSpec> {
        self.ions.iter().find(|i| i.name == name)
    }

    /// Looks an ion up by name, tolerating a missing charge suffix and case
    /// (`yb`, `Yb`, `Yb+`).
    pub fn find(&self, name: &str) -> Result<&IonSpec> {
        let wanted = name.trim().trim_end_matches('+').to_ascii_lowercase();
        self.ions
            .iter()
            .find(|i| i.name.trim_end_matches('+').to_ascii_lowercase() == wanted)
            .ok_or_else(|| AtomicDataError::UnknownIon(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.ions.iter().map(|i| i.name.as_str())
    }

    fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(AtomicDataError::validation(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let mut names = HashSet::new();
        for ion in &self.ions {
            if !names.insert(ion.name.as_str()) {
                return Err(AtomicDataError::validation(
                    format!("{}.name", ion.name),
                    "duplicate ion name",
                ));
            }
            ion.validate()?;
        }
        Ok(())
    }
}

pub fn load_database(path: impl AsRef<Path>) -> Result<IonDatabase> {
    load_database_with(path, Strictness::Strict).map(|(db, _)| db)
}

pub fn load_database_with(
    path: impl AsRef<Path>,
    strictness: Strictness,
) -> Result<(IonDatabase, Vec<String>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| AtomicDataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    IonDatabase::from_json_str_with(&text, strictness)
}

/// Laser frequency minus transition frequency, sign preserved.
pub fn derive_detuning(ion: &IonSpec, laser_omega: f64, transition: &TransitionSpec) -> Result<f64> {
    if !ion.transitions.iter().any(|t| t == transition) {
        return Err(AtomicDataError::UnknownTransition {
            ion: ion.name.clone(),
            from: transition.from,
            to: transition.to,
        });
    }
    Ok(laser_omega - transition.omega)
}

/// Rescales a Lamb-Dicke parameter to another transition frequency (η ∝ ω).
pub fn lamb_dicke_scale(eta_ref: f64, omega_ref: f64, omega_new: f64) -> Result<f64> {
    if !(eta_ref > 0.0) {
        return Err(AtomicDataError::NonPositiveInput("eta_ref"));
    }
    if !(omega_ref > 0.0) {
        return Err(AtomicDataError::NonPositiveInput("omega_ref"));
    }
    if !(omega_new > 0.0) {
        return Err(AtomicDataError::NonPositiveInput("omega_new"));
    }
    Ok(eta_ref * omega_new / omega_ref)
}

const TOP_KEYS: &[&str] = &["schema_version", "ions"];
const ION_KEYS: &[&str] = &[
    "name",
    "mass_kg",
    "levels",
    "transitions",
    "gamma_out_per_s",
    "qec_gamma_upper_to_ground_per_s",
    "raman_gamma_upper_total_per_s",
    "provenance",
];
const LEVEL_KEYS: &[&str] = &["index", "label"];
const TRANSITION_KEYS: &[&str] = &[
    "from",
    "to",
    "omega_rad_per_s",
    "multipole",
    "gamma_partial",
    "gamma_total_per_s",
];

/// Removes keys outside the schema, returning their dotted paths.
fn strip_unknown_keys(value: &mut serde_json::Value) -> Vec<String> {
    fn strip(obj: &mut serde_json::Value, allowed: &[&str], path: &str, out: &mut Vec<String>) {
        if let Some(map) = obj.as_object_mut() {
            let unknown: Vec<String> = map
                .keys()
                .filter(|k| !allowed.contains(&k.as_str()))
                .cloned()
                .collect();
            for k in unknown {
                map.remove(&k);
                out.push(if path.is_empty() { k } else { format!("{path}.{k}") });
            }
        }
    }

    let mut out = Vec::new();
    strip(value, TOP_KEYS, "", &mut out);
    if let Some(ions) = value.get_mut("ions").and_then(|v| v.as_array_mut()) {
        for (i, ion) in ions.iter_mut().enumerate() {
            let path = format!("ions[{i}]");
            strip(ion, ION_KEYS, &path, &mut out);
            if let Some(levels) = ion.get_mut("levels").and_then(|v| v.as_array_mut()) {
                for (j, l) in levels.iter_mut().enumerate() {
                    strip(l, LEVEL_KEYS, &format!("{path}.levels[{j}]"), &mut out);
                }
            }
            if let Some(ts) = ion.get_mut("transitions").and_then(|v| v.as_array_mut()) {
                for (j, t) in ts.iter_mut().enumerate() {
                    strip(t, TRANSITION_KEYS, &format!("{path}.transitions[{j}]"), &mut out);
                }
            }
        }
    }
    out
}

fn classify_serde_error(e: serde_json::Error) -> AtomicDataError {
    let msg = e.to_string();
    if let Some(rest) = msg.strip_prefix("missing field ") {
        let field = rest.split('`').nth(1).unwrap_or(rest).to_string();
        AtomicDataError::MissingField(field)
    } else {
        AtomicDataError::Parse(msg)
    }
}
