use std::path::{Path, PathBuf};

use iontrap::atomic::{load_database_with, IonDatabase, Strictness};
use serde::Deserialize;

use crate::CliError;

/// Values read from `--config`. Every field is optional; a flag on the
/// command line overrides the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub db: Option<PathBuf>,
    pub lenient: Option<bool>,
    pub ion: Option<String>,
    pub encoding: Option<String>,
    pub case: Option<String>,
    pub eta: Option<f64>,
    pub epsilon: Option<f64>,
    pub p_em_1: Option<f64>,
    pub p_em_2: Option<f64>,
    pub p_em_3: Option<f64>,
    pub p_fail: Option<f64>,
    pub p_out: Option<f64>,
    pub q: Option<f64>,
    pub c: Option<f64>,
    pub k: Option<u32>,
    pub raman_beta: Option<String>,
    pub qec_raman_beta: Option<String>,
    pub leak_branch: Option<String>,
    pub delta2: Option<f64>,
    pub delta3: Option<f64>,
    pub rabi: Option<f64>,
    pub rabi03: Option<f64>,
    pub gamma22: Option<f64>,
    pub gamma: Option<String>,
    pub traj: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub ions: Option<usize>,
    pub cutoff: Option<usize>,
    pub aux_gamma: Option<f64>,
    pub sim_eta: Option<f64>,
    pub sim_rabi: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }
}

pub fn open_database(flag: Option<&Path>, file: &FileConfig, lenient: bool) -> Result<IonDatabase, CliError> {
    let lenient = lenient || file.lenient.unwrap_or(false);
    let Some(path) = flag.or(file.db.as_deref()) else {
        return Ok(IonDatabase::bundled());
    };
    let strictness = if lenient { Strictness::Lenient } else { Strictness::Strict };
    let (db, skipped) = load_database_with(path, strictness).map_err(|e| CliError::Input(e.to_string()))?;
    for key in skipped {
        eprintln!("warning: skipped unknown key {key}");
    }
    Ok(db)
}
