use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::atomic::IonDatabase;

use super::{
    bound_metastable, bound_qec_metastable, bound_qec_raman, bound_raman, BoundScenario,
    BoundsError, Encoding, LeakBranch, QecOverheads, RamanBeta, Result,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::T1, TableId::T2, TableId::T3, TableId::T4];

    /// Relative tolerance on each published cell.
    pub fn tolerance(self) -> f64 {
        match self {
            TableId::T1 | TableId::T2 => 0.10,
            TableId::T3 => 0.15,
            TableId::T4 => 0.50,
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::T1 => "metastable qubit, no error correction",
            TableId::T2 => "Raman qubit, no error correction",
            TableId::T3 => "metastable qubit with error correction",
            TableId::T4 => "Raman qubit with error correction",
        }
    }

    /// Published (η = 1, η = 0.01) values for each ion.
    pub fn published(self) -> [(&'static str, [f64; 2]); 4] {
        match self {
            TableId::T1 => [
                ("Ca+", [6.9, 2.2]),
                ("Hg+", [4.9, 1.6]),
                ("Ba+", [14.2, 4.5]),
                ("Yb+", [14.3, 14.3]),
            ],
            TableId::T2 => [
                ("Ca+", [14.0, 4.0]),
                ("Hg+", [4.2, 1.4]),
                ("Ba+", [24.4, 6.4]),
                ("Yb+", [26.0, 26.0]),
            ],
            TableId::T3 => [
                ("Ca+", [16.0, 3.7]),
                ("Hg+", [15.0, 3.9]),
                ("Ba+", [21.0, 5.1]),
                ("Yb+", [32.0, 32.0]),
            ],
            TableId::T4 => [
                ("Ca+", [27.0, 5.0]),
                ("Hg+", [26.0, 4.9]),
                ("Ba+", [38.0, 7.2]),
                ("Yb+", [73.0, 73.0]),
            ],
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
        };
        f.write_str(s)
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "T1" | "1" => Ok(TableId::T1),
            "T2" | "2" => Ok(TableId::T2),
            "T3" | "3" => Ok(TableId::T3),
            "T4" | "4" => Ok(TableId::T4),
            other => Err(format!("unknown table `{other}`, expected T1..T4")),
        }
    }
}

pub const ETA_PRESETS: [f64; 2] = [1.0, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableSettings {
    pub epsilon: f64,
    pub qec: QecOverheads,
    pub leak_branch: LeakBranch,
    /// β handling for the uncorrected Raman table.
    pub raman_beta: RamanBeta,
    /// β handling for the error-corrected Raman table.
    pub qec_raman_beta: RamanBeta,
}

impl Default for TableSettings {
    fn default() -> Self {
        TableSettings {
            epsilon: 216.0,
            qec: QecOverheads::default(),
            leak_branch: LeakBranch::GroundPartial,
            raman_beta: RamanBeta::Computed,
            qec_raman_beta: RamanBeta::UnitProduct,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    pub eta: f64,
    pub computed: f64,
    pub published: f64,
    pub rel_deviation: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub ion: String,
    pub cells: Vec<TableCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub id: TableId,
    pub tolerance: f64,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn all_within_tolerance(&self) -> bool {
        self.rows.iter().flat_map(|r| &r.cells).all(|c| c.within_tolerance)
    }

    /// (ion, η) of every cell outside tolerance.
    pub fn failing_cells(&self) -> Vec<(String, f64)> {
        self.rows
            .iter()
            .flat_map(|r| {
                r.cells
                    .iter()
                    .filter(|c| !c.within_tolerance)
                    .map(move |c| (r.ion.clone(), c.eta))
            })
            .collect()
    }
}

pub fn reproduce_table(id: TableId, db: &IonDatabase) -> Result<Table> {
    reproduce_table_with(id, db, &TableSettings::default())
}

pub fn reproduce_table_with(id: TableId, db: &IonDatabase, settings: &TableSettings) -> Result<Table> {
    let tolerance = id.tolerance();
    let mut rows = Vec::new();
    for (name, published) in id.published() {
        let ion = db.get(name).ok_or_else(|| BoundsError::MissingIon(name.to_string()))?;
        let encoding = match id {
            TableId::T1 | TableId::T3 => Encoding::Metastable,
            TableId::T2 | TableId::T4 => Encoding::Raman,
        };
        let mut base = BoundScenario::new(ion, encoding)?;
        base.gate_model.epsilon = settings.epsilon;
        base.leak_branch = settings.leak_branch;
        base.raman_beta = match id {
            TableId::T4 => settings.qec_raman_beta,
            _ => settings.raman_beta,
        };
        if matches!(id, TableId::T3 | TableId::T4) {
            base.qec = Some(settings.qec);
        }
        let mut cells = Vec::new();
        for (eta, published) in ETA_PRESETS.into_iter().zip(published) {
            let s = base.clone().with_eta(eta);
            let computed = match id {
                TableId::T1 => bound_metastable(&s)?,
                TableId::T2 => bound_raman(&s)?,
                TableId::T3 => bound_qec_metastable(&s)?,
                TableId::T4 => bound_qec_raman(&s)?,
            };
            let rel_deviation = computed / published - 1.0;
            cells.push(TableCell {
                eta,
                computed,
                published,
                rel_deviation,
                within_tolerance: rel_deviation.abs() <= tolerance,
            });
        }
        rows.push(TableRow {
            ion: name.to_string(),
            cells,
        });
    }
    Ok(Table { id, tolerance, rows })
}
