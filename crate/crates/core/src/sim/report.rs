use std::io::Write;

use serde::Serialize;

use super::dft::{DftReport, JumpClass};
use super::Result;

#[derive(Debug, Serialize)]
struct TrajectoryRow {
    index: usize,
    seed: u64,
    jump_count: usize,
    jump_times: String,
    fidelity: String,
}

/// Formats to 6 significant digits.
pub(crate) fn sig6(x: f64) -> String {
    format!("{x:.5e}")
}

/// One row per trajectory: index, seed, jump_count, jump_times (separated
/// by `;`), fidelity.
pub fn write_trajectories_csv<W: Write>(out: W, report: &DftReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (index, r) in report.records.iter().enumerate() {
        w.serialize(TrajectoryRow {
            index,
            seed: r.seed,
            jump_count: r.emitted_count,
            jump_times: r.jumps.iter().map(|j| sig6(j.time)).collect::<Vec<_>>().join(";"),
            fidelity: r.fidelity.map(sig6).unwrap_or_default(),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinRow {
    pub k: usize,
    pub ideal_prob: f64,
    pub trajectory_prob: f64,
    pub class: &'static str,
}

impl BinRow {
    /// Rows for trajectory `index` of the report.
    pub fn for_trajectory(report: &DftReport, index: usize) -> Vec<BinRow> {
        let class = JumpClass::of(report.records[index].emitted_count).label();
        report
            .ideal_distribution
            .iter()
            .zip(&report.distributions[index])
            .enumerate()
            .map(|(k, (&ideal_prob, &trajectory_prob))| BinRow {
                k,
                ideal_prob,
                trajectory_prob,
                class,
            })
            .collect()
    }
}

#[derive(Serialize)]
struct BinRecord<'a> {
    k: usize,
    ideal_prob: String,
    trajectory_prob: String,
    class: &'a str,
}

/// Columns k, ideal_prob, trajectory_prob, class.
pub fn write_bins_csv<W: Write>(out: W, rows: &[BinRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(BinRecord {
            k: r.k,
            ideal_prob: sig6(r.ideal_prob),
            trajectory_prob: sig6(r.trajectory_prob),
            class: r.class,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_json<W: Write>(mut out: W, report: &DftReport) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}
