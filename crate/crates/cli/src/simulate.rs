use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use iontrap::sim::{
    dft_experiment, write_bins_csv, write_trajectories_csv, BinRow, DftConfig, DftReport, GammaMode, JumpClass,
    PulseParams, RegisterLayout, SingleQubitMode,
};

use crate::cli::DftArgs;
use crate::config::FileConfig;
use crate::output::{g6, to_json_6};
use crate::{pick, CliError};

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn internal<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Internal(e.to_string())
}

fn config(args: &DftArgs, file: &FileConfig) -> Result<DftConfig, CliError> {
    let gamma: GammaMode = match pick(args.gamma.clone(), file.gamma.clone()) {
        Some(s) => s.parse().map_err(CliError::Input)?,
        None => GammaMode::Auto { t_over_tau: 1.0 },
    };
    let n_ions = pick(args.ions, file.ions).unwrap_or(5);
    let cutoff = pick(args.cutoff, file.cutoff).unwrap_or(3);
    let layout = RegisterLayout::new(n_ions, cutoff).map_err(|e| CliError::Input(e.to_string()))?;
    let mut params = PulseParams::default();
    if let Some(r) = pick(args.rabi, file.sim_rabi) {
        params.rabi = r;
    }
    if let Some(eta) = pick(args.eta, file.sim_eta) {
        params.eta = eta;
    }
    if args.pulsed {
        params.single_qubit = SingleQubitMode::Pulsed;
    }
    Ok(DftConfig {
        n_trajectories: pick(args.traj, file.traj).unwrap_or(100),
        gamma,
        seed0: pick(args.seed, file.seed).unwrap_or(0),
        layout,
        params,
        aux_gamma: pick(args.aux_gamma, file.aux_gamma),
        parallel: !args.sequential,
        ..DftConfig::default()
    })
}

fn class_rows(report: &DftReport, class: JumpClass) -> Option<Vec<BinRow>> {
    let dist = report.class(class).distribution.as_ref()?;
    Some(
        report
            .ideal_distribution
            .iter()
            .zip(dist)
            .enumerate()
            .map(|(k, (&ideal_prob, &trajectory_prob))| BinRow {
                k,
                ideal_prob,
                trajectory_prob,
                class: class.label(),
            })
            .collect(),
    )
}

fn write_artifacts(dir: &Path, report: &DftReport) -> Result<Vec<String>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();

    let mut w = create(dir, "trajectories.csv")?;
    write_trajectories_csv(&mut w, report).map_err(internal)?;
    w.flush().map_err(internal)?;
    written.push("trajectories.csv".to_string());

    let mut w = create(dir, "summary.json")?;
    writeln!(w, "{}", to_json_6(report)).map_err(internal)?;
    w.flush().map_err(internal)?;
    written.push("summary.json".to_string());

    let mut w = create(dir, "bins.csv")?;
    write_bins_csv(&mut w, &BinRow::for_trajectory(report, 0)).map_err(internal)?;
    w.flush().map_err(internal)?;
    written.push("bins.csv".to_string());

    for (class, name) in [
        (JumpClass::ZeroJump, "bins_zero_jump.csv"),
        (JumpClass::OneJump, "bins_one_jump.csv"),
    ] {
        if let Some(rows) = class_rows(report, class) {
            let mut w = create(dir, name)?;
            write_bins_csv(&mut w, &rows).map_err(internal)?;
            w.flush().map_err(internal)?;
            written.push(name.to_string());
        }
    }
    Ok(written)
}

pub fn run(args: &DftArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let cfg = config(args, file)?;
    let report = dft_experiment(&cfg).map_err(|e| match e {
        iontrap::sim::SimError::InvalidParameter(_)
        | iontrap::sim::SimError::InvalidLayout(_)
        | iontrap::sim::SimError::InvalidPulse(_)
        | iontrap::sim::SimError::ZeroFunction
        | iontrap::sim::SimError::InvalidLength(_) => CliError::Input(e.to_string()),
        other => internal(other),
    })?;
    let dir = pick(args.out.clone(), file.out.clone()).unwrap_or_else(|| PathBuf::from("dft-out"));
    let written = write_artifacts(&dir, &report)?;

    println!("trajectories   {}", report.n_trajectories);
    println!("seed0          {}", report.seed0);
    println!("gamma mode     {}", report.gamma_mode);
    println!("gamma11        {} 1/s", g6(report.gamma11));
    println!("duration       {} s", g6(report.program_duration));
    println!("T/tau_sp       {}", g6(report.t_over_tau_sp));
    println!("mean jumps     {} (variance {})", g6(report.mean_jumps), g6(report.var_jumps));
    println!("mean fidelity  {}", g6(report.mean_fidelity));
    for c in &report.classes {
        let f = c.mean_fidelity.map(g6).unwrap_or_else(|| "-".into());
        println!("{:<14} n={} fidelity={f}", c.class.label(), c.count);
    }
    println!("wrote {} to {}", written.join(", "), dir.display());
    Ok(ExitCode::SUCCESS)
}
