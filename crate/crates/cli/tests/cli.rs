use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use iontrap::atomic::IonDatabase;

fn iontrap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iontrap"))
        .args(args)
        .env_remove("IONTRAP_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn table_one_passes_with_exit_zero() {
    let o = iontrap(&["tables", "T1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "table,ion,eta,computed,published,rel_deviation,within_tolerance"
    );
    assert_eq!(lines.filter(|l| l.ends_with(",true")).count(), 8);
}

#[test]
fn table_two_reports_deviating_cells_with_exit_three() {
    let o = iontrap(&["tables", "T2"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("Hg+ eta=1 "), "{err}");
    assert!(err.contains("Hg+ eta=0.01 "), "{err}");
    assert!(!err.contains("Ca+"));
}

#[test]
fn corrupted_rate_fails_tolerance() {
    let mut db = IonDatabase::bundled();
    let ca = db.ions.iter_mut().find(|i| i.name == "Ca+").unwrap();
    let t = ca.transitions.iter_mut().find(|t| t.connects(0, 2)).unwrap();
    *t.gamma_partial.get_mut(&1).unwrap() *= 30.0;
    t.gamma_total = Some(t.gamma_partial.values().sum());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ions.json");
    std::fs::write(&path, db.to_json_string()).unwrap();
    let o = iontrap(&["tables", "T1", "--db", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("T1 Ca+ eta=1 "), "{err}");
    assert!(!err.contains("Yb+"));
}

#[test]
fn missing_or_invalid_database_is_an_input_error() {
    let o = iontrap(&["tables", "T1", "--db", "/nonexistent/ions.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot read"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let o = iontrap(&["tables", "T1", "--db", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"), "{}", stderr(&o));
}

#[test]
fn bound_reports_metastable_case_b() {
    let o = iontrap(&["bound", "--ion", "Yb", "--encoding", "metastable", "--case", "b", "--eta", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let l = field(&stdout(&o), "L ");
    assert!((l / 14.3 - 1.0).abs() < 0.10, "{l}");
    assert_eq!(field(&stdout(&o), "L (floor)"), 14.0);
}

#[test]
fn bound_naive_raman() {
    let o = iontrap(&["bound", "--delta2", "1e13", "--gamma22", "1", "--naive-raman"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let l = field(&stdout(&o), "L ");
    assert!((l - 1225.0).abs() < 1.0, "{l}");
}

#[test]
fn bound_rejects_zero_eta() {
    let o = iontrap(&["bound", "--ion", "Ca+", "--eta", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("eta"));
}

#[test]
fn bound_json_is_rounded_to_six_digits() {
    let o = iontrap(&["bound", "--ion", "Ba+", "--encoding", "raman", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let l = v["l"].as_f64().unwrap();
    assert_eq!(format!("{l:.5e}").parse::<f64>().unwrap(), l);
    assert!(v["raman_time_lower_bound_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_file_fills_in_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{ "ion": "Ca+", "eta": 0.01 }"#).unwrap();
    let from_file = iontrap(&["bound", "--config", cfg.to_str().unwrap()]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(field(&stdout(&from_file), "eta"), 0.01);
    let flag = iontrap(&["bound", "--config", cfg.to_str().unwrap(), "--eta", "1"]);
    assert_eq!(field(&stdout(&flag), "eta"), 1.0);

    std::fs::write(&cfg, r#"{ "bogus": 1 }"#).unwrap();
    let o = iontrap(&["bound", "--config", cfg.to_str().unwrap(), "--ion", "Ca+"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ions_list_and_show() {
    let o = iontrap(&["ions", "list"]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["Ca+", "Hg+", "Ba+", "Yb+"] {
        assert!(stdout(&o).contains(name));
    }
    let o = iontrap(&["ions", "show", "yb"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["name"], "Yb+");
    assert_eq!(iontrap(&["ions", "show", "Xe+"]).status.code(), Some(2));
}

#[test]
fn lossless_dft_matches_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = iontrap(&["simulate", "dft", "--gamma", "0", "--traj", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let bins = read(dir.path(), "bins.csv");
    let rows: Vec<&str> = bins.lines().skip(1).collect();
    assert_eq!(rows.len(), 32);
    for (k, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        let (mut re, mut im) = (0.0, 0.0);
        for x in [8usize, 18, 28] {
            let a = 2.0 * PI * (x * k) as f64 / 32.0;
            re += a.cos();
            im += a.sin();
        }
        let p = (re * re + im * im) / 96.0;
        let got: f64 = cols[2].parse().unwrap();
        assert!((got - p).abs() <= 5e-6 * p.max(1e-12), "k={k}: {got} vs {p}");
        assert_eq!(cols[1], cols[2]);
        assert_eq!(cols[3], "zero-jump");
    }
    for name in ["trajectories.csv", "summary.json", "bins_zero_jump.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    assert!(!dir.path().join("bins_one_jump.csv").exists());
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = iontrap(&[
            "simulate", "dft", "--gamma", "auto", "--traj", "1000", "--seed", "7", "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for name in ["trajectories.csv", "summary.json", "bins.csv", "bins_zero_jump.csv", "bins_one_jump.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let traj = read(a.path(), "trajectories.csv");
    assert_eq!(traj.lines().next().unwrap(), "index,seed,jump_count,jump_times,fidelity");
    assert_eq!(traj.lines().count(), 1001);
    let summary: serde_json::Value = serde_json::from_str(&read(a.path(), "summary.json")).unwrap();
    assert_eq!(summary["n_trajectories"], 1000);
    assert_eq!(summary["seed0"], 7);
}

#[test]
fn seed_comes_from_flag_then_environment_then_config() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let dir = tempfile::tempdir().unwrap();
        let mut args = vec!["simulate", "dft", "--ions", "4", "--traj", "3", "--out", dir.path().to_str().unwrap()];
        args.extend_from_slice(extra);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_iontrap"));
        cmd.args(&args).env_remove("IONTRAP_SEED");
        if let Some(s) = env {
            cmd.env("IONTRAP_SEED", s);
        }
        let o = cmd.output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = read(dir.path(), "trajectories.csv");
        let first_seed: u64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        first_seed
    };
    let cfg_dir = tempfile::tempdir().unwrap();
    let cfg = cfg_dir.path().join("c.json");
    std::fs::write(&cfg, r#"{ "seed": 5 }"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    assert_eq!(run(None, &[]), 0);
    assert_eq!(run(None, &["--config", cfg]), 5);
    assert_eq!(run(Some("11"), &["--config", cfg]), 11);
    assert_eq!(run(Some("11"), &["--seed", "13", "--config", cfg]), 13);
}

#[test]
fn simulate_rejects_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(iontrap(&["simulate", "dft", "--gamma", "often", "--out", out]).status.code(), Some(2));
    assert_eq!(iontrap(&["simulate", "dft", "--traj", "0", "--out", out]).status.code(), Some(2));
    assert_eq!(iontrap(&["simulate", "dft", "--ions", "0", "--out", out]).status.code(), Some(2));
    assert_eq!(iontrap(&["simulate", "dft", "--traj", "x"]).status.code(), Some(2));
}
