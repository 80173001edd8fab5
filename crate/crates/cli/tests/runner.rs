use std::process::Command;

use vecnet_cli::{
    emit_report, presets, read_csv, read_report, run_experiment, CliError, ExperimentConfig,
    OutputPaths, CSV_COLUMNS,
};

fn quick(name: &str) -> ExperimentConfig {
    let mut cfg = presets::preset(name).unwrap();
    cfg.epsilons = vec![0.2];
    cfg
}

fn header(path: &std::path::Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(String::from).collect()
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = quick("sequence_sin");
    cfg.epsilons.clear();
    let exp = run_experiment(&cfg).unwrap();
    let paths = OutputPaths::in_dir(dir.path(), false);
    emit_report(&exp.report, &exp.networks, &paths).unwrap();
    assert_eq!(header(&paths.csv), CSV_COLUMNS);
    assert!(read_csv(&paths.csv).unwrap().is_empty());
    assert!(read_report(&paths.json).unwrap().runs.is_empty());
}

#[test]
fn one_run_gives_one_row_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let exp = run_experiment(&quick("sin_of_trace")).unwrap();
    let paths = OutputPaths::in_dir(dir.path(), true);
    emit_report(&exp.report, &exp.networks, &paths).unwrap();

    let rows = read_csv(&paths.csv).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(header(&paths.csv), CSV_COLUMNS);
    assert_eq!(rows, vecnet_cli::report::csv_rows(&exp.report));
    assert_eq!(read_report(&paths.json).unwrap(), exp.report);

    let doc = std::fs::read_to_string(dir.path().join("networks/run_000.json")).unwrap();
    let net: vecnet::Network = vecnet::deserialize_network(&doc).unwrap();
    assert_eq!(net, exp.networks[0]);
}

#[test]
fn sweep_rows_are_epsilons_times_members() {
    let mut cfg = presets::preset("superposition_sin").unwrap();
    cfg.target_seminorm = None;
    cfg.ensemble.samples = 60;
    cfg.epsilons = vec![0.4, 0.3, 0.25];
    let exp = run_experiment(&cfg).unwrap();
    let rows = vecnet_cli::report::csv_rows(&exp.report);
    assert_eq!(rows.len(), 6);
    let order: Vec<(f64, &str)> = rows
        .iter()
        .map(|r| (r.epsilon, r.seminorm.as_str()))
        .collect();
    assert_eq!(order[0], (0.4, "L2"));
    assert_eq!(order[1], (0.4, "sup|D^0|"));
    assert_eq!(order[5], (0.25, "sup|D^0|"));
}

#[test]
fn identical_config_and_seed_reproduce_report() {
    let cfg = quick("integral_gaussian");
    let a = run_experiment(&cfg).unwrap().report.without_timing();
    let b = run_experiment(&cfg).unwrap().report.without_timing();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );

    let mut other = cfg.clone();
    other.seed += 1;
    let c = run_experiment(&other).unwrap().report.without_timing();
    assert_ne!(a.runs, c.runs);
}

#[test]
fn unwritable_path_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let exp = run_experiment(&quick("zero_operator")).unwrap();
    let err = emit_report(
        &exp.report,
        &exp.networks,
        &OutputPaths::in_dir(&blocker.join("sub"), false),
    )
    .unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
    assert!(err.to_string().contains("file"), "{err}");
}

fn vecnet_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vecnet"))
}

#[test]
fn binary_lists_presets() {
    let out = vecnet_bin().args(["presets", "list"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in presets::names() {
        assert!(text.contains(name));
    }
}

#[test]
fn binary_runs_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, quick("poisson_1d").to_json()).unwrap();
    let out_dir = dir.path().join("out");
    let status = vecnet_bin()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .args(["--seed", "7", "--threads", "2", "--out"])
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let report = read_report(&out_dir.join("report.json")).unwrap();
    assert_eq!(report.seed, 7);
    assert_eq!(read_csv(&out_dir.join("report.csv")).unwrap().len(), 1);
}

#[test]
fn binary_rejects_bad_config_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.json");
    let mut cfg = quick("poisson_1d");
    cfg.held_out_fraction = 1.5;
    std::fs::write(&cfg_path, cfg.to_json()).unwrap();
    let out = vecnet_bin()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("held_out_fraction"));

    let missing = dir.path().join("missing.json");
    let out = vecnet_bin()
        .args(["run", "--config"])
        .arg(&missing)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));

    let out = vecnet_bin()
        .args(["run", "--preset", "nope"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
