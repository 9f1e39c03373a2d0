use std::path::Path;
use std::process::{Command, Output};

use fiolab::config::{ExperimentConfig, ExperimentKind, GridConfig, LevelRange};
use fiolab::io::{read_grid, write_grid};
use fiolab_core::{Complex64, GridFunction, GridSpec};

fn fiolab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiolab")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn sample(spec: GridSpec) -> GridFunction {
    GridFunction::from_fn(spec, |x| Complex64::new((-x[0] * x[0] - x[1] * x[1]).exp(), 0.0)).unwrap()
}

#[test]
fn selftest_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fiolab(&["selftest"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
    assert!(stdout(&out).lines().count() >= 40);
}

#[test]
fn scaling_writes_csv_and_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::default_for(ExperimentKind::Scaling);
    c.grid = GridConfig { n: 2, length: 4.0, samples: 256 };
    c.levels = LevelRange { min: 3, max: 5 };
    c.corpus.size = 4;
    std::fs::write(tmp.path().join("scaling.toml"), c.canonical_toml()).unwrap();
    let out = fiolab(
        &["scaling", "--config", "scaling.toml", "--n", "2", "--p", "2", "--m", "0", "--phase", "wave", "--out", "res"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("PASS upper_bound_ok[p=2]"));
    let csv = std::fs::read_to_string(tmp.path().join("res/scaling.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "corpus,p,m,j,ratio,log2_ratio,worst_member,config_hash");
    assert_eq!(lines.count(), 3);
    let summary = std::fs::read_to_string(tmp.path().join("res/scaling_summary.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(json["verdicts"]["upper_bound_ok[p=2]"], true);
}

#[test]
fn missing_config_is_reported_with_its_path() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fiolab(&["atoms", "--config", "nowhere/atoms.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nowhere/atoms.toml"), "{}", stderr(&out));
}

#[test]
fn config_for_another_experiment_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let c = ExperimentConfig::default_for(ExperimentKind::Atoms);
    std::fs::write(tmp.path().join("atoms.toml"), c.canonical_toml()).unwrap();
    let out = fiolab(&["scaling", "--config", "atoms.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("atoms"));
}

#[test]
fn usage_errors_exit_with_one_and_help_with_zero() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fiolab(&["frobnicate"], tmp.path()).status.code(), Some(1));
    assert_eq!(fiolab(&["scaling", "--p", "x"], tmp.path()).status.code(), Some(1));
    let help = fiolab(&["--help"], tmp.path());
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("sharpness-1d"));
}

#[test]
fn failed_verdict_exits_with_two() {
    // the N_env = 2 spread is far above its tolerance on the default grid
    let tmp = tempfile::tempdir().unwrap();
    let out = fiolab(&["cones", "--out", "res"], tmp.path());
    assert_eq!(out.status.code(), Some(2), "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("FAIL spread_ok[N_env=2]"));
    assert!(tmp.path().join("res/envelope.csv").exists());
    assert!(tmp.path().join("res/cone_directions.csv").exists());
}

#[test]
fn fio_apply_with_identity_operator_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let f = sample(GridSpec::new(2, 8.0, 32).unwrap());
    write_grid(&f, &tmp.path().join("f.bin")).unwrap();
    let out = fiolab(&["fio-apply", "f.bin", "g.bin", "--amplitude", "one", "--phase", "linear"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let g = read_grid(&tmp.path().join("g.bin")).unwrap();
    assert!(g.max_abs_diff(&f) < 1e-12);
}

#[test]
fn norm_and_decompose_read_stored_grids() {
    let tmp = tempfile::tempdir().unwrap();
    let f = sample(GridSpec::new(2, 8.0, 64).unwrap());
    write_grid(&f, &tmp.path().join("f.bin")).unwrap();
    let out = fiolab(&["norm", "f.bin", "--kind", "F", "--s", "0", "--p", "2", "--q", "2"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("kind,s,p,q,J,value"));
    let value: f64 = text.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(value.is_finite() && value > 0.0);

    let out = fiolab(&["decompose", "f.bin", "--out", "bands"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(tmp.path().join("bands/band_0.bin").exists());
    assert!(tmp.path().join("bands/cutoffs.csv").exists());
}
