use std::process::{Command, Output};

use finite_jj::table::{Format, SweepTable};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finite-jj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn bands_row_and_column_contract() {
    let o = run(&[
        "bands", "--pairs", "10", "--ejec", "0.2", "--from", "-11", "--to", "11", "--steps", "441", "--levels", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "n_g,E0,E1,E2");
    let t = SweepTable::from_csv(&text).unwrap();
    assert_eq!(t.len(), 441);
    assert_eq!(t.grid[0], -11.0);
    assert_eq!(t.grid[440], 11.0);
    assert_eq!(t.meta["pairs_total"], Value::from(10));
    assert_eq!(t.meta["e_j"], Value::from(0.2));
    assert!(stderr(&o).starts_with("bands: 441 points"));
}

#[test]
fn bands_are_symmetric_in_offset_charge() {
    let o = run(&[
        "bands", "--pairs", "7", "--ejec", "3", "--from", "-4", "--to", "4", "--steps", "33", "--levels", "2",
    ]);
    let t = SweepTable::from_csv(&stdout(&o)).unwrap();
    for name in ["E0", "E1"] {
        let c = t.column(name).unwrap();
        for i in 0..c.len() {
            assert!((c[i] - c[c.len() - 1 - i]).abs() < 1e-10 * c[i].abs().max(1.0));
        }
    }
}

#[test]
fn json_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chi.json");
    let o = run(&[
        "susceptibility",
        "--pairs",
        "10",
        "--ejec",
        "0.2",
        "--from",
        "-1",
        "--to",
        "1",
        "--steps",
        "5",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("susceptibility: 5 points"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["grid"].as_array().unwrap().len(), 5);
    assert!(doc["columns"]["chi"].is_array());
    assert!(doc["meta"]["window_policy"]["mode"].is_string());
    let t = SweepTable::read(&path, Format::Json).unwrap();
    assert_eq!(t.column("n_expect").unwrap().len(), 5);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "imbalance",
        "--pairs",
        "40",
        "--ejec",
        "5",
        "--from",
        "-3",
        "--to",
        "3",
        "--steps",
        "61",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["wick-verify", "--count", "20", "--seed", "9"]);
    let d = run(&["wick-verify", "--count", "20", "--seed", "9"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn transmon_shift_worked_example() {
    let o = run(&[
        "transmon-shift",
        "--ej-ghz",
        "10",
        "--ec-ghz",
        "0.2",
        "--pairs",
        "5e8",
        "--ng",
        "1e6",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stderr(&o);
    assert!(summary.contains("-8.00"), "{summary}");
}

#[test]
fn validity_report() {
    let o = run(&["validity", "--material", "aluminum", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let n_min = doc["report"]["n_min"].as_f64().unwrap();
    assert!((n_min / 1.0e4 - 1.0).abs() < 0.05, "{n_min}");
}

#[test]
fn validity_reads_preset_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("al.txt");
    std::fs::write(&path, finite_jj::MaterialProps::aluminum().to_preset()).unwrap();
    let o = run(&["validity", "--preset-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("N_min = 1.04"));
}

#[test]
fn curvature_scan_table() {
    let o = run(&[
        "curvature",
        "--kind",
        "susceptibility",
        "--scan",
        "ejec",
        "--pairs",
        "20",
        "--values",
        "10,20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = SweepTable::from_csv(&stdout(&o)).unwrap();
    assert_eq!(t.grid, vec![10.0, 20.0]);
    for name in ["numeric", "analytic", "ratio"] {
        assert!(t.column(name).is_some());
    }
}

#[test]
fn analytic_reports_each_formula() {
    let o = run(&[
        "analytic",
        "--pairs",
        "400",
        "--ejec",
        "50",
        "--ng",
        "40",
        "--format",
        "json",
        "--first-order",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in [
        "cpb_gap",
        "cpb_susceptibility",
        "epsilon",
        "u_plus",
        "transmon_frequency",
        "transmon_susceptibility",
        "first_order_frequency",
    ] {
        assert!(doc["columns"][key].is_array(), "missing {key}");
    }
}

#[test]
fn wick_verify_passes() {
    let o = run(&["wick-verify", "--count", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS"));
}

#[test]
fn parameter_errors_exit_one_and_name_the_flag() {
    let o = run(&[
        "bands", "--pairs", "0", "--ejec", "1", "--from", "-1", "--to", "1", "--steps", "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--pairs"));
    let o = run(&[
        "bands", "--pairs", "10", "--ejec", "1", "--from", "1", "--to", "-1", "--steps", "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--from"));
    let o = run(&[
        "bands", "--pairs", "10", "--ejec", "1", "--from", "-1", "--to", "1", "--steps", "3", "--levels", "12",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--levels"));
    let o = run(&["validity", "--material", "unobtainium"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_two() {
    let o = run(&[
        "imbalance",
        "--pairs",
        "5e8",
        "--ejec",
        "50",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "2",
        "--w-max",
        "4",
        "--rtol",
        "1e-15",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("not converged"));
}
