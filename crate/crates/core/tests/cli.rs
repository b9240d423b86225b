use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_svdmimo");

fn svdmimo(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

#[test]
fn bounds_json_matches_oracle() {
    let out = svdmimo(&["bounds", "--n", "8", "--m", "8", "--alpha", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["upper"].as_f64().unwrap() - 15.458_133_327).abs() < 1e-6);
    assert!((v["lower"].as_f64().unwrap() - 15.253_663_334).abs() < 1e-6);
    assert!(v["upper_err"].as_f64().unwrap() <= 1e-8);
    assert!(v["lower_err"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn bounds_csv_has_nine_digit_fields() {
    let out = svdmimo(&["bounds", "--n", "1", "--m", "1", "--alpha", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,alpha,upper,lower,upper_err,lower_err"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], &["1", "1", "4"]);
    assert_eq!(row[3], "2.46933768");
    assert_eq!(row[4], "1.65965046");
}

#[test]
fn stream_count_above_antennas_is_rejected() {
    let out = svdmimo(&["bounds", "--n", "4", "--m", "8", "--alpha", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("m <= N"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_flag_and_bad_values_exit_two() {
    for args in [
        vec!["bounds", "--n", "4", "--m", "2", "--alpha", "4", "--bogus"],
        vec!["simulate", "--n", "4", "--m", "2", "--alpha", "4", "--mode", "exact"],
        vec!["sweep", "--figure", "fig3"],
        vec!["eigen", "--n", "0"],
        vec!["simulate", "--n", "2", "--m", "1", "--alpha", "4", "--interferers", "0"],
    ] {
        let out = svdmimo(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn simulate_is_byte_identical_when_repeated() {
    let args = ["simulate", "--n", "1", "--m", "1", "--alpha", "4", "--drops", "10000", "--seed", "42"];
    let a = svdmimo(&args);
    let b = svdmimo(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["drops"], 10000);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["per_stream_sir_db_mean"].as_array().unwrap().len(), 1);
}

#[test]
fn different_seeds_differ() {
    let base = ["simulate", "--n", "2", "--m", "2", "--alpha", "4", "--drops", "500"];
    let a = svdmimo(&[&base[..], &["--seed", "1"]].concat());
    let b = svdmimo(&[&base[..], &["--seed", "2"]].concat());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn simulate_csv_columns() {
    let out = svdmimo(&["simulate", "--n", "3", "--m", "2", "--alpha", "3.5", "--drops", "200", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,m,alpha,lambda,interferers,drops,seed,se_mean,ci95,sir_db_1,sir_db_2"
    );
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn single_drop_leaves_interval_blank() {
    let out = svdmimo(&["simulate", "--n", "2", "--m", "1", "--alpha", "4", "--drops", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["ci95"].is_null());
}

#[test]
fn eigen_table_shape() {
    let out = svdmimo(&["eigen", "--n", "4", "--samples", "500"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,i,approx,empirical,ci95");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("4,1,"));
}

#[test]
fn sweep_writes_figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested");
    let out = svdmimo(&[
        "sweep", "--figure", "fig2b", "--drops", "200", "--interferers", "40", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let rows = std::fs::read_to_string(path.join("fig2b.csv")).unwrap();
    assert_eq!(rows.lines().next().unwrap(), "alpha,n,m,upper,lower,sim_mean,sim_ci95");
    assert_eq!(rows.lines().count(), 1 + 24);
    let optima = std::fs::read_to_string(path.join("fig2b_optima.csv")).unwrap();
    assert_eq!(optima.lines().next().unwrap(), "alpha,n,m_star,se_at_m_star");
    assert_eq!(optima.lines().count(), 4);
}

#[test]
fn sweep_without_simulation_leaves_columns_empty() {
    let out = svdmimo(&["sweep", "--figure", "fig2a", "--no-sim"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 24);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",,")));
}

#[test]
fn sweep_json_round_trips() {
    let out = svdmimo(&["sweep", "--figure", "fig2a", "--no-sim", "--format", "json"]);
    let rows: Vec<svdmimo::experiments::SweepRow> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 24);
    let again = serde_json::to_string_pretty(&rows).unwrap() + "\n";
    assert_eq!(again.as_bytes(), &out.stdout[..]);
}

#[test]
fn unwritable_output_reports_path() {
    let out = svdmimo(&["bounds", "--n", "2", "--m", "1", "--alpha", "4", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("/nonexistent-dir/x.json"));
}

#[test]
fn help_documents_defaults() {
    let out = svdmimo(&["sweep", "--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["--figure", "--drops", "default: 10000", "--threads", "default: 0", "--tol", "default: 0.00000001"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
}
