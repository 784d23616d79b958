use std::process::{Command, Output};

use einstein_gap::geography::{fermat_family_catalog, CatalogRow, CATALOG_FIELDS};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_einstein-gap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["catalog", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["check", "--chi", "1"])), 1);
    assert_eq!(code(&run(&["catalog", "--format", "yaml"])), 1);
}

#[test]
fn catalog_csv_header_and_rows() {
    let o = run(&["catalog", "--j-max", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], CATALOG_FIELDS.join(","));
    assert_eq!(lines[1], "1,5,55,-35,5,4,4,59,-39,1,true");
}

#[test]
fn catalog_single_row_is_the_quintic() {
    let o = run(&["catalog", "--j-max", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<CatalogRow> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].m, rows[0].k_min), (5, 4));
}

#[test]
fn catalog_json_round_trips() {
    let o = run(&["catalog", "--j-max", "20", "--format", "json"]);
    let rows: Vec<CatalogRow> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows, fermat_family_catalog(20).unwrap());
}

#[test]
fn catalog_rejects_zero_j_max() {
    let o = run(&["catalog", "--j-max", "0"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn catalog_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("einstein-gap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.csv");
    let o = run(&[
        "catalog",
        "--j-max",
        "3",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);
    let bad = run(&[
        "catalog",
        "--output",
        dir.join("missing/x.csv").to_str().unwrap(),
    ]);
    assert_eq!(code(&bad), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_quintic_blowup() {
    let o = run(&["check", "--chi", "59", "--tau", "-39", "--k", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(
        text.contains("obstructed; strict Hitchin-Thorpe holds (margin 1)"),
        "{text}"
    );
    assert!(text.contains("5 × 32π²"), "{text}");
}

#[test]
fn check_blown_up_k3_is_not_applicable() {
    let o = run(&["check", "--chi", "25", "--tau", "-17", "--k", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("not applicable: 2χ+3τ+k = 0, X not general type"));
}

#[test]
fn check_without_blowups_reports_only_hitchin_thorpe() {
    let o = run(&[
        "check", "--chi", "108", "--tau", "-64", "--k", "0", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["hitchin_thorpe"]["verdict"], "StrictlySatisfied");
    assert!(v.get("obstruction").is_none());
    assert!(v["verdict"].as_str().unwrap().contains("requires k > 0"));
}

#[test]
fn check_betti() {
    let o = run(&[
        "check", "--chi", "55", "--tau", "-35", "--betti", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (
            v["betti"]["b_plus"].as_i64(),
            v["betti"]["b_minus"].as_i64()
        ),
        (Some(9), Some(44))
    );
    assert_eq!(
        code(&run(&["check", "--chi", "3", "--tau", "0", "--betti"])),
        1
    );
}

#[test]
fn lattice_verify_sweep() {
    let o = run(&[
        "lattice-verify",
        "--trials",
        "1000",
        "--k",
        "4",
        "--c1sq",
        "5",
        "--seed",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"], 0);
    assert_eq!(v["inconsistencies"], 0);
    assert!(v["min_gap"].as_f64().unwrap() > 0.0);
}

#[test]
fn lattice_verify_standard_polarization_is_equality() {
    let o = run(&[
        "lattice-verify",
        "--trials",
        "20",
        "--boost-scale",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equality_candidates"], 20);
}

#[test]
fn lattice_verify_rejects_bad_parameters() {
    assert_eq!(code(&run(&["lattice-verify", "--trials", "0"])), 1);
    assert_eq!(code(&run(&["lattice-verify", "--tolerance", "0"])), 1);
    assert_eq!(code(&run(&["lattice-verify", "--c1sq", "0"])), 1);
}

#[test]
fn glue_lab_needs_four_scales() {
    let o = run(&["glue-lab", "--t", "0.5"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["glue-lab", "--resolution", "8,4"])), 1);
}

#[test]
fn glue_lab_is_reproducible_and_exit_code_tracks_checks() {
    let args = ["glue-lab", "--t", "0.4,0.2,0.1,0.05"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_einstein-gap"))
        .args(args)
        .env("EINSTEIN_GAP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // Field order as emitted, which `Value` does not preserve.
    let text = stdout(&a);
    let first_row = &text[text.find("\"rows\"").unwrap()..];
    let positions: Vec<usize> = [
        "\"t\"",
        "\"norm0\"",
        "\"norm1\"",
        "\"norm2\"",
        "\"max_abs_s\"",
        "\"annulus_integral\"",
        "\"burns_region_integral\"",
    ]
    .iter()
    .map(|k| first_row.find(k).unwrap())
    .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(rows[0].as_object().unwrap().len(), 7);
    let e = &v["exponents"];
    assert!((e["norm0"].as_f64().unwrap() - 2.0).abs() < 0.3);
    assert!((e["norm1"].as_f64().unwrap() - 1.0).abs() < 0.3);
    assert!(e["norm2"].as_f64().unwrap().abs() < 0.3);
    assert!(e["annulus_integral"].as_f64().unwrap() >= 3.5);
    let all_passed = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true);
    assert_eq!(code(&a), if all_passed { 0 } else { 2 });
}

#[test]
fn glue_lab_passes_in_the_asymptotic_range() {
    let o = run(&["glue-lab", "--t", "0.2,0.1,0.05,0.025", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(
        text.starts_with("t,norm0,norm1,norm2,max_abs_s,annulus_integral,burns_region_integral\n")
    );
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_einstein-gap"))
        .args(["catalog", "--j-max", "1"])
        .env("EINSTEIN_GAP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}
