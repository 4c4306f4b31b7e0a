//! End-to-end tests of the `lgfield` binary: output formats, exit codes,
//! and the sidecar round trip.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lgfield"))
}

fn recipes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../recipes")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn vacuum_compute_config() -> &'static str {
    r#"{
        "model": { "variant": "scalar3d", "L": 1.0 },
        "state": { "xi": 0.0, "ell": 1.0, "alpha": 0.0, "r": 0.0, "theta": 0.0 },
        "scheme": { "type": "sign_threshold", "reference": "zero" },
        "query": { "s1": 1, "s2": 1, "t1": 0.0, "t2": 25.0 },
        "time_unit": "natural"
    }"#
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn compute_emits_single_json_object() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", vacuum_compute_config());
    let out = run(bin().args(["compute", "--config"]).arg(&cfg));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    let q = v["q"].as_f64().unwrap();
    assert!((q - 0.25).abs() < 2e-3, "vacuum wide separation: q = {q}");
    assert!(v["est_error"].as_f64().unwrap() >= 0.0);
    assert!(v["kernels"]["a1"][0].as_f64().unwrap() > 0.0);
    assert_eq!(v["engine_used"], "polar");
}

#[test]
fn malformed_config_exits_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = vacuum_compute_config().replace("\"L\": 1.0", "\"L\": -1.0");
    let cfg = write_config(dir.path(), "bad.json", &bad);
    let out = run(bin().args(["compute", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("model.L"), "diagnostic: {err}");
    // unknown keys are rejected too
    let bad = vacuum_compute_config().replace("\"time_unit\"", "\"time_unitx\"");
    let cfg = write_config(dir.path(), "bad2.json", &bad);
    let out = run(bin().args(["compute", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(2));
    // invalid sign value
    let bad = vacuum_compute_config().replace("\"s1\": 1", "\"s1\": 2");
    let cfg = write_config(dir.path(), "bad3.json", &bad);
    let out = run(bin().args(["compute", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_3_naming_engine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_text = vacuum_compute_config().replace(
        "\"time_unit\": \"natural\"",
        r#""time_unit": "natural",
        "quadrature": { "engine": "cartesian", "abs_tol": 1e-16, "rel_tol": 1e-16, "max_subdiv": 4 }"#,
    );
    let cfg = write_config(dir.path(), "tight.json", &cfg_text);
    let out = run(bin().args(["compute", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("numeric failure"), "stderr: {err}");
}

#[test]
fn kernels_dump_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", vacuum_compute_config());
    let out = run(bin().args(["kernels", "--config"]).arg(&cfg));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let a = v["a1"][0].as_f64().unwrap();
    // vacuum: a1 = 1/(4 pi^2 L^2)
    assert!((a - 0.025330295910584444).abs() < 1e-15);
    let det = v["det"][0].as_f64().unwrap();
    assert!(det.is_finite());
}

#[test]
fn scan_smoke_grid_and_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_text = r#"{
        "model": { "variant": "scalar3d", "L": 1.0 },
        "state": { "xi": 0.0, "ell": 1.0, "alpha": 0.0, "r": 0.0, "theta": 0.0 },
        "scheme": { "type": "sign_threshold", "reference": "zero" },
        "query": { "s1": 1, "s2": 1, "t1": 0.0, "t2": 20.0 },
        "scan": {
            "x": { "parameter": "ellL", "min": 0.8, "max": 1.2, "n": 2 },
            "y": { "parameter": "ellT2", "min": 20.0, "max": 30.0, "n": 2 }
        }
    }"#;
    let cfg = write_config(dir.path(), "smoke.json", cfg_text);
    let csv = dir.path().join("smoke.csv");
    let out = run(bin().args(["scan", "--config"]).arg(&cfg).arg("--out").arg(&csv));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "header + 4 data rows");
    assert_eq!(lines[0], "x_value,y_value,q,est_error,robust_negative");
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 5);
        let q: f64 = cols[2].parse().unwrap();
        assert!((q - 0.25).abs() < 2e-3, "{q}");
        assert!(cols[4] == "0" || cols[4] == "1");
    }
    assert!(dir.path().join("smoke.json").exists());
}

#[test]
fn sidecar_recipe_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    // a small but non-trivial slice of the coherent violation region
    let cfg_text = r#"{
        "model": { "variant": "scalar3d", "L": 1.0 },
        "state": { "xi": 8.0, "ell": 1.0, "alpha": 0.0, "r": 0.0, "theta": 0.0 },
        "scheme": { "type": "sign_threshold", "reference": "zero" },
        "query": { "s1": -1, "s2": 1, "t1": 0.0, "t2": 1.0 },
        "scan": {
            "x": { "parameter": "ellL", "min": 2.5, "max": 3.5, "n": 5 },
            "y": { "parameter": "ellT2", "min": 1.0, "max": 3.0, "n": 6 }
        }
    }"#;
    let cfg = write_config(dir.path(), "slice.json", cfg_text);
    let csv1 = dir.path().join("first.csv");
    let out = run(bin().args(["scan", "--config"]).arg(&cfg).arg("--out").arg(&csv1));
    assert!(out.status.success());
    // extract the canonical recipe from the sidecar and re-run it
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("first.json")).unwrap()).unwrap();
    let recipe = serde_json::to_string_pretty(&sidecar["recipe"]).unwrap();
    let cfg2 = write_config(dir.path(), "recipe.json", &recipe);
    let csv2 = dir.path().join("second.csv");
    let out = run(bin().args(["scan", "--config"]).arg(&cfg2).arg("--out").arg(&csv2));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&csv1).unwrap(), fs::read(&csv2).unwrap());
    // and a repeated run of the original is bit-identical as well
    let csv3 = dir.path().join("third.csv");
    let out = run(bin().args(["scan", "--config"]).arg(&cfg).arg("--out").arg(&csv3));
    assert!(out.status.success());
    assert_eq!(fs::read(&csv1).unwrap(), fs::read(&csv3).unwrap());
}

#[test]
fn compute_reports_window_violation_point() {
    // 3D squeezed window at its optimum: q_{1,1}(0, ~1.05 L) < -0.03
    let dir = tempfile::tempdir().unwrap();
    let cfg_text = r#"{
        "model": { "variant": "scalar3d", "L": 1.0 },
        "state": { "xi": 0.0, "ell": 1.0, "alpha": 0.0, "r": 0.3, "theta": 0.0 },
        "scheme": { "type": "window_band", "w": 0.22 },
        "query": { "s1": 1, "s2": 1, "t1": 0.0, "t2": 1.05 },
        "time_unit": "coarse_length"
    }"#;
    let cfg = write_config(dir.path(), "fig3pt.json", cfg_text);
    let out = run(bin().args(["compute", "--config"]).arg(&cfg));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let q = v["q"].as_f64().unwrap();
    assert!(q < -0.03, "window optimum q = {q}");
}

#[test]
fn partial_scan_failures_respect_allow_partial() {
    // an axis that reaches invalid parameter values (r < 0) fails exactly
    // those cells
    let dir = tempfile::tempdir().unwrap();
    let cfg_text = r#"{
        "model": { "variant": "scalar3d", "L": 1.0 },
        "state": { "xi": 0.0, "ell": 1.0, "alpha": 0.0, "r": 0.0, "theta": 0.0 },
        "scheme": { "type": "sign_threshold", "reference": "zero" },
        "query": { "s1": 1, "s2": 1, "t1": 0.0, "t2": 2.0 },
        "scan": {
            "x": { "parameter": "r", "min": -0.4, "max": 0.4, "n": 4 },
            "y": { "parameter": "ellT2", "min": 1.0, "max": 2.0, "n": 2 }
        }
    }"#;
    let cfg = write_config(dir.path(), "partial.json", cfg_text);
    let csv = dir.path().join("p.csv");
    let out = run(bin().args(["scan", "--config"]).arg(&cfg).arg("--out").arg(&csv));
    assert_eq!(out.status.code(), Some(3), "partial failure must exit 3");
    let out = run(bin()
        .args(["scan", "--allow-partial", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&csv));
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let nan_rows = text.lines().filter(|l| l.contains("NaN")).count();
    assert_eq!(nan_rows, 4, "two invalid r columns, two rows each");
}

#[test]
fn engine_flag_switches_engine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", vacuum_compute_config());
    let out = run(bin()
        .args(["compute", "--engine", "cartesian", "--config"])
        .arg(&cfg));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["engine_used"], "cartesian");
}

#[test]
fn recipes_parse_and_resolve() {
    for entry in fs::read_dir(recipes()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["scan"].is_object(), "{path:?} must carry a scan block");
    }
}

#[test]
fn verify_quick_passes_from_cli() {
    let out = run(bin().args(["verify", "quick", "--seed", "7"]));
    assert!(
        out.status.success(),
        "verify quick failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS]"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn scan_without_axes_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", vacuum_compute_config());
    let csv = dir.path().join("x.csv");
    let out = run(bin().args(["scan", "--config"]).arg(&cfg).arg("--out").arg(&csv));
    assert_eq!(out.status.code(), Some(2));
}
