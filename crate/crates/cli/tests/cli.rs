use std::path::Path;
use std::process::{Command, Output};

fn hqc(args: &[&str], out: &Path, config: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hqc"));
    cmd.args(args).arg("--out").arg(out);
    if let Some(text) = config {
        let path = out.with_extension("json");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn report(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn verify_group_filter_runs_only_group_checks() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("v");
    let o = hqc(&["verify", "--filter", "group"], &out, Some(r#"{"verify": {"group_cases": 500, "bracket_points": 20}}"#));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = report(&out, "verify_report.json");
    let checks = rep["report"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["name"].as_str().unwrap().starts_with("group.")));
    assert_eq!(rep["report"]["passed"], true);
}

#[test]
fn default_verify_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hqc(&["verify"], &tmp.path().join("v"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unknown_filter_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hqc(&["verify", "--filter", "nothing"], &tmp.path().join("v"), None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_config_exits_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("bad");
    let o = hqc(&["flow"], &out, Some(r#"{"quadrature": {"fd_step": -1.0}}"#));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("hqc: "));
    let o = hqc(&["flow"], &out, Some(r#"{"no_such_section": 1}"#));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flow_writes_one_row_per_step() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("f");
    let o = hqc(&["flow"], &out, Some(r#"{"flow": {"steps": 40, "strain_resolution": 4, "dilatation_points": 2}}"#));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(out.join("trajectory.csv")).unwrap();
    let headers = r.headers().unwrap().clone();
    assert_eq!(&headers[0], "sigma");
    assert_eq!(&headers[headers.len() - 3], "config_hash");
    assert_eq!(r.records().count(), 41);
    let rep = report(&out, "flow_report.json");
    assert_eq!(rep["meta"]["command"], "flow");
}

#[test]
fn iterate_without_density_has_unit_spread() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("i");
    let cfg = r#"{"iteration": {"measure": {"measure": {"atoms": []}, "mollify": null}, "report_points": 50,
        "params": {"m": 1, "potential_grid": {"radius": 3.0, "nodes": 9}, "jacobian_grid": {"radius": 4.5, "nodes": 9}}}}"#;
    let o = hqc(&["iterate"], &out, Some(cfg));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let spread = report(&out, "iteration_report.json")["report"]["spread"].as_f64().unwrap();
    assert!((spread - 1.0).abs() < 1e-9, "{spread}");
}

#[test]
fn metric_reports_pairs_and_vertical_length() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("m");
    let o = hqc(&["metric"], &out, Some(r#"{"metric": {"pairs": 4, "weighted": false}, "quadrature": {"mc_samples": 500}}"#));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = report(&out, "metric_report.json");
    assert_eq!(rep["report"]["pairs"], 4);
    let l = rep["report"]["vertical_length"]["lengths"].as_array().unwrap();
    assert!((l[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn config_subcommand_prints_effective_config() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hqc(&["config", "--seed", "11"], &tmp.path().join("c"), None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["quadrature"]["rng_seed"], 11);
}
