use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FLAT: &str = r#"{"family": {"family": "Flat", "a": 1, "b": 2, "u_min": 0, "u_max": 1}}"#;
const PNMC2: &str =
    r#"{"family": {"family": "PNMC2", "a": 1, "c": 2, "kappa": 1, "f0": 1, "u_min": 0, "u_max": 1}}"#;

fn meridian(dir: &Path, config: Option<&str>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_meridian"));
    cmd.current_dir(dir).args(args);
    if let Some(text) = config {
        let path = dir.join("config.json");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn csv_column(path: &Path, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|rec| rec.unwrap()[idx].parse().unwrap()).collect()
}

#[test]
fn flat_generate_writes_mesh_and_zero_curvature_table() {
    let dir = TempDir::new().unwrap();
    let out = meridian(dir.path(), Some(FLAT), &["generate", "--format", "obj", "--out", "bundle"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = dir.path().join("bundle/surface.csv");
    let k = csv_column(&csv, "K");
    assert_eq!(k.len(), 2500);
    assert!(k.iter().all(|k| k.abs() <= 1e-12));
    let header = std::fs::read_to_string(&csv).unwrap().lines().next().unwrap().to_string();
    assert!(header.starts_with("u,v,x1,x2,x3,x4,E,F,G,K,Kperp,h1,h2,Hnormsq"));
    let obj = std::fs::read_to_string(dir.path().join("bundle/surface.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 2500);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 49 * 49);
}

#[test]
fn pnmc2_generate_has_parallel_normalized_mean_curvature() {
    let dir = TempDir::new().unwrap();
    let out = meridian(dir.path(), Some(PNMC2), &["generate", "--out", "."]);
    assert_eq!(code(&out), 0);
    let dh0 = csv_column(&dir.path().join("surface.csv"), "DH0_max");
    assert!(dh0.iter().all(|d| *d <= 1e-7), "{:?}", dh0.iter().cloned().fold(0.0, f64::max));
    assert!(stdout_json(&out)["max_dh0"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn single_row_grid_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"family": {"family": "Flat", "a": 1, "b": 2, "u_min": 0, "u_max": 1},
                  "grid": {"u_min": 0, "u_max": 1, "nu": 1, "v_min": 0, "v_max": 1, "nv": 10}}"#;
    let out = meridian(dir.path(), Some(cfg), &["generate"]);
    assert_eq!(code(&out), 2);
    assert!(!dir.path().join("surface.csv").exists());
}

#[test]
fn config_problems_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&meridian(dir.path(), None, &["verify"])), 2);
    assert_eq!(code(&meridian(dir.path(), Some("{not json"), &["verify"])), 2);
    assert_eq!(code(&meridian(dir.path(), Some(FLAT), &["verify", "--tol", "-1"])), 2);
    assert_eq!(code(&meridian(dir.path(), Some(FLAT), &["geomfuncs", "--format", "obj"])), 2);
    let no_chart = r#"{"pde": {"solution": "zero-separable", "system": "syst1"}}"#;
    assert_eq!(code(&meridian(dir.path(), Some(no_chart), &["pde"])), 2);
    let cmc = r#"{"family": {"family": "CMC", "a": 1, "b": 5, "c": 1, "f0": 1, "u_min": 0, "u_max": 1}}"#;
    assert_eq!(code(&meridian(dir.path(), Some(cmc), &["verify"])), 2);
}

#[test]
fn profile_leaving_its_domain_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"family": {"family": "Minimal", "a": 0, "b": 1, "u_min": 0, "u_max": 1.5}}"#;
    let out = meridian(dir.path(), Some(cfg), &["verify"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cmc_verify_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"family": {"family": "CMC", "a": 1, "b": 1, "c": 1, "f0": 1, "u_min": 0, "u_max": 1}}"#;
    let out = meridian(dir.path(), Some(cfg), &["verify"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdicts"][0]["property"], "|H| = 1");
    assert!(v["verdicts"][0]["max_violation"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["config"]["family"]["family"], "CMC");
}

#[test]
fn mismatched_directrix_fails_verification() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"family": {"family": "Minimal", "a": 0, "b": 1, "u_min": -0.9, "u_max": 0.9},
                  "directrix": "const:2"}"#;
    let out = meridian(dir.path(), Some(cfg), &["verify", "--out", "report"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert!(v["verdicts"][0]["max_violation"].as_f64().unwrap() > 1.0);
    assert!(dir.path().join("report/verdict.json").exists());
}

#[test]
fn parallel_h1_passes_both_checks() {
    let dir = TempDir::new().unwrap();
    let cfg = format!(
        r#"{{"family": {{"family": "ParallelH1", "a": 1, "c": 0, "f0": {}, "u_min": 0, "u_max": 1}}}}"#,
        0.1f64.cosh()
    );
    let out = meridian(dir.path(), Some(&cfg), &["verify"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert_eq!(verdicts[0]["property"], "DH = 0");
    assert_eq!(verdicts[1]["property"], "|H| = 1");
    assert!(verdicts.iter().all(|x| x["pass"] == true));
}

/// Fails: eq3 keeps the factor `R^2 (R - 1) / f^4` with `R = 2` for this solution.
#[test]
fn example1_satisfies_syst1() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"pde": {"solution": "example1", "system": "syst1", "kappa": "sin-offset:2"}}"#;
    let out = meridian(dir.path(), Some(cfg), &["pde"]);
    let v = stdout_json(&out);
    assert_eq!(code(&out), 0, "{}", v["report"]["rows"]);
}

#[test]
fn example1_with_wrong_epsilon_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"pde": {"solution": "example1", "system": "fund", "epsilon": 1}}"#;
    let out = meridian(dir.path(), Some(cfg), &["pde"]);
    assert_eq!(code(&out), 1);
    assert!(stdout_json(&out)["report"]["rows"][2]["max_abs"].as_f64().unwrap() >= 0.1);
}

#[test]
fn degenerate_system_accepts_the_separable_solution() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"pde": {"solution": "zero-separable", "system": "degenerate"}}"#;
    let out = meridian(dir.path(), Some(cfg), &["pde", "--out", "r"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r/residual.json")).unwrap()).unwrap();
    assert_eq!(v["report"]["pass"], true);
    assert_eq!(v["config"]["pde"]["solution"], "zero-separable");
}

#[test]
fn unit_radius_family_and_scaled_chart_pass_syst1() {
    let dir = TempDir::new().unwrap();
    let unit = r#"{"pde": {"solution": "family(0,1)", "system": "syst1"}}"#;
    assert_eq!(code(&meridian(dir.path(), Some(unit), &["pde"])), 0);
    let scaled = format!(r#"{{"pde": {{"solution": "example2", "system": "syst1", "chart_scale": {}}}}}"#, 5f64.sqrt());
    assert_eq!(code(&meridian(dir.path(), Some(&scaled), &["pde"])), 0);
}

#[test]
fn geomfuncs_writes_all_nine_functions() {
    let dir = TempDir::new().unwrap();
    let out = meridian(dir.path(), Some(PNMC2), &["geomfuncs"]);
    // gamma1 disagrees with its closed form, so the comparison reports a failure
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    let diffs = v["closed_form"]["max_abs_diff"].as_array().unwrap();
    assert_eq!(diffs.len(), 9);
    for d in &diffs[1..] {
        assert!(d[1].as_f64().unwrap() <= 1e-9, "{d}");
    }
    let beta = csv_column(&dir.path().join("geomfuncs.csv"), "beta1");
    assert!(beta.iter().all(|b| b.abs() <= 1e-8));
}

#[test]
fn export_json_echoes_the_config_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"family": {"family": "ParallelH2", "a": 2, "kappa": 3, "u_min": 0, "u_max": 1},
                  "grid": {"u_min": 0, "u_max": 1, "nu": 5, "v_min": 0, "v_max": 1, "nv": 4}}"#;
    let a = meridian(dir.path(), Some(cfg), &["export", "--format", "json", "--out", "a"]);
    let b = meridian(dir.path(), Some(cfg), &["export", "--format", "json", "--out", "b"]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    let ja = std::fs::read(dir.path().join("a/surface.json")).unwrap();
    assert_eq!(ja, std::fs::read(dir.path().join("b/surface.json")).unwrap());
    let v: Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["config"]["family"]["family"], "ParallelH2");
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);
}

#[test]
fn thread_cap_is_validated() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str| {
        let path = dir.path().join("config.json");
        std::fs::write(&path, FLAT).unwrap();
        Command::new(env!("CARGO_BIN_EXE_meridian"))
            .current_dir(dir.path())
            .env("MERIDIAN_THREADS", threads)
            .args(["verify", "--config"])
            .arg(&path)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    assert_eq!(code(&run("zero")), 2);
}

#[test]
fn selfcheck_prints_one_row_per_check() {
    let dir = TempDir::new().unwrap();
    let out = meridian(dir.path(), None, &["selfcheck"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    for ac in 1..=10 {
        assert!(text.contains(&format!("AC{ac} ")), "missing AC{ac}");
    }
    let failed = text.lines().any(|l| l.contains("FAIL]"));
    assert_eq!(code(&out), if failed { 1 } else { 0 });
}
