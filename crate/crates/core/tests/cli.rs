//! End-to-end runs of the `evenscalar` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evenscalar"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn evenscalar")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

const UNFORCED: &str = r#"{"scheme":"unforced","lambda0":4,"b":1.5,"beta":0.5,"alpha":0.4,"gamma":0.5,
"c0_min":1,"annulus_lo":4,"annulus_hi":6,"grid_n":256,"q_max":1,"symbol":"k1","seed":0,"lambda0_test":4,
"flags":{"force_infeasible":true,"emit_fields":false,"emit_spectra":false}}"#;

#[test]
fn zero_levels_gives_empty_table_and_zero_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &UNFORCED.replace("\"q_max\":1", "\"q_max\":0"));
    let out = dir.path().join("run");
    let o = run(&["run-unforced", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let steps = fs::read_to_string(out.join("steps.csv")).unwrap();
    assert_eq!(steps.lines().count(), 1);
    assert!(steps.starts_with("q,lambda,delta,r,c0,xnorm_G,xnorm_Gt,sup_G,besov_f_alpha,sup_W,"));
    let theta = fs::read(out.join("theta.bin")).unwrap();
    assert_eq!(theta.len(), 256 * 256 * 8);
    assert!(theta.iter().all(|b| *b == 0));
    for f in ["config.json", "summary.json", "residuals.csv", "ledger.csv", "theta.bin.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", UNFORCED);
    let mut outs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let o = run(&["run-unforced", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
        assert!(o.status.success());
        outs.push(out);
    }
    for f in ["steps.csv", "ledger.csv", "residuals.csv", "summary.json", "theta.bin"] {
        assert_eq!(fs::read(outs[0].join(f)).unwrap(), fs::read(outs[1].join(f)).unwrap(), "{f}");
    }
    let steps = fs::read_to_string(outs[0].join("steps.csv")).unwrap();
    let row: Vec<&str> = steps.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 18);
    assert_eq!(row[0], "1");
    assert_eq!(row[1], "8");
    // xnorm_Gt and runtime_s are absent for an untimed unforced run
    assert_eq!(row[6], "");
    assert_eq!(row[17], "");
    let ledger = fs::read_to_string(outs[0].join("ledger.csv")).unwrap();
    let widths: Vec<usize> = ledger.lines().map(|l| l.split(',').count()).collect();
    assert_eq!(widths, vec![16, 16]);
}

#[test]
fn infeasible_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let body = UNFORCED.replace("\"force_infeasible\":true", "\"force_infeasible\":false");
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = run(&["run-unforced", "--config", &cfg, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "run-unforced",
        "--config",
        &cfg,
        "--out",
        dir.path().join("y").to_str().unwrap(),
        "--force-infeasible",
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn small_grid_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &UNFORCED.replace("\"grid_n\":256", "\"grid_n\":64"));
    let o = run(&["run-unforced", "--config", &cfg, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn tiny_c0_floor_is_lifted_by_the_adaptive_policy() {
    let dir = tempfile::tempdir().unwrap();
    let body = UNFORCED
        .replace("\"c0_min\":1", "\"c0_min\":1e-6")
        .replace("\"q_max\":1", "\"q_max\":2")
        .replace("\"grid_n\":256", "\"grid_n\":1024");
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = run(&["run-unforced", "--config", &cfg, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unknown_key_and_bad_json_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &UNFORCED.replace("\"seed\":0", "\"seed\":0,\"extra\":1"));
    let o = run(&["run-unforced", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let cfg = write_config(dir.path(), "d.json", "{\"scheme\":");
    let o = run(&["param-scan", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_zero_field_and_corrupted_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &UNFORCED.replace("\"q_max\":1", "\"q_max\":0"));
    let run_dir = dir.path().join("run");
    assert!(run(&["run-unforced", "--config", &cfg, "--out", run_dir.to_str().unwrap(), "--quiet"])
        .status
        .success());
    let field = run_dir.join("theta.bin");
    let vout = dir.path().join("v");
    let o = run(&["verify", "--config", &cfg, "--field", field.to_str().unwrap(), "--out", vout.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(vout.join("residuals.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "0,4.0,0.0,");
    let detail: serde_json::Value = serde_json::from_str(&fs::read_to_string(vout.join("verify.json")).unwrap()).unwrap();
    assert_eq!(detail["residuals"].as_array().unwrap().len(), 49);

    fs::write(run_dir.join("theta.bin.json"), "{\"n\": 256, \"domain\"").unwrap();
    let o = run(&["verify", "--config", &cfg, "--field", field.to_str().unwrap(), "--out", vout.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("EOF"));
}

#[test]
fn scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        &UNFORCED.replace("\"alpha\":0.4,\"gamma\":0.5", "\"alpha\":0.95,\"gamma\":0.5"),
    );
    let empty = dir.path().join("empty");
    let o = run(&["param-scan", "--config", &cfg, "--out", empty.to_str().unwrap(), "--steps", "0", "--quiet"]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(empty.join("scan.csv")).unwrap(),
        "b,beta,s1,s2,s3,s4,s1f,feasible_unforced,feasible_forced\n"
    );
    let full = dir.path().join("full");
    let o = run(&["param-scan", "--config", &cfg, "--out", full.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(full.join("scan.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2500);
    let unforced = rows.iter().filter(|r| r[7] == "true").count();
    let forced = rows.iter().filter(|r| r[8] == "true").count();
    assert!(unforced > 0);
    assert!(forced >= unforced);
}

#[test]
fn forced_run_writes_both_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let body = UNFORCED
        .replace("\"scheme\":\"unforced\"", "\"scheme\":\"forced\"")
        .replace("\"c0_min\":1", "\"c0_min\":100")
        .replace("\"grid_n\":256", "\"grid_n\":512")
        .replace("\"seed\":0", "\"seed\":3");
    let cfg = write_config(dir.path(), "c.json", &body);
    let out = dir.path().join("run");
    let o = run(&["run-forced", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["theta.bin", "theta_tilde.bin", "g1.bin", "g2.bin", "forced.csv", "residuals_tilde.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let forced = fs::read_to_string(out.join("forced.csv")).unwrap();
    let row: Vec<&str> = forced.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "true");
    assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
    // the stored pair solves the forced equation weakly
    let vout = dir.path().join("v");
    let o = run(&[
        "verify",
        "--config",
        &cfg,
        "--field",
        out.join("theta.bin").to_str().unwrap(),
        "--forcing",
        out.join("g1.bin").to_str().unwrap(),
        "--out",
        vout.to_str().unwrap(),
        "--quiet",
    ]);
    assert!(o.status.success());
    let detail: serde_json::Value = serde_json::from_str(&fs::read_to_string(vout.join("verify.json")).unwrap()).unwrap();
    let max = detail["max_residual"].as_f64().unwrap();
    let scale = detail["residuals"].as_array().unwrap().len() as f64;
    assert!(max < 1e-9 * scale, "{max}");
}
