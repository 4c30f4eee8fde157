//! The four batch commands behind the command line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};

use super::config::{RunConfig, Scheme};
use super::output::{
    write_json, write_table, ForcedRow, LedgerRow, ResidualRow, StepRow, FORCED_COLUMNS,
    LEDGER_COLUMNS, RESIDUAL_COLUMNS, STEP_COLUMNS,
};
use crate::error::{Error, Result};
use crate::feasibility::{
    check_alpha_window, check_forced, check_beta_window, check_unforced, scan_region, Verdict,
};
use crate::forced::run_forced_with;
use crate::multiplier::apply_gamma;
use crate::params::ParamSet;
use crate::torus::io::{read_field, write_field};
use crate::torus::SpectralField;
use crate::unforced::run_with;
use crate::verify::{residual_table, TestBasis};

/// Options that come from the command line rather than the config file.
#[derive(Clone, Debug)]
pub struct CliOptions {
    pub out: PathBuf,
    pub force_infeasible: bool,
    pub emit_fields: bool,
    pub quiet: bool,
}

impl CliOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            force_infeasible: false,
            emit_fields: false,
            quiet: true,
        }
    }
}

/// Full-size fields held at the peak of a step, per scheme.
pub const UNFORCED_FIELDS: u64 = 26;
pub const FORCED_FIELDS: u64 = 32;

fn meminfo_available() -> Option<u64> {
    let text = fs::read_to_string("/proc/meminfo").ok()?;
    let line = text.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn cgroup_limit() -> Option<u64> {
    let text = fs::read_to_string("/sys/fs/cgroup/memory.max").ok()?;
    text.trim().parse().ok()
}

/// Bytes this process may still allocate, if the system reports it.
pub fn available_memory() -> Option<u64> {
    match (meminfo_available(), cgroup_limit()) {
        (Some(a), Some(c)) => Some(a.min(c)),
        (a, c) => a.or(c),
    }
}

/// Refuse grids whose working set cannot fit in memory.
pub fn preflight(n: usize, fields: u64) -> Result<()> {
    let required = fields * (n as u64) * (n as u64) * 8;
    if let Some(avail) = available_memory() {
        if required > avail {
            return Err(Error::ResourceLimit {
                n,
                required_mib: required >> 20,
                available_mib: avail >> 20,
            });
        }
    }
    Ok(())
}

fn verdict_json(v: &Verdict) -> Value {
    json!({ "feasible": v.feasible, "slacks": v.slacks })
}

/// Evaluate every inequality system; infeasibility of the scheme's own
/// system is fatal unless forced.
pub fn feasibility_gate(cfg: &RunConfig, force: bool) -> Result<Value> {
    let (b, beta, alpha, gamma) = (cfg.b, cfg.beta, cfg.alpha, cfg.gamma);
    let u = check_unforced(b, beta, alpha, gamma)?;
    let f = check_forced(b, beta, alpha, gamma)?;
    let t = check_beta_window(b, beta, alpha, gamma)?;
    let a = check_alpha_window(b, beta)?;
    let own = match cfg.scheme {
        Scheme::Unforced => &u,
        Scheme::Forced => &f,
    };
    if !own.feasible {
        let msg = format!("{:?} slacks {:?}", own.system, own.slacks);
        if force {
            log::warn!("continuing with infeasible parameters: {msg}");
        } else {
            return Err(Error::Infeasible(msg));
        }
    }
    Ok(json!({
        "unforced": verdict_json(&u),
        "forced": verdict_json(&f),
        "beta_window": verdict_json(&t),
        "alpha_bound": a,
        "alpha_below_bound": alpha < a,
    }))
}

fn prepare(cfg: &RunConfig, opts: &CliOptions, want: Scheme) -> Result<(ParamSet, Value)> {
    if cfg.scheme != want {
        return Err(Error::Config(format!(
            "config scheme is {:?}, command expects {:?}",
            cfg.scheme, want
        )));
    }
    let p = cfg.params()?;
    let verdicts = feasibility_gate(cfg, opts.force_infeasible || cfg.flags.force_infeasible)?;
    p.sequences(p.q_max)?;
    fs::create_dir_all(&opts.out)?;
    write_json(&opts.out.join("config.json"), cfg)?;
    Ok((p, verdicts))
}

fn meta(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn emit(dir: &Path, name: &str, f: &SpectralField, q: usize) -> Result<()> {
    write_field(&dir.join(name), f, meta(&[("name", json!(name)), ("q", json!(q))]))
}

/// Run the unforced scheme and write a run directory.
pub fn cmd_run_unforced(cfg: &RunConfig, opts: &CliOptions) -> Result<()> {
    let clock = Instant::now();
    let (p, verdicts) = prepare(cfg, opts, Scheme::Unforced)?;
    preflight(p.n, UNFORCED_FIELDS)?;
    let emit_fields = opts.emit_fields || cfg.flags.emit_fields;
    let basis = TestBasis::new(cfg.lambda0_test);
    let mut residuals = Vec::new();
    let mut divergence = 0.0f64;
    let out = opts.out.clone();
    let run = run_with(&p, |state, report| {
        let theta = apply_gamma(&p.symbol, &state.f);
        let table = residual_table(&theta, None, &p.symbol, p.gamma, &basis)?;
        report.weak_residual_max = Some(table.max().0);
        report.leakage = Some(table.leakage);
        divergence = divergence.max(table.divergence);
        residuals.push(ResidualRow::new(Some(state.q), &table));
        if emit_fields {
            emit(&out, &format!("f_q{}.bin", state.q), &state.f, state.q)?;
            emit(&out, &format!("G_q{}.bin", state.q), &state.g, state.q)?;
        }
        Ok(())
    });
    let timings = cfg.flags.timings;
    let rows: Vec<StepRow> = run.reports.iter().map(|r| StepRow::unforced(r, timings)).collect();
    write_table(&opts.out.join("steps.csv"), &STEP_COLUMNS, &rows)?;
    let ledger: Vec<LedgerRow> = run.reports.iter().map(LedgerRow::from).collect();
    write_table(&opts.out.join("ledger.csv"), &LEDGER_COLUMNS, &ledger)?;
    write_table(&opts.out.join("residuals.csv"), &RESIDUAL_COLUMNS, &residuals)?;
    let theta = apply_gamma(&p.symbol, &run.state.f);
    write_field(
        &opts.out.join("theta.bin"),
        &theta,
        meta(&[("name", json!("theta")), ("q", json!(run.state.q))]),
    )?;
    let last = run.reports.last();
    let mut summary = json!({
        "scheme": "unforced",
        "n": p.n,
        "levels_completed": run.state.q,
        "q_max": p.q_max,
        "feasibility": verdicts,
        "final": {
            "xnorm_G": last.map(|r| r.xnorm_g),
            "sup_G": last.map(|r| r.sup_g),
            "besov_f_alpha": last.map(|r| r.besov_f),
            "weak_residual_max": last.and_then(|r| r.weak_residual_max),
            "divergence_ratio_max": divergence,
        },
        "error": run.failure.as_ref().map(|e| e.to_string()),
    });
    if timings {
        summary["wall_time_s"] = json!(clock.elapsed().as_secs_f64());
    }
    write_json(&opts.out.join("summary.json"), &summary)?;
    if !opts.quiet {
        for r in &rows {
            println!(
                "q={} lambda={} |G|_X={:.3e} |W|_inf={:.3e} residual={:.3e}",
                r.q,
                r.lambda,
                r.xnorm_g.unwrap_or(f64::NAN),
                r.sup_w.unwrap_or(f64::NAN),
                r.weak_residual_max.unwrap_or(f64::NAN)
            );
        }
    }
    match run.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Run the sum-difference scheme and write a run directory.
pub fn cmd_run_forced(cfg: &RunConfig, opts: &CliOptions) -> Result<()> {
    let clock = Instant::now();
    let (p, verdicts) = prepare(cfg, opts, Scheme::Forced)?;
    preflight(p.n, FORCED_FIELDS)?;
    let emit_fields = opts.emit_fields || cfg.flags.emit_fields;
    let basis = TestBasis::new(cfg.lambda0_test);
    let mut residuals = Vec::new();
    let mut residuals_tilde = Vec::new();
    let mut divergence = 0.0f64;
    let out = opts.out.clone();
    let run = run_forced_with(&p, cfg.seed, |state, report| {
        let x = state.extract(&p);
        let t1 = residual_table(&x.theta, Some(&x.g1), &p.symbol, p.gamma, &basis)?;
        let t2 = residual_table(&x.theta_tilde, Some(&x.g2), &p.symbol, p.gamma, &basis)?;
        report.weak_residual_max = Some([t1.max().0, t2.max().0]);
        divergence = divergence.max(t1.divergence).max(t2.divergence);
        residuals.push(ResidualRow::new(Some(state.q), &t1));
        residuals_tilde.push(ResidualRow::new(Some(state.q), &t2));
        if emit_fields {
            emit(&out, &format!("Pi_q{}.bin", state.q), &state.pi, state.q)?;
            emit(&out, &format!("mu_q{}.bin", state.q), &state.mu, state.q)?;
        }
        Ok(())
    });
    let timings = cfg.flags.timings;
    let rows: Vec<StepRow> = run.reports.iter().map(|r| StepRow::forced(r, timings)).collect();
    write_table(&opts.out.join("steps.csv"), &STEP_COLUMNS, &rows)?;
    let forced: Vec<ForcedRow> = run.reports.iter().map(ForcedRow::from).collect();
    write_table(&opts.out.join("forced.csv"), &FORCED_COLUMNS, &forced)?;
    write_table(&opts.out.join("residuals.csv"), &RESIDUAL_COLUMNS, &residuals)?;
    write_table(&opts.out.join("residuals_tilde.csv"), &RESIDUAL_COLUMNS, &residuals_tilde)?;
    let x = run.state.extract(&p);
    let q = run.state.q;
    for (name, f) in [
        ("theta.bin", &x.theta),
        ("theta_tilde.bin", &x.theta_tilde),
        ("g1.bin", &x.g1),
        ("g2.bin", &x.g2),
    ] {
        emit(&opts.out, name, f, q)?;
    }
    let last = run.reports.last();
    let mut summary = json!({
        "scheme": "forced",
        "n": p.n,
        "levels_completed": q,
        "q_max": p.q_max,
        "seed": cfg.seed,
        "feasibility": verdicts,
        "final": {
            "xnorm_G": last.map(|r| r.xnorm_g),
            "xnorm_Gt": last.map(|r| r.xnorm_gt),
            "l2_theta_diff": last.map(|r| r.l2_theta_diff),
            "skip_max": run.reports.iter().map(|r| r.skip).fold(0.0, f64::max),
            "weak_residual_max": last.and_then(|r| r.weak_residual_max),
            "divergence_ratio_max": divergence,
        },
        "error": run.failure.as_ref().map(|e| e.to_string()),
    });
    if timings {
        summary["wall_time_s"] = json!(clock.elapsed().as_secs_f64());
    }
    write_json(&opts.out.join("summary.json"), &summary)?;
    if !opts.quiet {
        for r in &run.reports {
            println!(
                "q={} {} |G~|_X={:.3e} |theta-theta~|_2={:.3e} skip={:.1e}",
                r.q,
                if r.active { "active " } else { "passive" },
                r.xnorm_gt,
                r.l2_theta_diff,
                r.skip
            );
        }
    }
    match run.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Ranges of a parameter scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSpec {
    pub b_range: (f64, f64),
    pub beta_range: (f64, f64),
    pub steps: usize,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            b_range: (1.01, 1.2),
            beta_range: (0.8, 0.99),
            steps: 50,
        }
    }
}

/// Scan the `(b, beta)` plane at the config's `(alpha, gamma)`.
pub fn cmd_param_scan(cfg: &RunConfig, spec: ScanSpec, opts: &CliOptions) -> Result<()> {
    fs::create_dir_all(&opts.out)?;
    let rows = scan_region(cfg.alpha, cfg.gamma, spec.b_range, spec.beta_range, spec.steps);
    write_table(
        &opts.out.join("scan.csv"),
        &["b", "beta", "s1", "s2", "s3", "s4", "s1f", "feasible_unforced", "feasible_forced"],
        &rows,
    )?;
    let unforced = rows.iter().filter(|r| r.feasible_unforced).count();
    let forced = rows.iter().filter(|r| r.feasible_forced).count();
    let violations = rows
        .iter()
        .filter(|r| r.feasible_unforced && !r.feasible_forced)
        .count();
    write_json(
        &opts.out.join("scan_summary.json"),
        &json!({
            "alpha": cfg.alpha,
            "gamma": cfg.gamma,
            "b_range": [spec.b_range.0, spec.b_range.1],
            "beta_range": [spec.beta_range.0, spec.beta_range.1],
            "steps": spec.steps,
            "cells": rows.len(),
            "feasible_unforced": unforced,
            "feasible_forced": forced,
            "dominance_violations": violations,
        }),
    )?;
    if !opts.quiet {
        println!(
            "{} cells: {} unforced-feasible, {} forced-feasible, {} dominance violations",
            rows.len(),
            unforced,
            forced,
            violations
        );
    }
    Ok(())
}

/// Weak residuals of a stored field, optionally with a stored forcing.
pub fn cmd_verify(field: &Path, forcing: Option<&Path>, cfg: &RunConfig, opts: &CliOptions) -> Result<()> {
    let (theta, header) = read_field(field)?;
    let g = match forcing {
        Some(path) => {
            let (g, _) = read_field(path)?;
            if g.grid() != theta.grid() {
                return Err(Error::GridMismatch(g.grid().n(), theta.grid().n()));
            }
            Some(g)
        }
        None => None,
    };
    let symbol = crate::multiplier::OddSymbol::by_name(&cfg.symbol)?;
    let basis = TestBasis::new(cfg.lambda0_test);
    let table = residual_table(&theta, g.as_ref(), &symbol, cfg.gamma, &basis)?;
    fs::create_dir_all(&opts.out)?;
    let q = header.meta.get("q").and_then(Value::as_u64).map(|q| q as usize);
    write_table(
        &opts.out.join("residuals.csv"),
        &RESIDUAL_COLUMNS,
        &[ResidualRow::new(q, &table)],
    )?;
    let detail: Vec<Value> = table
        .values
        .iter()
        .map(|(t, v)| json!({ "test": t.to_string(), "residual": v }))
        .collect();
    let (max, arg) = table.max();
    write_json(
        &opts.out.join("verify.json"),
        &json!({
            "field": field.display().to_string(),
            "forcing": forcing.map(|p| p.display().to_string()),
            "n": theta.grid().n(),
            "Lambda0": cfg.lambda0_test,
            "max_residual": max,
            "argmax": arg.map(|a| a.to_string()),
            "leakage": table.leakage,
            "divergence_ratio": table.divergence,
            "residuals": detail,
        }),
    )?;
    if !opts.quiet {
        println!(
            "max residual {:.3e} at {} over {} test functions",
            max,
            arg.map(|a| a.to_string()).unwrap_or_else(|| "-".into()),
            table.values.len()
        );
    }
    Ok(())
}
