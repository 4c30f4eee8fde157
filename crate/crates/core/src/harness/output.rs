//! CSV and JSON writers for run directories.

use std::fs::File;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::forced::ForcedReport;
use crate::unforced::StepReport;
use crate::verify::ResidualTable;

pub const STEP_COLUMNS: [&str; 18] = [
    "q",
    "lambda",
    "delta",
    "r",
    "c0",
    "xnorm_G",
    "xnorm_Gt",
    "sup_G",
    "besov_f_alpha",
    "sup_W",
    "support_f",
    "support_G",
    "leakage",
    "nash",
    "dissipation",
    "oscillation",
    "weak_residual_max",
    "runtime_s",
];

/// One row of `steps.csv`; `None` is written as an empty field.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StepRow {
    pub q: usize,
    pub lambda: u64,
    pub delta: f64,
    pub r: f64,
    pub c0: f64,
    pub xnorm_g: Option<f64>,
    pub xnorm_gt: Option<f64>,
    pub sup_g: Option<f64>,
    pub besov_f_alpha: Option<f64>,
    pub sup_w: Option<f64>,
    pub support_f: Option<f64>,
    pub support_g: Option<f64>,
    pub leakage: Option<f64>,
    pub nash: Option<f64>,
    pub dissipation: Option<f64>,
    pub oscillation: Option<f64>,
    pub weak_residual_max: Option<f64>,
    pub runtime_s: Option<f64>,
}

impl StepRow {
    pub fn unforced(r: &StepReport, timings: bool) -> Self {
        Self {
            q: r.q,
            lambda: r.lambda,
            delta: r.delta,
            r: r.r,
            c0: r.c0,
            xnorm_g: Some(r.xnorm_g),
            xnorm_gt: None,
            sup_g: Some(r.sup_g),
            besov_f_alpha: Some(r.besov_f),
            sup_w: Some(r.sup_w),
            support_f: Some(r.support_f),
            support_g: Some(r.support_g),
            leakage: r.leakage,
            nash: Some(r.nash),
            dissipation: Some(r.dissipation),
            oscillation: Some(r.oscillation),
            weak_residual_max: r.weak_residual_max,
            runtime_s: timings.then_some(r.runtime_s),
        }
    }

    /// Forced rows: `sup_W` is the increment `M`, `besov_f_alpha` the larger
    /// of the two potentials, `support_G` the support of `G~`.
    pub fn forced(r: &ForcedReport, timings: bool) -> Self {
        Self {
            q: r.q,
            lambda: r.lambda,
            delta: r.delta,
            r: r.r,
            c0: r.c0,
            xnorm_g: Some(r.xnorm_g),
            xnorm_gt: Some(r.xnorm_gt),
            sup_g: Some(r.sup_g),
            besov_f_alpha: Some(r.besov_pi.max(r.besov_mu)),
            sup_w: Some(r.sup_m),
            support_f: Some(r.support_pi.max(r.support_mu)),
            support_g: Some(r.support_gt),
            leakage: None,
            nash: Some(r.nash),
            dissipation: Some(r.dissipation),
            oscillation: Some(r.oscillation),
            weak_residual_max: r.weak_residual_max.map(|[a, b]| a.max(b)),
            runtime_s: timings.then_some(r.runtime_s),
        }
    }
}

pub const LEDGER_COLUMNS: [&str; 16] = [
    "q",
    "xnorm_W",
    "l2_W",
    "sup_a1",
    "sup_a2",
    "support_W",
    "J1",
    "J2",
    "J3",
    "J4",
    "J5",
    "J6",
    "J7",
    "J11",
    "cancellation",
    "relaxed_residual",
];

/// One row of the unforced `ledger.csv`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerRow {
    pub q: usize,
    pub xnorm_w: f64,
    pub l2_w: f64,
    pub sup_a1: f64,
    pub sup_a2: f64,
    pub support_w: f64,
    pub j: [Option<f64>; 7],
    pub j11: Option<f64>,
    pub cancellation: Option<f64>,
    pub relaxed_residual: f64,
}

impl From<&StepReport> for LedgerRow {
    fn from(r: &StepReport) -> Self {
        Self {
            q: r.q,
            xnorm_w: r.xnorm_w,
            l2_w: r.l2_w,
            sup_a1: r.sup_a[0],
            sup_a2: r.sup_a[1],
            support_w: r.support_w,
            j: r.j.map(|j| j.j.map(Some)).unwrap_or([None; 7]),
            j11: r.j.map(|j| j.j11),
            cancellation: r.j.map(|j| j.cancellation),
            relaxed_residual: r.relaxed_residual,
        }
    }
}

pub const FORCED_COLUMNS: [&str; 14] = [
    "q",
    "active",
    "skip",
    "l2_theta_diff",
    "l2_g_diff",
    "sup_Gt",
    "sup_M",
    "besov_Pi",
    "besov_mu",
    "relaxed_sum",
    "relaxed_difference",
    "ledger_Gt",
    "ledger_G",
    "headroom",
];

/// One row of `forced.csv`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForcedRow {
    pub q: usize,
    pub active: bool,
    pub skip: f64,
    pub l2_theta_diff: f64,
    pub l2_g_diff: f64,
    pub sup_gt: f64,
    pub sup_m: f64,
    pub besov_pi: f64,
    pub besov_mu: f64,
    pub relaxed_sum: f64,
    pub relaxed_difference: f64,
    pub ledger_gt: f64,
    pub ledger_g: f64,
    pub headroom: bool,
}

impl From<&ForcedReport> for ForcedRow {
    fn from(r: &ForcedReport) -> Self {
        Self {
            q: r.q,
            active: r.active,
            skip: r.skip,
            l2_theta_diff: r.l2_theta_diff,
            l2_g_diff: r.l2_g_diff,
            sup_gt: r.sup_gt,
            sup_m: r.sup_m,
            besov_pi: r.besov_pi,
            besov_mu: r.besov_mu,
            relaxed_sum: r.relaxed_residual[0],
            relaxed_difference: r.relaxed_residual[1],
            ledger_gt: r.ledger_residual_gt,
            ledger_g: r.ledger_residual_g,
            headroom: r.headroom_flag,
        }
    }
}

pub const RESIDUAL_COLUMNS: [&str; 4] = ["q", "Lambda0", "max_residual", "argmax_k"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub q: Option<usize>,
    pub lambda0: f64,
    pub max_residual: f64,
    pub argmax_k: String,
}

impl ResidualRow {
    pub fn new(q: Option<usize>, t: &ResidualTable) -> Self {
        let (max, arg) = t.max();
        Self {
            q,
            lambda0: t.lambda0,
            max_residual: max,
            argmax_k: arg.map(|a| a.to_string()).unwrap_or_default(),
        }
    }
}

/// Write a CSV table; the header is written even when `rows` is empty.
pub fn write_table<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(File::create(path)?);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}
