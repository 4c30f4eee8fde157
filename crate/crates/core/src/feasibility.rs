//! Parameter inequality systems and a scan over the `(b, beta)` plane.
//!
//! Strict inequalities are compared with zero tolerance, so boundary points
//! count as infeasible.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    BetaWindow,
    AlphaWindow,
    Unforced,
    Forced,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub system: System,
    pub feasible: bool,
    /// Signed slacks; feasible means every entry is strictly negative.
    pub slacks: Vec<f64>,
}

impl Verdict {
    fn from_slacks(system: System, slacks: Vec<f64>) -> Self {
        Self {
            system,
            feasible: slacks.iter().all(|s| *s < 0.0),
            slacks,
        }
    }
}

fn check_domain(b: f64, beta: f64, alpha: f64, gamma: f64) -> Result<()> {
    let ok = b > 1.0 && beta > 0.0 && beta < 1.0 && alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 2.0;
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "need b > 1, 0 < beta < 1, 0 < alpha < 1, 0 < gamma < 2 (got b={b}, beta={beta}, alpha={alpha}, gamma={gamma})"
        )))
    }
}

fn common_slacks(b: f64, beta: f64, gamma: f64) -> [f64; 3] {
    [
        b * beta + b * (gamma - 2.0) + 0.5 - beta / 2.0,
        b * beta - 2.0 * b + 2.0 - beta,
        b * beta - b + 1.0 - beta,
    ]
}

/// Slacks `s1..s4` of the unforced system.
pub fn check_unforced(b: f64, beta: f64, alpha: f64, gamma: f64) -> Result<Verdict> {
    check_domain(b, beta, alpha, gamma)?;
    let s1 = b * beta - b + 0.5 - beta / 2.0 + 1.0 - alpha;
    let [s2, s3, s4] = common_slacks(b, beta, gamma);
    Ok(Verdict::from_slacks(System::Unforced, vec![s1, s2, s3, s4]))
}

/// Forced system: the first slack carries `(1 - alpha)/b` instead of `1 - alpha`.
pub fn check_forced(b: f64, beta: f64, alpha: f64, gamma: f64) -> Result<Verdict> {
    check_domain(b, beta, alpha, gamma)?;
    let s1 = b * beta - b + 0.5 - beta / 2.0 + (1.0 - alpha) / b;
    let [s2, s3, s4] = common_slacks(b, beta, gamma);
    Ok(Verdict::from_slacks(System::Forced, vec![s1, s2, s3, s4]))
}

/// Upper bound `1 - 1/(2b) + beta/(2b)` on the Hölder exponent.
pub fn check_alpha_window(b: f64, beta: f64) -> Result<f64> {
    if !(b > 1.0 && beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("need b > 1 and 0 < beta < 1 (got b={b}, beta={beta})")));
    }
    Ok(alpha_bound(b, beta))
}

fn alpha_bound(b: f64, beta: f64) -> f64 {
    1.0 - 1.0 / (2.0 * b) + beta / (2.0 * b)
}

/// The open interval for `beta`, as `(lower, upper_1, upper_2)`.
pub fn beta_window(b: f64, alpha: f64, gamma: f64) -> (f64, f64, f64) {
    let d = 2.0 * b - 1.0;
    (
        2.0 * b * (alpha - 1.0) + 1.0,
        (2.0 * b * (2.0 - gamma) - 1.0) / d,
        (2.0 * b + 2.0 * alpha - 3.0) / d,
    )
}

/// Membership of `beta` in the admissible beta window. Slacks are
/// `lower - beta`, `beta - upper_1`, `beta - upper_2`.
pub fn check_beta_window(b: f64, beta: f64, alpha: f64, gamma: f64) -> Result<Verdict> {
    check_domain(b, beta, alpha, gamma)?;
    let (lo, u1, u2) = beta_window(b, alpha, gamma);
    Ok(Verdict::from_slacks(
        System::BetaWindow,
        vec![lo - beta, beta - u1, beta - u2],
    ))
}

/// One cell of a scan.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ScanRow {
    pub b: f64,
    pub beta: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
    pub s1f: f64,
    pub feasible_unforced: bool,
    pub feasible_forced: bool,
}

/// Evenly spaced points on a closed range; empty for `steps == 0` or an
/// inverted range, a single midpoint-free sample `lo` for `steps == 1`.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 0 || hi < lo {
        return Vec::new();
    }
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(|i| lo + h * i as f64).collect()
}

/// Scan `steps x steps` cells of the `(b, beta)` rectangle. Cells outside
/// the domain are skipped.
pub fn scan_region(
    alpha: f64,
    gamma: f64,
    b_range: (f64, f64),
    beta_range: (f64, f64),
    steps: usize,
) -> Vec<ScanRow> {
    let mut rows = Vec::new();
    for b in linspace(b_range.0, b_range.1, steps) {
        for beta in linspace(beta_range.0, beta_range.1, steps) {
            let (Ok(u), Ok(f)) = (
                check_unforced(b, beta, alpha, gamma),
                check_forced(b, beta, alpha, gamma),
            ) else {
                continue;
            };
            rows.push(ScanRow {
                b,
                beta,
                s1: u.slacks[0],
                s2: u.slacks[1],
                s3: u.slacks[2],
                s4: u.slacks[3],
                s1f: f.slacks[0],
                feasible_unforced: u.feasible,
                feasible_forced: f.feasible,
            });
        }
    }
    rows
}
