//! Unforced scheme: amplitudes, increments, exact stress re-extraction and
//! the Nash / dissipation / oscillation ledger.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::multiplier::{
    apply_fractional, apply_gamma, apply_t1, apply_t2, gradient, lp_annulus, lp_leq, perp_gradient,
};
use crate::params::{Level, ParamSet};
use crate::stress::{assert_relaxed, bilinear, relaxed_residual, stress};
use crate::torus::{
    besov_holder_norm, exact_product, helmholtz_split, modulate, Phase, SpectralField, TorusGrid,
    VectorField2,
};
use crate::wave::{apply_r, inverse_div, solve_coeffs, x_norm, DecompCoeffs, DirectionFrame};

/// Amplitude prefactor of the unforced scheme.
pub const UNFORCED_PREFACTOR: f64 = SQRT_2 / 5.0;

/// `(f_q, G_q, V_q)` solving the relaxed equation at level `q`.
#[derive(Clone, Debug)]
pub struct IterationState {
    pub q: usize,
    pub f: SpectralField,
    pub g: SpectralField,
    pub v: SpectralField,
}

impl IterationState {
    pub fn zero(grid: &TorusGrid) -> Self {
        Self {
            q: 0,
            f: SpectralField::zeros(grid),
            g: SpectralField::zeros(grid),
            v: SpectralField::zeros(grid),
        }
    }
}

/// The two amplitude fields of one increment and the `c0` that was used.
#[derive(Clone, Debug)]
pub struct Amplitudes {
    pub a: [SpectralField; 2],
    pub c0: f64,
    pub min_radicand: f64,
}

/// `prefactor * lambda_{q+1}^{-1} lambda_q^{1/2} delta_q^{1/2}`.
pub fn amplitude_scale(prefactor: f64, level: Level, next: Level) -> f64 {
    prefactor * (level.lambda as f64).sqrt() * level.delta.sqrt() / next.lambda as f64
}

/// `P_{<= r}[scale * sqrt(c0 + sign R_j G / (lambda delta))]` for both channels.
pub(crate) fn amplitude_fields(
    p: &ParamSet,
    coeffs: &DecompCoeffs,
    g: &SpectralField,
    level: Level,
    next: Level,
    prefactor: f64,
    sign: f64,
) -> Result<Amplitudes> {
    let grid = g.grid();
    let norm = level.lambda as f64 * level.delta;
    let rg = [0, 1].map(|j| apply_r(j, coeffs, g).to_physical());
    let worst = rg
        .iter()
        .flat_map(|v| v.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        / norm;
    let c0 = p.c0.resolve(worst);
    let scale = amplitude_scale(prefactor, level, next);
    let mut min_radicand = f64::INFINITY;
    let mut out = Vec::with_capacity(2);
    for (j, r) in rg.into_iter().enumerate() {
        let mut rad = r;
        for v in rad.iter_mut() {
            *v = c0 + sign * *v / norm;
        }
        let min = rad.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::Positivity {
                min,
                channel: j + 1,
            });
        }
        min_radicand = min_radicand.min(min);
        for v in rad.iter_mut() {
            *v = scale * v.sqrt();
        }
        out.push(lp_leq(next.r, &SpectralField::from_physical(grid, &rad)?));
    }
    let a1 = out.pop().unwrap();
    let a0 = out.pop().unwrap();
    Ok(Amplitudes {
        a: [a0, a1],
        c0,
        min_radicand,
    })
}

/// Amplitudes `a_{j,q+1}` built from `G_q`.
pub fn amplitudes(p: &ParamSet, coeffs: &DecompCoeffs, g: &SpectralField, q: usize) -> Result<Amplitudes> {
    let (level, next) = (p.sequences(q)?, p.sequences(q + 1)?);
    amplitude_fields(p, coeffs, g, level, next, UNFORCED_PREFACTOR, 1.0)
}

/// `sum_j a_j cos(5 lambda xi_j . x)` before any projection.
pub fn raw_increment(next: Level, a: &[SpectralField; 2]) -> Result<SpectralField> {
    let mut w = modulate(&a[0], DirectionFrame::carrier(next.lambda, 0), Phase::Cos)?;
    w = &w + &modulate(&a[1], DirectionFrame::carrier(next.lambda, 1), Phase::Cos)?;
    Ok(w)
}

/// `sum_j P_{lo lambda < |k| <= hi lambda}[a_j cos(5 lambda xi_j . x)]`.
pub fn build_increment(p: &ParamSet, next: Level, a: &[SpectralField; 2]) -> Result<SpectralField> {
    let lam = next.lambda as f64;
    Ok(lp_annulus(p.annulus.0 * lam, p.annulus.1 * lam, &raw_increment(next, a)?))
}

/// Error fields of one step. `g_o` already contains the carried `G_q`.
#[derive(Clone, Debug)]
pub struct Breakdown {
    pub g_n: SpectralField,
    pub g_d: SpectralField,
    pub g_o: SpectralField,
}

impl Breakdown {
    pub fn total(&self) -> SpectralField {
        &(&self.g_n + &self.g_d) + &self.g_o
    }
}

/// Nash, dissipation and oscillation errors of the increment `w` on top of
/// `state`.
pub fn error_breakdown(p: &ParamSet, state: &IterationState, w: &SpectralField) -> Result<Breakdown> {
    let sym = &p.symbol;
    let g_n = if state.f.is_zero() {
        SpectralField::zeros(w.grid())
    } else {
        inverse_div(&(&bilinear(sym, w, &state.f)? + &bilinear(sym, &state.f, w)?))
    };
    let g_d = apply_fractional(p.gamma - 2.0, &apply_gamma(sym, w)).scale(-1.0);
    let g_o = &inverse_div(&bilinear(sym, w, w)?) + &state.g;
    Ok(Breakdown { g_n, g_d, g_o })
}

/// Sup norms of the pieces of `perp-grad W Gamma W` written with the
/// modulation remainders. `j[0]` is the diagonal `sin^2` part, `j[1..]` the
/// cross, gradient-amplitude and remainder parts in order.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct JTerms {
    pub j: [f64; 7],
    /// Low-frequency half of `j[0]`.
    pub j11: f64,
    /// `cos(10 lambda xi_j . x)` half of `j[0]`.
    pub j12: f64,
    /// `|grad P(J11 + grad G_q)|_inf` where `P` keeps the gradient part.
    pub cancellation: f64,
    /// Relative gap between the summed pieces and the direct product.
    pub expansion_residual: f64,
}

fn vec_max(m: &mut f64, v: [f64; 2]) {
    *m = m.max(v[0].hypot(v[1]));
}

/// Evaluate the quadratic self-interaction pieces on the grid.
pub fn j_terms(p: &ParamSet, next: Level, amps: &Amplitudes, g_q: &SpectralField) -> Result<JTerms> {
    let sym = &p.symbol;
    let grid = g_q.grid();
    let n = grid.n();
    let lam5 = 5.0 * next.lambda as f64;
    let carriers = [0, 1].map(|j| DirectionFrame::carrier(next.lambda, j));
    let sig = [0, 1].map(|j| sym.sigma(DirectionFrame::LATTICE[j]) / 5.0);
    let perp = DirectionFrame::XI_PERP;

    let mut out = JTerms::default();
    {
        let a = [0, 1].map(|j| amps.a[j].to_physical());
        let pa = [0, 1].map(|j| {
            let v = perp_gradient(&amps.a[j]);
            [v.x.to_physical(), v.y.to_physical()]
        });
        let mut t1 = Vec::with_capacity(2);
        let mut t2 = Vec::with_capacity(2);
        for j in 0..2 {
            t1.push(apply_t1(sym, &amps.a[j], carriers[j])?.to_physical());
            t2.push(apply_t2(sym, &amps.a[j], carriers[j])?.to_physical());
        }
        let cos_t: Vec<f64> = (0..n).map(|m| (2.0 * PI * m as f64 / n as f64).cos()).collect();
        let sin_t: Vec<f64> = (0..n).map(|m| (2.0 * PI * m as f64 / n as f64).sin()).collect();

        let mut total = [vec![0.0; n * n], vec![0.0; n * n]];
        let mut maxes = [0.0f64; 7];
        let (mut m11, mut m12) = (0.0f64, 0.0f64);
        for i2 in 0..n {
            for i1 in 0..n {
                let idx = i2 * n + i1;
                let mut s = [0.0; 2];
                let mut c = [0.0; 2];
                for j in 0..2 {
                    let ph = (carriers[j][0] * i1 as i64 + carriers[j][1] * i2 as i64)
                        .rem_euclid(n as i64) as usize;
                    s[j] = sin_t[ph];
                    c[j] = cos_t[ph];
                }
                let mut terms = [[0.0f64; 2]; 7];
                let mut low = [0.0f64; 2];
                for j in 0..2 {
                    let aj = a[j][idx];
                    let (t1j, t2j) = (t1[j][idx], t2[j][idx]);
                    let half = 0.5 * lam5 * lam5 * sig[j] * aj * aj;
                    for d in 0..2 {
                        low[d] += half * perp[j][d];
                    }
                    for jp in 0..2 {
                        let ajp = a[jp][idx];
                        let gp = [pa[jp][0][idx], pa[jp][1][idx]];
                        let quad = lam5 * lam5 * sig[j] * aj * ajp * s[j] * s[jp];
                        let slot = if j == jp { 0 } else { 1 };
                        for d in 0..2 {
                            terms[slot][d] += quad * perp[jp][d];
                            terms[2][d] -= lam5 * sig[j] * aj * gp[d] * s[j] * c[jp];
                            terms[3][d] -= lam5 * t1j * perp[jp][d] * ajp * c[j] * s[jp];
                            terms[4][d] += t1j * gp[d] * c[j] * c[jp];
                            terms[5][d] -= lam5 * t2j * perp[jp][d] * ajp * s[j] * s[jp];
                            terms[6][d] += t2j * gp[d] * s[j] * c[jp];
                        }
                    }
                }
                for (m, t) in maxes.iter_mut().zip(&terms) {
                    vec_max(m, *t);
                }
                vec_max(&mut m11, low);
                vec_max(&mut m12, [terms[0][0] - low[0], terms[0][1] - low[1]]);
                for d in 0..2 {
                    total[d][idx] = terms.iter().map(|t| t[d]).sum();
                }
            }
        }
        out.j = maxes;
        out.j11 = m11;
        out.j12 = m12;

        let w = raw_increment(next, &amps.a)?;
        let gw = apply_gamma(sym, &w).to_physical();
        let pw = perp_gradient(&w);
        let mut scale = 0.0f64;
        let mut gap = 0.0f64;
        let (px, py) = (pw.x.to_physical(), pw.y.to_physical());
        for idx in 0..n * n {
            let d = [px[idx] * gw[idx], py[idx] * gw[idx]];
            vec_max(&mut scale, d);
            vec_max(&mut gap, [d[0] - total[0][idx], d[1] - total[1][idx]]);
        }
        out.expansion_residual = if scale > 0.0 { gap / scale } else { gap };
    }

    // gradient part of J11 + grad G_q
    let mut low = VectorField2::zeros(grid);
    for j in 0..2 {
        let sq = exact_product(&amps.a[j], &amps.a[j])?;
        let c = 0.5 * lam5 * lam5 * sig[j];
        low = VectorField2::new(
            low.x.axpy(c * perp[j][0], &sq),
            low.y.axpy(c * perp[j][1], &sq),
        );
    }
    let phi = &helmholtz_split(&low).gradient + g_q;
    out.cancellation = gradient(&phi).sup_norm();
    Ok(out)
}

/// Diagnostics of one step `q -> q + 1`; norms refer to the new level.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepReport {
    pub q: usize,
    pub lambda: u64,
    pub delta: f64,
    pub r: f64,
    pub c0: f64,
    pub xnorm_g: f64,
    pub sup_g: f64,
    pub besov_f: f64,
    pub sup_w: f64,
    pub l2_w: f64,
    pub xnorm_w: f64,
    pub sup_a: [f64; 2],
    pub support_f: f64,
    pub support_g: f64,
    pub support_w: f64,
    pub nash: f64,
    pub dissipation: f64,
    pub oscillation: f64,
    pub j: Option<JTerms>,
    pub relaxed_residual: f64,
    pub breakdown_residual: f64,
    pub leakage: Option<f64>,
    pub weak_residual_max: Option<f64>,
    pub runtime_s: f64,
}

/// Advance one level.
pub fn step(p: &ParamSet, state: &IterationState) -> Result<(IterationState, StepReport)> {
    let clock = Instant::now();
    let coeffs = solve_coeffs(&p.symbol)?;
    let q = state.q;
    let (level, next) = (p.sequences(q)?, p.sequences(q + 1)?);
    let amps = amplitude_fields(p, &coeffs, &state.g, level, next, UNFORCED_PREFACTOR, 1.0)?;
    let w = build_increment(p, next, &amps.a)?;
    let j = j_terms(p, next, &amps, &state.g)?;

    let ledger = error_breakdown(p, state, &w)?;
    let nash = x_norm(&coeffs, &ledger.g_n);
    let dissipation = x_norm(&coeffs, &ledger.g_d);
    let oscillation = x_norm(&coeffs, &ledger.g_o);
    let assembled = ledger.total();
    drop(ledger);

    let f = &state.f + &w;
    let s = stress(&p.symbol, p.gamma, &f)?;
    let h = helmholtz_split(&s);
    let relaxed = relaxed_residual(&s, &h);
    drop(s);
    assert_relaxed("unforced relaxed equation", relaxed)?;
    let g = h.gradient;
    let v = h.rotational;

    let sup_g = g.sup_norm();
    let gap = (&assembled - &g).sup_norm();
    let breakdown_residual = if sup_g > 0.0 { gap / sup_g } else { gap };
    drop(assembled);

    let report = StepReport {
        q: q + 1,
        lambda: next.lambda,
        delta: next.delta,
        r: next.r,
        c0: amps.c0,
        xnorm_g: x_norm(&coeffs, &g),
        sup_g,
        besov_f: besov_holder_norm(&f, p.alpha),
        sup_w: w.sup_norm(),
        l2_w: w.l2_norm(),
        xnorm_w: x_norm(&coeffs, &w),
        sup_a: [amps.a[0].sup_norm(), amps.a[1].sup_norm()],
        support_f: f.support_radius(),
        support_g: g.support_radius(),
        support_w: w.support_radius(),
        nash,
        dissipation,
        oscillation,
        j: Some(j),
        relaxed_residual: relaxed,
        breakdown_residual,
        leakage: None,
        weak_residual_max: None,
        runtime_s: clock.elapsed().as_secs_f64(),
    };
    Ok((IterationState { q: q + 1, f, g, v }, report))
}

/// Outcome of a run. On failure the reports gathered so far are kept.
#[derive(Debug)]
pub struct Run {
    pub state: IterationState,
    pub reports: Vec<StepReport>,
    pub failure: Option<Error>,
}

impl Run {
    pub fn into_result(self) -> Result<(IterationState, Vec<StepReport>)> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok((self.state, self.reports)),
        }
    }
}

/// Run `q = 0 .. q_max` from the zero state.
pub fn run(p: &ParamSet) -> Run {
    run_with(p, |_, _| Ok(()))
}

/// Like [`run`]; `observe` sees each new state and may add to its report.
pub fn run_with(
    p: &ParamSet,
    mut observe: impl FnMut(&IterationState, &mut StepReport) -> Result<()>,
) -> Run {
    let grid = match TorusGrid::new(p.n) {
        Ok(g) => g,
        Err(e) => {
            return Run {
                state: IterationState::zero(&TorusGrid::new(4).unwrap()),
                reports: Vec::new(),
                failure: Some(e),
            }
        }
    };
    let mut state = IterationState::zero(&grid);
    let mut reports = Vec::new();
    for q in 0..p.q_max {
        let outcome = step(p, &state).and_then(|(next, mut report)| {
            observe(&next, &mut report)?;
            Ok((next, report))
        });
        match outcome {
            Ok((next, report)) => {
                log::info!(
                    "unforced q={} lambda={} |G|_X={:.3e} ({:.1}s)",
                    report.q,
                    report.lambda,
                    report.xnorm_g,
                    report.runtime_s
                );
                state = next;
                reports.push(report);
            }
            Err(e) => {
                log::error!("unforced step {} -> {} failed: {e}", q, q + 1);
                return Run {
                    state,
                    reports,
                    failure: Some(e),
                };
            }
        }
    }
    Run {
        state,
        reports,
        failure: None,
    }
}
