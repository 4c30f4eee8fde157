//! Sum-difference scheme for the forced equation. The half-sum `Pi` and
//! half-difference `mu` of two prospective solutions are advanced by
//! alternating active and passive increments `M`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_complex::Complex64;

use crate::error::Result;
use crate::multiplier::{apply_fractional, apply_gamma, laplacian};
use crate::params::ParamSet;
use crate::stress::{assert_relaxed, bilinear, dissipative, relaxed_residual};
use crate::torus::{helmholtz_split, SpectralField, TorusGrid, VectorField2};
use crate::unforced::{amplitude_fields, build_increment, Amplitudes};
use crate::wave::{inverse_div, solve_coeffs, x_norm, DecompCoeffs};

/// Amplitude prefactor of the forced scheme. The quadratic term enters the
/// difference equation as `-+ 2 Gamma M perp-grad M`, so the unforced
/// `sqrt(2)/5` is halved in square.
pub const FORCED_PREFACTOR: f64 = 0.2;

/// Radius of the seed stress spectrum.
pub const SEED_RADIUS: i64 = 4;

#[derive(Clone, Debug)]
pub struct ForcedState {
    pub q: usize,
    pub pi: SpectralField,
    pub mu: SpectralField,
    pub g: SpectralField,
    pub gt: SpectralField,
    pub v: SpectralField,
    pub vt: SpectralField,
    /// True while `gt` is the seed target rather than a stress potential.
    pub seeded: bool,
}

/// `Gamma^{-1}theta = Pi + mu` and `Gamma^{-1}theta~ = Pi - mu`.
pub fn eta(state: &ForcedState) -> (SpectralField, SpectralField) {
    (&state.pi + &state.mu, &state.pi - &state.mu)
}

/// Random mean-zero field with modes `0 < |k| <= 4`, scaled to unit X-norm.
pub fn seed_field(grid: &TorusGrid, coeffs: &DecompCoeffs, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    for k1 in 0..=SEED_RADIUS {
        for k2 in -SEED_RADIUS..=SEED_RADIUS {
            let upper = k1 > 0 || k2 > 0;
            if upper && k1 * k1 + k2 * k2 <= SEED_RADIUS * SEED_RADIUS {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                modes.push(([k1, k2], c));
            }
        }
    }
    let f = SpectralField::from_modes(grid, &modes);
    f.scale(1.0 / x_norm(coeffs, &f))
}

impl ForcedState {
    /// `Pi = mu = 0`, `G = 0` and `G~ = delta_0 * seed`. The seed is not a
    /// solution of the relaxed system; it only sets the stress targeted by
    /// the first active step.
    pub fn initial(p: &ParamSet, grid: &TorusGrid, seed: u64) -> Result<Self> {
        let coeffs = solve_coeffs(&p.symbol)?;
        let z = SpectralField::zeros(grid);
        Ok(Self {
            q: 0,
            pi: z.clone(),
            mu: z.clone(),
            g: z.clone(),
            gt: seed_field(grid, &coeffs, seed).scale(p.delta(0)?),
            v: z.clone(),
            vt: z,
            seeded: true,
        })
    }

    /// `(theta, theta~, g1, g2)`.
    pub fn extract(&self, p: &ParamSet) -> Extracted {
        let (e, et) = eta(self);
        Extracted {
            theta: apply_gamma(&p.symbol, &e),
            theta_tilde: apply_gamma(&p.symbol, &et),
            g1: laplacian(&(&self.g + &self.gt)),
            g2: laplacian(&(&self.g - &self.gt)),
        }
    }
}

/// Two forced solutions sharing the structure of one state.
#[derive(Clone, Debug)]
pub struct Extracted {
    pub theta: SpectralField,
    pub theta_tilde: SpectralField,
    pub g1: SpectralField,
    pub g2: SpectralField,
}

/// Active (odd) half-steps correct the difference equation with
/// `mu += M, Pi -= M`; passive (even) ones use `mu += M, Pi += M`.
pub fn is_active(q: usize) -> bool {
    q % 2 == 0
}

/// Amplitudes of `M_{q+1}`: radicand `c0 - R_j G~/(lambda delta)` on active
/// steps and `c0 + R_j G~/(lambda delta)` on passive ones.
pub fn amplitudes_forced(
    p: &ParamSet,
    coeffs: &DecompCoeffs,
    gt: &SpectralField,
    q: usize,
    sign: f64,
) -> Result<Amplitudes> {
    let (level, next) = (p.sequences(q)?, p.sequences(q + 1)?);
    amplitude_fields(p, coeffs, gt, level, next, FORCED_PREFACTOR, sign)
}

/// Both relaxed stresses of the sum-difference system.
pub fn forced_stresses(p: &ParamSet, pi: &SpectralField, mu: &SpectralField) -> Result<(VectorField2, VectorField2)> {
    let sym = &p.symbol;
    let s1 = &(&bilinear(sym, pi, pi)? + &bilinear(sym, mu, mu)?) - &dissipative(sym, p.gamma, pi);
    let s2 = &(&bilinear(sym, mu, pi)? + &bilinear(sym, pi, mu)?) - &dissipative(sym, p.gamma, mu);
    Ok((s1, s2))
}

/// Diagnostics of one half-step.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ForcedReport {
    pub q: usize,
    pub active: bool,
    pub lambda: u64,
    pub delta: f64,
    pub r: f64,
    pub c0: f64,
    pub xnorm_g: f64,
    pub xnorm_gt: f64,
    pub sup_g: f64,
    pub sup_gt: f64,
    pub sup_m: f64,
    pub besov_pi: f64,
    pub besov_mu: f64,
    pub support_pi: f64,
    pub support_mu: f64,
    pub support_gt: f64,
    /// `sup|eta_{q+1} - eta_q| / |eta_q|` on active steps, the same for
    /// `eta~` on passive ones.
    pub skip: f64,
    pub nash: f64,
    pub dissipation: f64,
    pub oscillation: f64,
    /// Gap between the derived error ledger of `G~` and the recomputed one.
    pub ledger_residual_gt: f64,
    /// Same for `G`.
    pub ledger_residual_g: f64,
    pub relaxed_residual: [f64; 2],
    pub l2_theta_diff: f64,
    pub l2_g_diff: f64,
    pub headroom_flag: bool,
    pub weak_residual_max: Option<[f64; 2]>,
    pub runtime_s: f64,
}

fn relative(gap: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        gap / scale
    } else {
        gap
    }
}

/// Advance one half-step `q -> q + 1`.
pub fn half_step(p: &ParamSet, state: &ForcedState) -> Result<(ForcedState, ForcedReport)> {
    let clock = Instant::now();
    let sym = &p.symbol;
    let coeffs = solve_coeffs(sym)?;
    let q = state.q;
    let active = is_active(q);
    let sign = if active { -1.0 } else { 1.0 };
    let next = p.sequences(q + 1)?;
    let amps = amplitudes_forced(p, &coeffs, &state.gt, q, sign)?;
    let m = build_increment(p, next, &amps.a)?;

    let (e, et) = eta(state);
    let mu = &state.mu + &m;
    let pi = if active { &state.pi - &m } else { &state.pi + &m };

    // derived ledgers: Nash pair against the untouched combination
    let partner = if active { &et } else { &e };
    let nash_v = &bilinear(sym, partner, &m)? + &bilinear(sym, &m, partner)?;
    let quad = bilinear(sym, &m, &m)?;
    let diss = dissipative(sym, p.gamma, &m);
    let g_n = inverse_div(&nash_v);
    let g_d = apply_fractional(p.gamma - 2.0, &apply_gamma(sym, &m)).scale(-1.0);
    let zero = SpectralField::zeros(m.grid());
    let carried = if state.seeded { &zero } else { &state.gt };
    let g_o = &inverse_div(&quad).scale(2.0 * sign) + carried;
    let ledger_gt = &(&g_n + &g_d) + &g_o;
    let ledger_g = if active {
        &(&(&inverse_div(&quad).scale(2.0) - &g_n) - &g_d) + &state.g
    } else {
        &(&(&inverse_div(&quad).scale(2.0) + &g_n) + &g_d) + &state.g
    };
    let nash = x_norm(&coeffs, &g_n);
    let dissipation = x_norm(&coeffs, &g_d);
    let oscillation = x_norm(&coeffs, &g_o);
    drop((nash_v, quad, diss, g_n, g_d, g_o));

    let (s1, s2) = forced_stresses(p, &pi, &mu)?;
    let h1 = helmholtz_split(&s1);
    let h2 = helmholtz_split(&s2);
    let relaxed = [relaxed_residual(&s1, &h1), relaxed_residual(&s2, &h2)];
    drop((s1, s2));
    assert_relaxed("forced relaxed system (sum)", relaxed[0])?;
    assert_relaxed("forced relaxed system (difference)", relaxed[1])?;

    let out = ForcedState {
        q: q + 1,
        pi,
        mu,
        g: h1.gradient,
        gt: h2.gradient,
        v: h1.rotational,
        vt: h2.rotational,
        seeded: false,
    };
    let (e1, et1) = eta(&out);
    let skip = if active {
        relative((&e1 - &e).sup_norm(), e.sup_norm())
    } else {
        relative((&et1 - &et).sup_norm(), et.sup_norm())
    };
    let sup_g = out.g.sup_norm();
    let sup_gt = out.gt.sup_norm();
    let xnorm_g = x_norm(&coeffs, &out.g);
    let report = ForcedReport {
        q: q + 1,
        active,
        lambda: next.lambda,
        delta: next.delta,
        r: next.r,
        c0: amps.c0,
        xnorm_g,
        xnorm_gt: x_norm(&coeffs, &out.gt),
        sup_g,
        sup_gt,
        sup_m: m.sup_norm(),
        besov_pi: crate::torus::besov_holder_norm(&out.pi, p.alpha),
        besov_mu: crate::torus::besov_holder_norm(&out.mu, p.alpha),
        support_pi: out.pi.support_radius(),
        support_mu: out.mu.support_radius(),
        support_gt: out.gt.support_radius(),
        skip,
        nash,
        dissipation,
        oscillation,
        ledger_residual_gt: relative((&ledger_gt - &out.gt).sup_norm(), sup_gt),
        ledger_residual_g: relative((&ledger_g - &out.g).sup_norm(), sup_g),
        relaxed_residual: relaxed,
        l2_theta_diff: apply_gamma(sym, &out.mu).l2_norm() * 2.0,
        l2_g_diff: laplacian(&out.gt).l2_norm() * 2.0,
        headroom_flag: xnorm_g <= 1.0 - next.delta.sqrt(),
        weak_residual_max: None,
        runtime_s: clock.elapsed().as_secs_f64(),
    };
    Ok((out, report))
}

/// Outcome of a forced run; reports survive a failure.
#[derive(Debug)]
pub struct ForcedRun {
    pub state: ForcedState,
    pub reports: Vec<ForcedReport>,
    pub failure: Option<crate::Error>,
}

impl ForcedRun {
    pub fn into_result(self) -> Result<(ForcedState, Vec<ForcedReport>)> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok((self.state, self.reports)),
        }
    }
}

/// Run `q_max` half-steps from the seeded initial state.
pub fn run_forced(p: &ParamSet, seed: u64) -> ForcedRun {
    run_forced_with(p, seed, |_, _| Ok(()))
}

/// Like [`run_forced`]; `observe` sees each new state.
pub fn run_forced_with(
    p: &ParamSet,
    seed: u64,
    mut observe: impl FnMut(&ForcedState, &mut ForcedReport) -> Result<()>,
) -> ForcedRun {
    let start = TorusGrid::new(p.n).and_then(|g| ForcedState::initial(p, &g, seed));
    let mut state = match start {
        Ok(s) => s,
        Err(e) => {
            let g = TorusGrid::new(4).unwrap();
            let z = SpectralField::zeros(&g);
            return ForcedRun {
                state: ForcedState {
                    q: 0,
                    pi: z.clone(),
                    mu: z.clone(),
                    g: z.clone(),
                    gt: z.clone(),
                    v: z.clone(),
                    vt: z,
                    seeded: false,
                },
                reports: Vec::new(),
                failure: Some(e),
            };
        }
    };
    let mut reports = Vec::new();
    for q in 0..p.q_max {
        let outcome = half_step(p, &state).and_then(|(next, mut rep)| {
            observe(&next, &mut rep)?;
            Ok((next, rep))
        });
        match outcome {
            Ok((next, rep)) => {
                log::info!(
                    "forced q={} ({}) |G~|_X={:.3e} |theta-theta~|_2={:.3e} ({:.1}s)",
                    rep.q,
                    if rep.active { "active" } else { "passive" },
                    rep.xnorm_gt,
                    rep.l2_theta_diff,
                    rep.runtime_s
                );
                state = next;
                reports.push(rep);
            }
            Err(e) => {
                log::error!("forced half-step {} -> {} failed: {e}", q, q + 1);
                return ForcedRun {
                    state,
                    reports,
                    failure: Some(e),
                };
            }
        }
    }
    ForcedRun {
        state,
        reports,
        failure: None,
    }
}
