#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use evenscalar::multiplier::OddSymbol;
use evenscalar::torus::{exact_product, SpectralField, TorusGrid};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random real field with modes `|k| <= radius`, one coefficient per `+-k` pair.
pub fn random_field(grid: &TorusGrid, radius: f64, rng: &mut ChaCha8Rng, mean_zero: bool) -> SpectralField {
    let r = radius.floor() as i64;
    let mut modes = Vec::new();
    for k1 in 0..=r {
        for k2 in -r..=r {
            if (k1 == 0 && k2 < 0) || ((k1 * k1 + k2 * k2) as f64) > radius * radius {
                continue;
            }
            if k1 == 0 && k2 == 0 {
                if !mean_zero {
                    modes.push(([0, 0], Complex64::new(rng.gen_range(-1.0..1.0), 0.0)));
                }
                continue;
            }
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            modes.push(([k1, k2], c));
        }
    }
    SpectralField::from_modes(grid, &modes)
}

/// Every nonzero `(k, c)` of `f` over the full lattice window.
pub fn modes(f: &SpectralField) -> Vec<([i64; 2], Complex64)> {
    let h = (f.grid().n() / 2) as i64;
    let mut out = Vec::new();
    for k1 in (1 - h)..=h {
        for k2 in (1 - h)..=h {
            let c = f.coeff([k1, k2]);
            if c.norm() > 0.0 {
                out.push(([k1, k2], c));
            }
        }
    }
    out
}

/// Direct evaluation of `sum_k w(k) c_k e^{ik.x}` at every grid point, real part.
pub fn synthesize(grid: &TorusGrid, terms: &[([i64; 2], Complex64)], w: impl Fn([i64; 2]) -> Complex64) -> Vec<f64> {
    let n = grid.n();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut out = vec![0.0; n * n];
    for j2 in 0..n {
        for j1 in 0..n {
            let (x1, x2) = (j1 as f64 * h, j2 as f64 * h);
            let mut s = Complex64::new(0.0, 0.0);
            for &(k, c) in terms {
                let phase = k[0] as f64 * x1 + k[1] as f64 * x2;
                s += w(k) * c * Complex64::new(phase.cos(), phase.sin());
            }
            out[j2 * n + j1] = s.re;
        }
    }
    out
}

pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Largest coefficient gap between `exact_product(a, b)` and the direct
/// convolution of the two coefficient lists, with the largest convolution entry.
pub fn convolution_gap(a: &SpectralField, b: &SpectralField) -> (f64, f64) {
    let mut conv: HashMap<[i64; 2], Complex64> = HashMap::new();
    for (k, x) in modes(a) {
        for (l, y) in modes(b) {
            *conv.entry([k[0] + l[0], k[1] + l[1]]).or_default() += x * y;
        }
    }
    let p = exact_product(a, b).unwrap();
    let scale = conv.values().map(|c| c.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for (k, c) in &conv {
        worst = worst.max((p.coeff(*k) - c).norm());
    }
    for (k, c) in modes(&p) {
        if !conv.contains_key(&k) {
            worst = worst.max(c.norm());
        }
    }
    (worst, scale)
}

/// Quadrature of `-int theta u.grad psi + int theta Lambda^gamma psi - int g psi`
/// with every factor synthesised pointwise from its Fourier series.
pub fn quadrature_residual(
    f: &SpectralField,
    sym: &OddSymbol,
    gamma: f64,
    g: Option<&SpectralField>,
    psi_k: [i64; 2],
    sine: bool,
) -> (f64, f64) {
    let grid = f.grid();
    let n = grid.n();
    // Gamma kills the modes where sigma vanishes, so they carry no velocity
    let terms: Vec<_> = modes(f)
        .into_iter()
        .filter(|(k, _)| sym.sigma(*k).abs() > 1e-12 * ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt())
        .collect();
    let i = Complex64::new(0.0, 1.0);
    let theta = synthesize(grid, &terms, |k| i * sym.sigma(k));
    let u1 = synthesize(grid, &terms, |k| -i * k[1] as f64);
    let u2 = synthesize(grid, &terms, |k| i * k[0] as f64);
    let gv = g.map(|g| synthesize(grid, &modes(g), |_| Complex64::new(1.0, 0.0)));
    let kk = ((psi_k[0] * psi_k[0] + psi_k[1] * psi_k[1]) as f64).sqrt().powf(gamma);
    let h = 2.0 * PI / n as f64;
    let (mut total, mut scale) = (0.0, 0.0);
    for j2 in 0..n {
        for j1 in 0..n {
            let idx = j2 * n + j1;
            let ph = psi_k[0] as f64 * j1 as f64 * h + psi_k[1] as f64 * j2 as f64 * h;
            let (psi, dpsi) = if sine { (ph.sin(), ph.cos()) } else { (ph.cos(), -ph.sin()) };
            let grad = [psi_k[0] as f64 * dpsi, psi_k[1] as f64 * dpsi];
            let transport = theta[idx] * (u1[idx] * grad[0] + u2[idx] * grad[1]);
            let diss = theta[idx] * kk * psi;
            let force = gv.as_ref().map_or(0.0, |g| g[idx] * psi);
            total += -transport + diss - force;
            scale += transport.abs() + diss.abs() + force.abs();
        }
    }
    let w = 4.0 * PI * PI / (n * n) as f64;
    (total * w, scale * w)
}

