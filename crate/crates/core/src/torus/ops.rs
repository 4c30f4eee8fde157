use num_complex::Complex64;

use super::field::{SpectralField, VectorField2};
use crate::error::{Error, Result};

/// Product of two fields with exact coefficients.
///
/// The pointwise product on the grid is alias free as long as the two
/// support radii add up to at most `n/2 - 1`; anything larger is rejected.
pub fn exact_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.check_grid(g);
    let required = f.support_radius() + g.support_radius();
    ensure_alias_free(f, required)?;
    let mut a = f.to_physical();
    let b = g.to_physical();
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    SpectralField::from_physical(f.grid(), &a)
}

pub(crate) fn ensure_alias_free(f: &SpectralField, required: f64) -> Result<()> {
    if required > f.grid().alias_free_radius() + 1e-9 {
        return Err(Error::GridTooSmall {
            required,
            n: f.grid().n(),
        });
    }
    Ok(())
}

/// Which trigonometric factor [`modulate`] multiplies by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Cos,
    Sin,
}

/// `a cos(c.x)` or `a sin(c.x)` for a lattice carrier `c`, computed by
/// shifting coefficients. Rejected unless `support(a) + |c| <= n/2 - 1`.
pub fn modulate(a: &SpectralField, carrier: [i64; 2], phase: Phase) -> Result<SpectralField> {
    let radius = a.support_radius();
    let cn = ((carrier[0] * carrier[0] + carrier[1] * carrier[1]) as f64).sqrt();
    ensure_alias_free(a, radius + cn)?;
    let grid = a.grid();
    let mut out = SpectralField::zeros(grid);
    if radius == 0.0 && a.mean() == 0.0 {
        return Ok(out);
    }
    let (plus, minus) = match phase {
        Phase::Cos => (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)),
        Phase::Sin => (Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5)),
    };
    let r = radius.floor() as i64;
    let r2 = radius * radius * (1.0 + 1e-12);
    let coeffs = out.coeffs_mut();
    let mut put = |k: [i64; 2], v: Complex64| {
        let (slot, conj) = grid.slot(k);
        if !conj {
            coeffs[slot] += v;
        }
    };
    for k1 in -r..=r {
        for k2 in -r..=r {
            if ((k1 * k1 + k2 * k2) as f64) > r2 {
                continue;
            }
            let c = a.coeff([k1, k2]);
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            put([k1 + carrier[0], k2 + carrier[1]], c * plus);
            put([k1 - carrier[0], k2 - carrier[1]], c * minus);
        }
    }
    Ok(out)
}

/// Split of a vector field into `mean + grad G + perp-grad V`.
#[derive(Clone, Debug)]
pub struct Helmholtz {
    pub mean: [f64; 2],
    pub gradient: SpectralField,
    pub rotational: SpectralField,
}

impl Helmholtz {
    /// `mean + grad G + perp-grad V`.
    pub fn reassemble(&self) -> VectorField2 {
        let grid = self.gradient.grid();
        let g = &self.gradient;
        let v = &self.rotational;
        let mut x = g
            .apply_symbol(true, |k| Complex64::new(0.0, k[0] as f64))
            .axpy(1.0, &v.apply_symbol(true, |k| Complex64::new(0.0, -(k[1] as f64))));
        let mut y = g
            .apply_symbol(true, |k| Complex64::new(0.0, k[1] as f64))
            .axpy(1.0, &v.apply_symbol(true, |k| Complex64::new(0.0, k[0] as f64)));
        x.coeffs_mut()[0] = Complex64::new(self.mean[0], 0.0);
        y.coeffs_mut()[0] = Complex64::new(self.mean[1], 0.0);
        debug_assert!(x.grid() == grid);
        VectorField2::new(x, y)
    }
}

/// Torus Helmholtz decomposition:
/// `G^(k) = -i k.S^(k) / |k|^2`, `V^(k) = -i kperp.S^(k) / |k|^2`
/// with `kperp = (-k2, k1)`; the zero mode goes to `mean`.
pub fn helmholtz_split(s: &VectorField2) -> Helmholtz {
    let grid = s.grid();
    let n = grid.n();
    let len = grid.spectral_len();
    let (sx, sy) = (s.x.coeffs(), s.y.coeffs());
    let mut g = vec![Complex64::new(0.0, 0.0); len];
    let mut v = vec![Complex64::new(0.0, 0.0); len];
    for idx in 1..len {
        let k = grid.wavevector(idx);
        if grid.is_nyquist(k) {
            continue;
        }
        let (k1, k2) = (k[0] as f64, k[1] as f64);
        let inv = 1.0 / (k1 * k1 + k2 * k2);
        let minus_i = Complex64::new(0.0, -inv);
        g[idx] = minus_i * (sx[idx] * k1 + sy[idx] * k2);
        v[idx] = minus_i * (sx[idx] * (-k2) + sy[idx] * k1);
    }
    debug_assert_eq!(len % n, 0);
    Helmholtz {
        mean: s.mean(),
        gradient: SpectralField::from_raw(grid, g),
        rotational: SpectralField::from_raw(grid, v),
    }
}

/// Dyadic proxy for the `C^s` norm: `sup_j 2^{js} |P_j f|_inf` over the
/// blocks `|k| <= 1` (j = 0) and `2^{j-1} < |k| <= 2^j` (j >= 1).
pub fn besov_holder_norm(f: &SpectralField, s: f64) -> f64 {
    dyadic_block_sups(f)
        .into_iter()
        .enumerate()
        .map(|(j, sup)| 2f64.powf(j as f64 * s) * sup)
        .fold(0.0, f64::max)
}

/// Sup norm of every dyadic block of `f`, indexed by block number.
pub fn dyadic_block_sups(f: &SpectralField) -> Vec<f64> {
    let grid = f.grid();
    let coeffs = f.coeffs();
    let block_of = |idx: usize| -> usize {
        let k = grid.wavevector(idx);
        let r2 = (k[0] * k[0] + k[1] * k[1]) as u64;
        if r2 <= 1 {
            0
        } else {
            // smallest j with r2 <= 4^j
            let mut j = 1;
            while r2 > 1u64 << (2 * j) {
                j += 1;
            }
            j
        }
    };
    let mut occupied: Vec<bool> = Vec::new();
    for (idx, c) in coeffs.iter().enumerate() {
        if c.norm() > 0.0 {
            let j = block_of(idx);
            if occupied.len() <= j {
                occupied.resize(j + 1, false);
            }
            occupied[j] = true;
        }
    }
    occupied
        .iter()
        .enumerate()
        .map(|(j, &busy)| {
            if !busy {
                return 0.0;
            }
            let mut block = f.clone();
            for (idx, c) in block.coeffs_mut().iter_mut().enumerate() {
                if block_of(idx) != j {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
            block.sup_norm()
        })
        .collect()
}
