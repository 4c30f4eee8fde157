use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

struct Plans {
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

/// Uniform n x n grid on [0, 2pi)^2.
///
/// Physical samples are stored row-major with x1 fastest. Spectral
/// coefficients use the half-plane layout `k1 * n + i2` for
/// `k1 in 0..=n/2`, where `i2` is the FFT index of `k2`; the negative-k1
/// half follows from Hermitian symmetry.
#[derive(Clone)]
pub struct TorusGrid {
    n: usize,
    plans: Arc<Plans>,
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid").field("n", &self.n).finish()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for TorusGrid {}

impl TorusGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(n));
        }
        let mut real = RealFftPlanner::<f64>::new();
        let mut cplx = FftPlanner::<f64>::new();
        let plans = Plans {
            r2c: real.plan_fft_forward(n),
            c2r: real.plan_fft_inverse(n),
            fwd: cplx.plan_fft_forward(n),
            inv: cplx.plan_fft_inverse(n),
        };
        Ok(Self {
            n,
            plans: Arc::new(plans),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored half-plane coefficients, `(n/2 + 1) * n`.
    pub fn spectral_len(&self) -> usize {
        (self.n / 2 + 1) * self.n
    }

    pub fn physical_len(&self) -> usize {
        self.n * self.n
    }

    /// Largest wavevector norm a product may reach without aliasing.
    pub fn alias_free_radius(&self) -> f64 {
        (self.n / 2) as f64 - 1.0
    }

    /// Sample coordinate `2 pi j / n`.
    pub fn coord(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    /// Signed wavenumber for FFT index `i`, in `-n/2+1 ..= n/2`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// FFT index of a signed wavenumber (taken modulo n).
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Wavevector stored at half-plane slot `idx`.
    pub fn wavevector(&self, idx: usize) -> [i64; 2] {
        let k1 = (idx / self.n) as i64;
        let k2 = self.wavenumber(idx % self.n);
        [k1, k2]
    }

    /// True when `k` touches the Nyquist line in either component.
    pub fn is_nyquist(&self, k: [i64; 2]) -> bool {
        let h = (self.n / 2) as i64;
        k[0].abs() == h || k[1].abs() == h
    }

    /// Half-plane slot holding `k` directly, or holding `-k` (then `true`
    /// is returned and the caller conjugates).
    pub fn slot(&self, k: [i64; 2]) -> (usize, bool) {
        let n = self.n as i64;
        let h = n / 2;
        let k1 = k[0].rem_euclid(n);
        let k1s = if k1 > h { k1 - n } else { k1 };
        if k1s >= 0 {
            (k1s as usize * self.n + self.index_of(k[1]), false)
        } else {
            ((-k1s) as usize * self.n + self.index_of(-k[1]), true)
        }
    }

    /// Forward transform with `1/n^2` normalisation: the constant field 1
    /// maps to a unit zero mode and `cos(x1)` to 1/2 at `k = (+-1, 0)`.
    pub(crate) fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        let n = self.n;
        let h = n / 2 + 1;
        debug_assert_eq!(samples.len(), n * n);
        let mut rows = vec![Complex64::new(0.0, 0.0); n * h];
        let mut input = vec![0.0; n];
        let mut scratch = self.plans.r2c.make_scratch_vec();
        for (j2, out) in rows.chunks_exact_mut(h).enumerate() {
            input.copy_from_slice(&samples[j2 * n..(j2 + 1) * n]);
            self.plans
                .r2c
                .process_with_scratch(&mut input, out, &mut scratch)
                .expect("r2c buffer sizes are fixed by the grid");
        }
        let mut cols = vec![Complex64::new(0.0, 0.0); n * h];
        transpose(&rows, &mut cols, n, h);
        drop(rows);
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.plans.fwd.get_inplace_scratch_len()];
        self.plans.fwd.process_with_scratch(&mut cols, &mut scratch);
        let scale = 1.0 / (n * n) as f64;
        for c in cols.iter_mut() {
            *c *= scale;
        }
        cols
    }

    /// Inverse transform. Returns the samples and the largest imaginary
    /// residue (relative to the largest partial sum) discarded on the
    /// self-conjugate columns.
    pub(crate) fn inverse(&self, coeffs: &[Complex64]) -> (Vec<f64>, f64) {
        let n = self.n;
        let h = n / 2 + 1;
        debug_assert_eq!(coeffs.len(), n * h);
        let mut cols = coeffs.to_vec();
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.plans.inv.get_inplace_scratch_len()];
        self.plans.inv.process_with_scratch(&mut cols, &mut scratch);
        let mut rows = vec![Complex64::new(0.0, 0.0); n * h];
        transpose(&cols, &mut rows, h, n);
        drop(cols);
        let mut max_abs = 0.0f64;
        let mut max_im = 0.0f64;
        for c in &rows {
            max_abs = max_abs.max(c.norm());
        }
        let mut out = vec![0.0; n * n];
        let mut scratch = self.plans.c2r.make_scratch_vec();
        for (j2, row) in rows.chunks_exact_mut(h).enumerate() {
            max_im = max_im.max(row[0].im.abs()).max(row[h - 1].im.abs());
            row[0].im = 0.0;
            row[h - 1].im = 0.0;
            self.plans
                .c2r
                .process_with_scratch(row, &mut out[j2 * n..(j2 + 1) * n], &mut scratch)
                .expect("c2r buffer sizes are fixed by the grid");
        }
        let residue = if max_abs > 0.0 { max_im / max_abs } else { 0.0 };
        (out, residue)
    }
}

/// Blocked transpose of a `rows x cols` matrix into `cols x rows`.
fn transpose<T: Copy>(src: &[T], dst: &mut [T], rows: usize, cols: usize) {
    const B: usize = 32;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Smallest power of two that is at least `24 * lambda`.
pub fn auto_grid_size(lambda: u64) -> usize {
    (24 * lambda.max(1)).next_power_of_two() as usize
}
