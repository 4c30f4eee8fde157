use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::grid::TorusGrid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coefficients below this fraction of the largest one do not count toward
/// the support radius.
pub const SUPPORT_THRESHOLD: f64 = 1e-13;

/// A real scalar field on the torus, held by its Fourier coefficients.
///
/// Coefficients are normalised so that `f(x) = sum_k c(k) e^{i k.x}`.
/// Only the half plane `k1 >= 0` is stored; `c(-k) = conj(c(k))` is implied.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &TorusGrid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.spectral_len()],
        }
    }

    /// Transform physical samples (row-major, x1 fastest).
    pub fn from_physical(grid: &TorusGrid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.physical_len() {
            return Err(Error::Config(format!(
                "expected {} samples, got {}",
                grid.physical_len(),
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs: grid.forward(samples),
        })
    }

    /// Sample an analytic function on the grid and transform it.
    pub fn from_fn(grid: &TorusGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let n = grid.n();
        let mut samples = vec![0.0; n * n];
        for j2 in 0..n {
            let x2 = grid.coord(j2);
            for j1 in 0..n {
                samples[j2 * n + j1] = f(grid.coord(j1), x2);
            }
        }
        Self::from_physical(grid, &samples)
    }

    /// Build from a full `n x n` coefficient array indexed `i2 * n + i1`
    /// (FFT ordering in both axes). The array must be Hermitian to within
    /// `1e-9` relative to its largest entry.
    pub fn from_full_coefficients(grid: &TorusGrid, full: &[Complex64]) -> Result<Self> {
        let n = grid.n();
        if full.len() != n * n {
            return Err(Error::Config(format!(
                "expected {} coefficients, got {}",
                n * n,
                full.len()
            )));
        }
        if let Some(i) = full.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let scale = full.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut worst = 0.0f64;
        for i2 in 0..n {
            for i1 in 0..n {
                let c = full[i2 * n + i1];
                let p = full[((n - i2) % n) * n + (n - i1) % n];
                worst = worst.max((c - p.conj()).norm());
            }
        }
        let rel = if scale > 0.0 { worst / scale } else { 0.0 };
        if rel > 1e-9 {
            return Err(Error::HermitianViolation(rel));
        }
        let mut out = Self::zeros(grid);
        for k1 in 0..=n / 2 {
            for i2 in 0..n {
                out.coeffs[k1 * n + i2] = full[i2 * n + k1];
            }
        }
        Ok(out)
    }

    /// Full `n x n` coefficient array in FFT ordering, `i2 * n + i1`.
    pub fn to_full_coefficients(&self) -> Vec<Complex64> {
        let n = self.grid.n();
        let mut full = vec![ZERO; n * n];
        for i2 in 0..n {
            for i1 in 0..n {
                let k = [self.grid.wavenumber(i1), self.grid.wavenumber(i2)];
                full[i2 * n + i1] = self.coeff(k);
            }
        }
        full
    }

    /// Field with prescribed modes; each `(k, c)` also sets `c(-k) = conj(c)`.
    pub fn from_modes(grid: &TorusGrid, modes: &[([i64; 2], Complex64)]) -> Self {
        let mut f = Self::zeros(grid);
        for &(k, c) in modes {
            f.add_mode(k, c);
        }
        f
    }

    /// `amp * cos(k . x)`.
    pub fn cosine(grid: &TorusGrid, k: [i64; 2], amp: f64) -> Self {
        if k == [0, 0] {
            return Self::from_modes(grid, &[(k, Complex64::new(amp, 0.0))]);
        }
        Self::from_modes(grid, &[(k, Complex64::new(0.5 * amp, 0.0))])
    }

    /// `amp * sin(k . x)`.
    pub fn sine(grid: &TorusGrid, k: [i64; 2], amp: f64) -> Self {
        if k == [0, 0] {
            return Self::zeros(grid);
        }
        Self::from_modes(grid, &[(k, Complex64::new(0.0, -0.5 * amp))])
    }

    /// Add `c e^{ik.x} + conj(c) e^{-ik.x}`. Self-conjugate wavevectors
    /// (`k = 0` and aliased Nyquist corners) receive `Re c`.
    pub fn add_mode(&mut self, k: [i64; 2], c: Complex64) {
        let n = self.grid.n();
        let (slot, conj) = self.grid.slot(k);
        let (pslot, _) = self.grid.slot([-k[0], -k[1]]);
        let col = slot / n;
        if col == 0 || col == n / 2 {
            if slot == pslot {
                self.coeffs[slot] += Complex64::new(c.re, 0.0);
            } else {
                self.coeffs[slot] += c;
                self.coeffs[pslot] += c.conj();
            }
        } else {
            self.coeffs[slot] += if conj { c.conj() } else { c };
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// Stored half-plane coefficients (see [`TorusGrid`] for the layout).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub(crate) fn from_raw(grid: &TorusGrid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.spectral_len());
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    /// Coefficient at an arbitrary lattice wavevector (zero off the grid).
    pub fn coeff(&self, k: [i64; 2]) -> Complex64 {
        let h = (self.grid.n() / 2) as i64;
        let inside = |v: i64| v > -h && v <= h;
        if !inside(k[0]) || !inside(k[1]) {
            return ZERO;
        }
        let (slot, conj) = self.grid.slot(k);
        let c = self.coeffs[slot];
        if conj {
            c.conj()
        } else {
            c
        }
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Physical samples; the imaginary residue is dropped.
    pub fn to_physical(&self) -> Vec<f64> {
        self.grid.inverse(&self.coeffs).0
    }

    /// Physical samples together with the relative imaginary residue that
    /// was discarded.
    pub fn to_physical_with_residue(&self) -> (Vec<f64>, f64) {
        self.grid.inverse(&self.coeffs)
    }

    /// Apply a Fourier multiplier. `odd` multipliers are not well defined on
    /// the Nyquist lines and annihilate them.
    pub fn apply_symbol(&self, odd: bool, symbol: impl Fn([i64; 2]) -> Complex64) -> Self {
        let g = &self.grid;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                if c == ZERO {
                    return ZERO;
                }
                let k = g.wavevector(idx);
                if odd && g.is_nyquist(k) {
                    ZERO
                } else {
                    c * symbol(k)
                }
            })
            .collect();
        Self::from_raw(g, coeffs)
    }

    /// Real multiplier that only depends on `|k|^2`.
    pub fn apply_radial(&self, symbol: impl Fn(f64) -> f64) -> Self {
        self.apply_symbol(false, |k| {
            let k2 = (k[0] * k[0] + k[1] * k[1]) as f64;
            Complex64::new(symbol(k2), 0.0)
        })
    }

    /// Largest `|k|` whose coefficient exceeds `1e-13` of the largest one.
    pub fn support_radius(&self) -> f64 {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm_sqr()));
        if max == 0.0 {
            return 0.0;
        }
        let cut = SUPPORT_THRESHOLD * SUPPORT_THRESHOLD * max;
        let mut r2 = 0i64;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() > cut {
                let k = self.grid.wavevector(idx);
                r2 = r2.max(k[0] * k[0] + k[1] * k[1]);
            }
        }
        (r2 as f64).sqrt()
    }

    /// Largest absolute sample on the grid.
    pub fn sup_norm(&self) -> f64 {
        self.to_physical().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `L^2` norm over the torus by Parseval.
    pub fn l2_norm(&self) -> f64 {
        (4.0 * PI * PI * self.energy_sum()).sqrt()
    }

    /// `sum_k |c(k)|^2` over the full lattice.
    pub(crate) fn energy_sum(&self) -> f64 {
        let n = self.grid.n();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| weight(idx / n, n) * c.norm_sqr())
            .sum()
    }

    /// `int f g dx` by Parseval.
    pub fn inner(&self, other: &Self) -> f64 {
        self.check_grid(other);
        let n = self.grid.n();
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(idx, (a, b))| weight(idx / n, n) * (a * b.conj()).re)
            .sum();
        4.0 * PI * PI * s
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm_sqr())).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_raw(&self.grid, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        self.check_grid(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b * s)
            .collect();
        Self::from_raw(&self.grid, coeffs)
    }

    /// Drop the zero mode.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = ZERO;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub(crate) fn check_grid(&self, other: &Self) {
        assert!(
            self.grid == other.grid,
            "{}",
            Error::GridMismatch(self.grid.n(), other.grid.n())
        );
    }
}

/// Multiplicity of a stored half-plane column in full-lattice sums.
fn weight(k1: usize, n: usize) -> f64 {
    if k1 == 0 || k1 == n / 2 {
        1.0
    } else {
        2.0
    }
}

impl Add<&SpectralField> for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub<&SpectralField> for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

/// Two scalar components on a shared grid.
#[derive(Clone, Debug)]
pub struct VectorField2 {
    pub x: SpectralField,
    pub y: SpectralField,
}

impl VectorField2 {
    pub fn new(x: SpectralField, y: SpectralField) -> Self {
        x.check_grid(&y);
        Self { x, y }
    }

    pub fn zeros(grid: &TorusGrid) -> Self {
        Self::new(SpectralField::zeros(grid), SpectralField::zeros(grid))
    }

    pub fn grid(&self) -> &TorusGrid {
        self.x.grid()
    }

    /// `max_x |v(x)|` with the Euclidean norm pointwise.
    pub fn sup_norm(&self) -> f64 {
        let a = self.x.to_physical();
        let b = self.y.to_physical();
        a.iter()
            .zip(&b)
            .fold(0.0f64, |m, (u, v)| m.max(u.hypot(*v)))
    }

    /// Spectral divergence.
    pub fn divergence(&self) -> SpectralField {
        let dx = self
            .x
            .apply_symbol(true, |k| Complex64::new(0.0, k[0] as f64));
        let dy = self
            .y
            .apply_symbol(true, |k| Complex64::new(0.0, k[1] as f64));
        &dx + &dy
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x.scale(s), self.y.scale(s))
    }

    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        Self::new(self.x.axpy(s, &other.x), self.y.axpy(s, &other.y))
    }

    pub fn mean(&self) -> [f64; 2] {
        [self.x.mean(), self.y.mean()]
    }
}

impl Add<&VectorField2> for &VectorField2 {
    type Output = VectorField2;
    fn add(self, rhs: &VectorField2) -> VectorField2 {
        self.axpy(1.0, rhs)
    }
}

impl Sub<&VectorField2> for &VectorField2 {
    type Output = VectorField2;
    fn sub(self, rhs: &VectorField2) -> VectorField2 {
        self.axpy(-1.0, rhs)
    }
}
