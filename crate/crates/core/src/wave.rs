//! Plane-wave directions and the degree-1 operators `R1`, `R2` that turn a
//! gradient stress into the two wave channels:
//! `sum_j i m(xi_j) xi_j^perp R_j G = grad G + perp-grad V`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiplier::{laplacian, OddSymbol};
use crate::torus::{SpectralField, VectorField2};

/// Fixed wave directions `xi_1 = (3/5, 4/5)`, `xi_2 = (1, 0)`.
pub struct DirectionFrame;

impl DirectionFrame {
    pub const XI: [[f64; 2]; 2] = [[0.6, 0.8], [1.0, 0.0]];
    pub const XI_PERP: [[f64; 2]; 2] = [[-0.8, 0.6], [0.0, 1.0]];
    /// `5 xi_j`, which lies on the integer lattice.
    pub const LATTICE: [[i64; 2]; 2] = [[3, 4], [5, 0]];

    /// Carrier `5 lambda xi_j` for channel `j` in `0..2`.
    pub fn carrier(lambda: u64, j: usize) -> [i64; 2] {
        let l = lambda as i64;
        [l * Self::LATTICE[j][0], l * Self::LATTICE[j][1]]
    }
}

/// Symbol coefficients of `R1^(k) = A k1 + B k2`, `R2^(k) = C k1 + D k2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompCoeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// `m(xi_1)`, `m(xi_2)`, evaluated as `m(5 xi_j) / 5`.
    pub m: [Complex64; 2],
}

impl DecompCoeffs {
    /// Residuals of the three coefficient equations
    /// `-(4/5) A m1 = 1`, `(3/5) B m1 + D m2 = 1`,
    /// `((3/5) A - (4/5) B) m1 + C m2 = 0`.
    pub fn residuals(&self) -> [f64; 3] {
        let [m1, m2] = self.m;
        let one = Complex64::new(1.0, 0.0);
        [
            (-0.8 * self.a * m1 - one).norm(),
            (0.6 * self.b * m1 + self.d * m2 - one).norm(),
            ((0.6 * self.a - 0.8 * self.b) * m1 + self.c * m2).norm(),
        ]
    }

    fn symbol(&self, j: usize, k: [i64; 2]) -> Complex64 {
        let (p, q) = if j == 0 { (self.a, self.b) } else { (self.c, self.d) };
        p * k[0] as f64 + q * k[1] as f64
    }
}

/// Solve the coefficient system with the normalisation `B = 5 / (3 m(xi_1))`,
/// which forces `D = 0`.
pub fn solve_coeffs(sym: &OddSymbol) -> Result<DecompCoeffs> {
    let m = [0, 1].map(|j| sym.m(DirectionFrame::LATTICE[j]) / 5.0);
    for (j, mj) in m.iter().enumerate() {
        if mj.norm() <= 1e-12 {
            return Err(Error::DegenerateSymbol {
                symbol: sym.name().to_string(),
                direction: j + 1,
            });
        }
    }
    let [m1, m2] = m;
    let a = -1.25 / m1;
    let b = (5.0 / 3.0) / m1;
    let d = (Complex64::new(1.0, 0.0) - 0.6 * b * m1) / m2;
    let c = -((0.6 * a - 0.8 * b) * m1) / m2;
    Ok(DecompCoeffs { a, b, c, d, m })
}

/// `R_j G` for `j` in `0..2` (channel index, zero based).
pub fn apply_r(j: usize, coeffs: &DecompCoeffs, g: &SpectralField) -> SpectralField {
    assert!(j < 2, "channel index must be 0 or 1");
    g.apply_symbol(true, |k| coeffs.symbol(j, k))
}

/// `|G|_inf + sum_j |R_j G|_inf`.
pub fn x_norm(coeffs: &DecompCoeffs, g: &SpectralField) -> f64 {
    g.sup_norm() + apply_r(0, coeffs, g).sup_norm() + apply_r(1, coeffs, g).sup_norm()
}

/// `sum_j i m(xi_j) xi_j^perp R_j G`.
pub fn wave_channel_sum(coeffs: &DecompCoeffs, g: &SpectralField) -> VectorField2 {
    let mut acc = VectorField2::zeros(g.grid());
    for j in 0..2 {
        let w = Complex64::new(0.0, 1.0) * coeffs.m[j];
        debug_assert!(w.im.abs() <= 1e-12 * w.norm());
        let r = apply_r(j, coeffs, g).scale(w.re);
        let [px, py] = DirectionFrame::XI_PERP[j];
        acc = VectorField2::new(acc.x.axpy(px, &r), acc.y.axpy(py, &r));
    }
    acc
}

/// `|div(sum_j i m(xi_j) xi_j^perp R_j G) - Delta G|_inf / |Delta G|_inf`.
pub fn decomposition_residual(coeffs: &DecompCoeffs, g: &SpectralField) -> f64 {
    let lap = laplacian(g);
    let scale = lap.sup_norm();
    if scale == 0.0 {
        return 0.0;
    }
    let div = wave_channel_sum(coeffs, g).divergence();
    (&div - &lap).sup_norm() / scale
}

/// `Delta^{-1} div S`, symbol `-i k.S^(k)/|k|^2` with the zero mode dropped.
pub fn inverse_div(s: &VectorField2) -> SpectralField {
    s.divergence()
        .apply_radial(|k2| if k2 == 0.0 { 0.0 } else { -1.0 / k2 })
}
