//! Weak form of the stationary equation against band-limited test
//! functions: `-int theta u.grad psi + int theta Lambda^gamma psi (- int g psi)`
//! with `u = perp-grad Gamma^{-1} theta`. Integrals are over `[0, 2pi)^2`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::Result;
use crate::multiplier::{apply_fractional, apply_gamma_inverse, gradient, perp_gradient, OddSymbol};
use crate::torus::{exact_product, SpectralField, TorusGrid, VectorField2};

const AREA: f64 = 4.0 * PI * PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestKind {
    Const,
    Cos,
    Sin,
}

/// `1`, `cos(k.x)` or `sin(k.x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TestFn {
    pub kind: TestKind,
    pub k: [i64; 2],
}

impl TestFn {
    pub fn field(&self, grid: &TorusGrid) -> SpectralField {
        match self.kind {
            TestKind::Const => SpectralField::cosine(grid, [0, 0], 1.0),
            TestKind::Cos => SpectralField::cosine(grid, self.k, 1.0),
            TestKind::Sin => SpectralField::sine(grid, self.k, 1.0),
        }
    }

    /// `int h psi` read off the coefficients of `h`.
    pub fn pair(&self, h: &SpectralField) -> f64 {
        let c = h.coeff(self.k);
        AREA * match self.kind {
            TestKind::Const => c.re,
            TestKind::Cos => c.re,
            TestKind::Sin => -c.im,
        }
    }

    /// `int F . grad psi` read off the coefficients of `F`.
    pub fn pair_gradient(&self, f: &VectorField2) -> f64 {
        let (k1, k2) = (self.k[0] as f64, self.k[1] as f64);
        let (a, b) = (f.x.coeff(self.k), f.y.coeff(self.k));
        AREA * match self.kind {
            TestKind::Const => 0.0,
            // grad cos = -k sin, int h sin = -Im h^(k)
            TestKind::Cos => k1 * a.im + k2 * b.im,
            // grad sin = k cos
            TestKind::Sin => k1 * a.re + k2 * b.re,
        }
    }
}

impl fmt::Display for TestFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TestKind::Const => write!(f, "const"),
            TestKind::Cos => write!(f, "cos({};{})", self.k[0], self.k[1]),
            TestKind::Sin => write!(f, "sin({};{})", self.k[0], self.k[1]),
        }
    }
}

/// `{1} + {cos(k.x), sin(k.x) : 0 < |k| <= Lambda0}`, one `k` per `+-k` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TestBasis {
    pub lambda0: f64,
    pub functions: Vec<TestFn>,
}

impl TestBasis {
    pub fn new(lambda0: f64) -> Self {
        let r = lambda0.floor() as i64;
        let mut functions = vec![TestFn {
            kind: TestKind::Const,
            k: [0, 0],
        }];
        for k1 in 0..=r {
            for k2 in -r..=r {
                let upper = k1 > 0 || k2 > 0;
                if upper && ((k1 * k1 + k2 * k2) as f64) <= lambda0 * lambda0 {
                    for kind in [TestKind::Cos, TestKind::Sin] {
                        functions.push(TestFn { kind, k: [k1, k2] });
                    }
                }
            }
        }
        Self { lambda0, functions }
    }
}

/// `u = perp-grad Gamma^{-1} theta` and the energy fraction lost on
/// degenerate modes.
pub fn velocity(theta: &SpectralField, sym: &OddSymbol) -> Result<(VectorField2, f64)> {
    let (f, leakage) = apply_gamma_inverse(sym, theta)?;
    Ok((perp_gradient(&f), leakage))
}

fn flux(theta: &SpectralField, u: &VectorField2) -> Result<VectorField2> {
    Ok(VectorField2::new(exact_product(theta, &u.x)?, exact_product(theta, &u.y)?))
}

/// Weak residual of the unforced equation against a general band-limited `psi`.
pub fn weak_residual(theta: &SpectralField, sym: &OddSymbol, gamma: f64, psi: &SpectralField) -> Result<f64> {
    let (u, _) = velocity(theta, sym)?;
    let f = flux(theta, &u)?;
    let gp = gradient(psi);
    let lp = apply_fractional(gamma, psi);
    Ok(-(f.x.inner(&gp.x) + f.y.inner(&gp.y)) + theta.inner(&lp))
}

/// Forced variant: subtracts `int g psi`.
pub fn weak_residual_forced(
    theta: &SpectralField,
    g: &SpectralField,
    sym: &OddSymbol,
    gamma: f64,
    psi: &SpectralField,
) -> Result<f64> {
    Ok(weak_residual(theta, sym, gamma, psi)? - g.inner(psi))
}

/// `int theta u.grad psi` rewritten as `-int psi u.grad theta`.
pub fn transport_by_parts(theta: &SpectralField, sym: &OddSymbol, psi: &SpectralField) -> Result<f64> {
    let (u, _) = velocity(theta, sym)?;
    let gt = gradient(theta);
    let adv = &exact_product(&u.x, &gt.x)? + &exact_product(&u.y, &gt.y)?;
    Ok(-adv.inner(psi))
}

/// Residuals over a whole basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualTable {
    pub lambda0: f64,
    pub values: Vec<(TestFn, f64)>,
    pub leakage: f64,
    /// `|div u|_inf / |grad Gamma^{-1} theta|_inf`.
    pub divergence: f64,
}

impl ResidualTable {
    /// Largest `|residual|` and its test function.
    pub fn max(&self) -> (f64, Option<TestFn>) {
        self.values
            .iter()
            .fold((0.0, None), |(m, arg), (t, v)| if v.abs() > m { (v.abs(), Some(*t)) } else { (m, arg) })
    }
}

/// Residuals of `(theta, g)` over every element of `basis`; `g = None` is
/// the unforced equation.
pub fn residual_table(
    theta: &SpectralField,
    g: Option<&SpectralField>,
    sym: &OddSymbol,
    gamma: f64,
    basis: &TestBasis,
) -> Result<ResidualTable> {
    let (f, leakage) = apply_gamma_inverse(sym, theta)?;
    let u = perp_gradient(&f);
    let grad = gradient(&f);
    let scale = grad.sup_norm();
    let div = u.divergence().sup_norm();
    drop(grad);
    let fl = flux(theta, &u)?;
    drop(u);
    let lt = apply_fractional(gamma, theta);
    let values = basis
        .functions
        .iter()
        .map(|t| {
            // Lambda^gamma is symmetric, so int theta Lambda^gamma psi = int psi Lambda^gamma theta
            let mut r = -t.pair_gradient(&fl) + t.pair(&lt);
            if let Some(g) = g {
                r -= t.pair(g);
            }
            (*t, r)
        })
        .collect();
    Ok(ResidualTable {
        lambda0: basis.lambda0,
        values,
        leakage,
        divergence: if scale > 0.0 { div / scale } else { div },
    })
}
