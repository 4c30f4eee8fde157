//! Fourier multipliers built from an odd degree-1 symbol: `Gamma`, its
//! pseudo-inverse, fractional Laplacians, gradients, sharp Littlewood-Paley
//! cutoffs and the modulation remainders `T1`, `T2`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::torus::{ensure_alias_free, SpectralField, VectorField2};

/// Threshold below which `|sigma(k)| / |k|` counts as degenerate for
/// [`apply_gamma_inverse`].
pub const DEGENERATE_EPS: f64 = 1e-12;

/// Real, odd, degree-1 homogeneous function `sigma`; `Gamma` has symbol
/// `m(k) = i sigma(k)`, so it maps real fields to real fields.
#[derive(Clone, Copy)]
pub struct OddSymbol {
    name: &'static str,
    sigma: fn(f64, f64) -> f64,
}

impl fmt::Debug for OddSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OddSymbol({})", self.name)
    }
}

impl PartialEq for OddSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

fn sigma_k1(k1: f64, _k2: f64) -> f64 {
    k1
}

fn sigma_anisotropic(k1: f64, k2: f64) -> f64 {
    let r2 = k1 * k1 + k2 * k2;
    if r2 == 0.0 {
        0.0
    } else {
        k1 * (1.0 + k2 * k2 / r2)
    }
}

fn sigma_cubic(k1: f64, k2: f64) -> f64 {
    let r2 = k1 * k1 + k2 * k2;
    if r2 == 0.0 {
        0.0
    } else {
        (k1 * k1 * k1 - 3.0 * k1 * k2 * k2) / r2
    }
}

impl OddSymbol {
    /// `sigma(k) = k1`, i.e. `Gamma = d/dx1`.
    pub const K1: OddSymbol = OddSymbol {
        name: "k1",
        sigma: sigma_k1,
    };
    /// `sigma(k) = k1 (1 + k2^2/|k|^2)`.
    pub const K1_ANISOTROPIC: OddSymbol = OddSymbol {
        name: "k1_anisotropic",
        sigma: sigma_anisotropic,
    };
    /// `sigma(k) = (k1^3 - 3 k1 k2^2) / |k|^2`.
    pub const CUBIC: OddSymbol = OddSymbol {
        name: "cubic",
        sigma: sigma_cubic,
    };

    pub fn registry() -> [OddSymbol; 3] {
        [Self::K1, Self::K1_ANISOTROPIC, Self::CUBIC]
    }

    pub fn by_name(name: &str) -> Result<Self> {
        if name == "k1k2_over_absk" {
            return Err(Error::Domain(
                "k1*k2/|k| is even under k -> -k and cannot serve as an odd symbol".into(),
            ));
        }
        Self::registry()
            .into_iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// A user supplied symbol. Oddness and homogeneity are the caller's
    /// responsibility; [`OddSymbol::check_lattice`] tests both.
    pub fn custom(name: &'static str, sigma: fn(f64, f64) -> f64) -> Self {
        Self { name, sigma }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn sigma(&self, k: [i64; 2]) -> f64 {
        (self.sigma)(k[0] as f64, k[1] as f64)
    }

    /// `m(k) = i sigma(k)`.
    pub fn m(&self, k: [i64; 2]) -> Complex64 {
        Complex64::new(0.0, self.sigma(k))
    }

    /// Largest violation of oddness and ray homogeneity on `|k_i| <= radius`.
    pub fn check_lattice(&self, radius: i64) -> f64 {
        let mut worst = 0.0f64;
        for k1 in -radius..=radius {
            for k2 in -radius..=radius {
                if k1 == 0 && k2 == 0 {
                    continue;
                }
                let s = self.sigma([k1, k2]);
                worst = worst.max((self.sigma([-k1, -k2]) + s).abs());
                for t in 2..4 {
                    worst = worst.max((self.sigma([t * k1, t * k2]) - t as f64 * s).abs());
                }
            }
        }
        worst
    }
}

/// `Gamma f`, symbol `i sigma(k)`.
pub fn apply_gamma(sym: &OddSymbol, f: &SpectralField) -> SpectralField {
    f.apply_symbol(true, |k| sym.m(k))
}

/// Pseudo-inverse of `Gamma`. Modes with `|sigma(k)| <= 1e-12 |k|` are
/// zeroed; the second value is the fraction of `L^2` energy they carried.
pub fn apply_gamma_inverse(sym: &OddSymbol, f: &SpectralField) -> Result<(SpectralField, f64)> {
    let scale = f.max_coeff().max(1.0);
    if f.mean().abs() > 1e-12 * scale {
        return Err(Error::NotMeanZero(f.mean()));
    }
    let degenerate = |k: [i64; 2]| {
        let r = ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
        sym.sigma(k).abs() <= DEGENERATE_EPS * r
    };
    let out = f.apply_symbol(true, |k| {
        if k == [0, 0] || degenerate(k) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0 / sym.sigma(k))
        }
    });
    let lost = f
        .without_mean()
        .apply_symbol(false, |k| {
            if k != [0, 0] && degenerate(k) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .l2_norm();
    let total = f.without_mean().l2_norm();
    let leakage = if total > 0.0 {
        (lost / total).powi(2)
    } else {
        0.0
    };
    if leakage > 1e-8 {
        log::warn!(
            "Gamma^-1 ({}) dropped {:.3e} of the input energy on degenerate modes",
            sym.name(),
            leakage
        );
    }
    Ok((out, leakage))
}

/// `Lambda^s f`, symbol `|k|^s` with the zero mode removed.
pub fn apply_fractional(s: f64, f: &SpectralField) -> SpectralField {
    f.apply_radial(|k2| if k2 == 0.0 { 0.0 } else { k2.powf(0.5 * s) })
}

/// `grad f`.
pub fn gradient(f: &SpectralField) -> VectorField2 {
    VectorField2::new(
        f.apply_symbol(true, |k| Complex64::new(0.0, k[0] as f64)),
        f.apply_symbol(true, |k| Complex64::new(0.0, k[1] as f64)),
    )
}

/// `perp-grad f = (-d2 f, d1 f)`.
pub fn perp_gradient(f: &SpectralField) -> VectorField2 {
    VectorField2::new(
        f.apply_symbol(true, |k| Complex64::new(0.0, -(k[1] as f64))),
        f.apply_symbol(true, |k| Complex64::new(0.0, k[0] as f64)),
    )
}

/// `Delta f`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    f.apply_radial(|k2| -k2)
}

fn within(k: [i64; 2], radius: f64) -> bool {
    ((k[0] * k[0] + k[1] * k[1]) as f64) <= radius * radius * (1.0 + 1e-12)
}

/// Sharp projection onto `|k| <= lambda`.
///
/// # Panics
/// If `lambda` is not positive.
pub fn lp_leq(lambda: f64, f: &SpectralField) -> SpectralField {
    assert!(lambda > 0.0, "cutoff must be positive, got {lambda}");
    f.apply_symbol(false, |k| {
        Complex64::new(if within(k, lambda) { 1.0 } else { 0.0 }, 0.0)
    })
}

/// Sharp projection onto `lo < |k| <= hi`.
///
/// # Panics
/// Unless `0 < lo < hi`.
pub fn lp_annulus(lo: f64, hi: f64, f: &SpectralField) -> SpectralField {
    assert!(0.0 < lo && lo < hi, "annulus needs 0 < lo < hi, got ({lo}, {hi})");
    f.apply_symbol(false, |k| {
        let keep = within(k, hi) && !within(k, lo);
        Complex64::new(if keep { 1.0 } else { 0.0 }, 0.0)
    })
}

/// Lattice carrier `lambda * xi`, rejected unless both entries are integers.
pub fn lattice_carrier(lambda: f64, xi: [f64; 2]) -> Result<[i64; 2]> {
    let v = [lambda * xi[0], lambda * xi[1]];
    let r = [v[0].round(), v[1].round()];
    if (v[0] - r[0]).abs() > 1e-9 || (v[1] - r[1]).abs() > 1e-9 {
        return Err(Error::NonLatticeCarrier(v[0], v[1]));
    }
    Ok([r[0] as i64, r[1] as i64])
}

fn shifted(k: [i64; 2], c: [i64; 2], s: i64) -> [i64; 2] {
    [k[0] + s * c[0], k[1] + s * c[1]]
}

fn carrier_norm(c: [i64; 2]) -> f64 {
    ((c[0] * c[0] + c[1] * c[1]) as f64).sqrt()
}

/// `T1[a]` for carrier `c = lambda xi`, symbol `(m(k+c) + m(k-c)) / 2`.
pub fn apply_t1(sym: &OddSymbol, a: &SpectralField, carrier: [i64; 2]) -> Result<SpectralField> {
    ensure_alias_free(a, a.support_radius() + carrier_norm(carrier))?;
    Ok(a.apply_symbol(true, |k| {
        let s = 0.5 * (sym.sigma(shifted(k, carrier, 1)) + sym.sigma(shifted(k, carrier, -1)));
        Complex64::new(0.0, s)
    }))
}

/// `T2[a]` for carrier `c`, symbol `(i/2)(m(k+c) - m(k-c) - 2 m(c))`.
///
/// With this normalisation
/// `Gamma(a cos(c.x)) = i m(c) a sin(c.x) + T1[a] cos(c.x) + T2[a] sin(c.x)`
/// holds exactly and both remainders are real.
pub fn apply_t2(sym: &OddSymbol, a: &SpectralField, carrier: [i64; 2]) -> Result<SpectralField> {
    ensure_alias_free(a, a.support_radius() + carrier_norm(carrier))?;
    let sc = sym.sigma(carrier);
    Ok(a.apply_symbol(false, |k| {
        let d = sym.sigma(shifted(k, carrier, 1)) - sym.sigma(shifted(k, carrier, -1)) - 2.0 * sc;
        Complex64::new(-0.5 * d, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{exact_product, TorusGrid};

    fn grid() -> TorusGrid {
        TorusGrid::new(32).unwrap()
    }

    fn close(a: &SpectralField, b: &SpectralField, tol: f64) {
        let d = (a - b).max_coeff();
        assert!(d <= tol, "difference {d:.3e} > {tol:.1e}");
    }

    #[test]
    fn registry_symbols_are_odd_and_homogeneous() {
        for s in OddSymbol::registry() {
            assert!(s.check_lattice(6) < 1e-12, "{}", s.name());
        }
        assert!(OddSymbol::by_name("k1k2_over_absk").is_err());
        assert!(matches!(
            OddSymbol::by_name("nope"),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn gamma_on_single_modes() {
        let g = grid();
        let s = OddSymbol::K1;
        close(
            &apply_gamma(&s, &SpectralField::cosine(&g, [1, 0], 1.0)),
            &SpectralField::sine(&g, [1, 0], -1.0),
            1e-16,
        );
        close(
            &apply_gamma(&s, &SpectralField::sine(&g, [1, 0], 1.0)),
            &SpectralField::cosine(&g, [1, 0], 1.0),
            1e-16,
        );
        assert!(apply_gamma(&s, &SpectralField::cosine(&g, [0, 0], 3.0)).is_zero());
    }

    #[test]
    fn gamma_inverse_and_leakage() {
        let g = grid();
        let s = OddSymbol::K1;
        let (f, leak) = apply_gamma_inverse(&s, &SpectralField::sine(&g, [1, 0], -1.0)).unwrap();
        close(&f, &SpectralField::cosine(&g, [1, 0], 1.0), 1e-16);
        assert_eq!(leak, 0.0);
        let (f, leak) = apply_gamma_inverse(&s, &SpectralField::cosine(&g, [0, 1], 1.0)).unwrap();
        assert!(f.is_zero());
        assert!((leak - 1.0).abs() < 1e-15);
        assert!(matches!(
            apply_gamma_inverse(&s, &SpectralField::cosine(&g, [0, 0], 1.0)),
            Err(Error::NotMeanZero(_))
        ));
    }

    #[test]
    fn fractional_on_single_modes() {
        let g = grid();
        let c1 = SpectralField::cosine(&g, [1, 0], 1.0);
        close(&apply_fractional(0.37, &c1), &c1, 1e-16);
        assert!(apply_fractional(0.5, &SpectralField::cosine(&g, [0, 0], 2.0)).is_zero());
        let c5 = SpectralField::cosine(&g, [5, 0], 1.0);
        close(&apply_fractional(0.5, &c5), &c5.scale(5f64.sqrt()), 1e-15);
    }

    #[test]
    fn perp_gradient_of_cosine() {
        let g = grid();
        let v = perp_gradient(&SpectralField::cosine(&g, [1, 0], 1.0));
        assert!(v.x.is_zero());
        close(&v.y, &SpectralField::sine(&g, [1, 0], -1.0), 1e-16);
        let c = perp_gradient(&SpectralField::cosine(&g, [0, 0], 1.0));
        assert!(c.x.is_zero() && c.y.is_zero());
    }

    #[test]
    fn sharp_cutoffs() {
        let g = grid();
        let c3 = SpectralField::cosine(&g, [3, 0], 1.0);
        close(&lp_leq(4.0, &c3), &c3, 0.0);
        assert!(lp_leq(2.0, &c3).is_zero());
        assert!(lp_annulus(3.0, 5.0, &c3).is_zero());
        close(&lp_annulus(2.5, 3.0, &c3), &c3, 0.0);
    }

    #[test]
    fn lattice_carriers() {
        assert_eq!(lattice_carrier(5.0, [0.6, 0.8]).unwrap(), [3, 4]);
        assert!(matches!(
            lattice_carrier(7.0, [0.6, 0.8]),
            Err(Error::NonLatticeCarrier(..))
        ));
        assert_eq!(lattice_carrier(10.0, [0.6, 0.8]).unwrap(), [6, 8]);
    }

    #[test]
    fn remainders_vanish_on_constants() {
        let g = grid();
        let a = SpectralField::cosine(&g, [0, 0], 2.5);
        for s in OddSymbol::registry() {
            assert!(apply_t1(&s, &a, [6, 8]).unwrap().max_coeff() < 1e-15);
            assert!(apply_t2(&s, &a, [6, 8]).unwrap().max_coeff() < 1e-15);
        }
    }

    #[test]
    fn local_symbol_example() {
        let g = grid();
        let s = OddSymbol::K1;
        let a = SpectralField::cosine(&g, [0, 1], 1.0);
        assert!(apply_t1(&s, &a, [5, 0]).unwrap().is_zero());
        assert!(apply_t2(&s, &a, [5, 0]).unwrap().max_coeff() < 1e-15);
        let carrier = SpectralField::cosine(&g, [5, 0], 1.0);
        let lhs = apply_gamma(&s, &exact_product(&a, &carrier).unwrap());
        let expect = exact_product(&a, &SpectralField::sine(&g, [5, 0], -5.0)).unwrap();
        close(&lhs, &expect, 1e-15);
    }

    #[test]
    fn remainder_rejects_small_grid() {
        let g = TorusGrid::new(16).unwrap();
        let a = SpectralField::cosine(&g, [1, 1], 1.0);
        assert!(matches!(
            apply_t1(&OddSymbol::K1, &a, [6, 8]),
            Err(Error::GridTooSmall { .. })
        ));
    }
}
