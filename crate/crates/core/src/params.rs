//! Frequency and amplitude sequences shared by both iteration schemes.

use crate::error::{Error, Result};
use crate::multiplier::OddSymbol;
use crate::torus::auto_grid_size;

/// How the amplitude constant `c0` is chosen at each step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum C0Policy {
    /// `c0 = max(c_min, 2 max_j |R_j G| / (lambda delta))`, which keeps the
    /// radicand at least `c0 / 2`.
    Adaptive { c_min: f64 },
    /// A fixed constant; positivity is only checked.
    Fixed(f64),
}

impl C0Policy {
    pub fn c_min(&self) -> f64 {
        match *self {
            C0Policy::Adaptive { c_min } => c_min,
            C0Policy::Fixed(c) => c,
        }
    }

    /// Resolve `c0` given `max_j |R_j G|_inf / (lambda delta)`.
    pub fn resolve(&self, scaled_stress: f64) -> f64 {
        match *self {
            C0Policy::Adaptive { c_min } => c_min.max(2.0 * scaled_stress),
            C0Policy::Fixed(c) => c,
        }
    }
}

/// One level of the frequency/amplitude ladder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub q: usize,
    pub lambda: u64,
    pub delta: f64,
    /// Amplitude cutoff for the increment built at this level.
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    pub lambda0: u64,
    pub b: f64,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub c0: C0Policy,
    pub annulus: (f64, f64),
    pub n: usize,
    pub q_max: usize,
    pub symbol: OddSymbol,
}

impl ParamSet {
    /// Parameters with the default annulus `(4, 6)`, unit `c_min` and the
    /// automatic grid size.
    pub fn new(lambda0: u64, b: f64, beta: f64, alpha: f64, gamma: f64, q_max: usize) -> Result<Self> {
        let mut p = ParamSet {
            lambda0,
            b,
            beta,
            alpha,
            gamma,
            c0: C0Policy::Adaptive { c_min: 1.0 },
            annulus: (4.0, 6.0),
            n: 0,
            q_max,
            symbol: OddSymbol::K1,
        };
        p.validate()?;
        p.n = p.auto_grid()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let dom = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Domain(what.to_string()))
            }
        };
        dom(self.lambda0 >= 2, "lambda0 must be at least 2")?;
        dom(self.b > 1.0 && self.b.is_finite(), "b must exceed 1")?;
        dom(self.beta > 0.0 && self.beta < 1.0, "beta must lie in (0, 1)")?;
        dom(self.alpha > 0.0 && self.alpha < 1.0, "alpha must lie in (0, 1)")?;
        dom(self.gamma > 0.0 && self.gamma < 2.0, "gamma must lie in (0, 2)")?;
        let (lo, hi) = self.annulus;
        dom(lo > 0.0 && lo < 5.0 && hi > 5.0, "annulus must contain the carrier factor 5")?;
        dom(self.c0.c_min() > 0.0, "c0 must be positive")?;
        Ok(())
    }

    /// `lambda_q = ceil(lambda0^(b^q))`. Values within `1e-9` relative of an
    /// integer are snapped to it so that exact powers do not round up.
    pub fn lambda(&self, q: usize) -> Result<u64> {
        let x = (self.lambda0 as f64).powf(self.b.powi(q as i32));
        if !x.is_finite() || x > 1e15 {
            return Err(Error::GridTooSmall {
                required: x,
                n: self.n,
            });
        }
        let near = x.round();
        let v = if (x - near).abs() <= 1e-9 * x { near } else { x.ceil() };
        Ok(v as u64)
    }

    pub fn delta(&self, q: usize) -> Result<f64> {
        Ok((self.lambda(q)? as f64).powf(-self.beta))
    }

    /// `r_q = sqrt(lambda_{q-1} lambda_q)` for `q >= 1` and `r_0 = lambda_0`.
    pub fn r(&self, q: usize) -> Result<f64> {
        if q == 0 {
            return Ok(self.lambda0 as f64);
        }
        Ok((self.lambda(q - 1)? as f64 * self.lambda(q)? as f64).sqrt())
    }

    /// `(lambda_q, delta_q, r_q)`; fails if the increment at level `q` would
    /// not fit on the configured grid.
    pub fn sequences(&self, q: usize) -> Result<Level> {
        let lambda = self.lambda(q)?;
        let required = 2.0 * self.annulus.1 * lambda as f64;
        if self.n > 0 && required > (self.n / 2 - 1) as f64 {
            return Err(Error::GridTooSmall {
                required,
                n: self.n,
            });
        }
        Ok(Level {
            q,
            lambda,
            delta: self.delta(q)?,
            r: self.r(q)?,
        })
    }

    /// `next_pow2(24 lambda_{q_max})`.
    pub fn auto_grid(&self) -> Result<usize> {
        let top = self.lambda(self.q_max)?;
        Ok(auto_grid_size(top).max(16))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ladder_values() {
        let p = ParamSet::new(4, 1.5, 0.5, 0.4, 0.5, 3).unwrap();
        assert_eq!(p.lambda(0).unwrap(), 4);
        assert_eq!(p.lambda(1).unwrap(), 8);
        assert_eq!(p.lambda(2).unwrap(), 23);
        assert_eq!(p.lambda(3).unwrap(), 108);
        assert!((p.delta(1).unwrap() - 0.353_553_390_593_273_8).abs() < 1e-12);
        assert!((p.r(1).unwrap() - 32f64.sqrt()).abs() < 1e-12);
        assert_eq!(p.n, 4096);
    }

    #[test]
    fn sequences_reject_small_grid() {
        let mut p = ParamSet::new(4, 1.5, 0.5, 0.4, 0.5, 3).unwrap();
        p.n = 256;
        assert!(p.sequences(2).is_err());
        assert!(p.sequences(1).is_ok());
    }

    #[test]
    fn domain_checks() {
        assert!(ParamSet::new(1, 1.5, 0.5, 0.4, 0.5, 1).is_err());
        assert!(ParamSet::new(4, 1.0, 0.5, 0.4, 0.5, 1).is_err());
        assert!(ParamSet::new(4, 1.5, 1.0, 0.4, 0.5, 1).is_err());
        assert!(ParamSet::new(4, 1.5, 0.5, 0.4, 2.0, 1).is_err());
    }

    #[test]
    fn adaptive_c0() {
        let pol = C0Policy::Adaptive { c_min: 1.0 };
        assert_eq!(pol.resolve(0.1), 1.0);
        assert_eq!(pol.resolve(3.0), 6.0);
        assert_eq!(C0Policy::Fixed(2.0).resolve(9.0), 2.0);
    }

    proptest! {
        #[test]
        fn ladder_is_increasing(l0 in 2u64..20, b in 1.01f64..2.0, beta in 0.05f64..0.95) {
            let p = ParamSet { lambda0: l0, b, beta, alpha: 0.5, gamma: 0.5,
                c0: C0Policy::Adaptive { c_min: 1.0 }, annulus: (4.0, 6.0), n: 0, q_max: 3,
                symbol: OddSymbol::K1 };
            for q in 0..3 {
                let (a, c) = (p.lambda(q).unwrap(), p.lambda(q + 1).unwrap());
                prop_assert!(c >= a);
                prop_assert!(p.r(q + 1).unwrap() <= c as f64 + 1e-9);
                prop_assert!(p.delta(q + 1).unwrap() <= p.delta(q).unwrap());
            }
        }
    }
}
