//! Run configuration, read from a single JSON document.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::OddSymbol;
use crate::params::{C0Policy, ParamSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Unforced,
    Forced,
}

/// `grid_n`: an even integer or the string `"auto"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Size(usize),
    Named(String),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Named("auto".into())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Flags {
    pub force_infeasible: bool,
    pub emit_fields: bool,
    pub emit_spectra: bool,
    /// Record wall-clock times (makes outputs run dependent).
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: Scheme,
    pub lambda0: u64,
    pub b: f64,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Defaults to 1 for the unforced scheme and 100 for the forced one.
    #[serde(default)]
    pub c0_min: Option<f64>,
    #[serde(default = "default_lo")]
    pub annulus_lo: f64,
    #[serde(default = "default_hi")]
    pub annulus_hi: f64,
    #[serde(default)]
    pub grid_n: GridSpec,
    pub q_max: usize,
    #[serde(default = "default_symbol")]
    pub symbol: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_lambda0_test")]
    pub lambda0_test: f64,
    #[serde(default)]
    pub flags: Flags,
}

fn default_lo() -> f64 {
    4.0
}

fn default_hi() -> f64 {
    6.0
}

fn default_symbol() -> String {
    "k1".into()
}

fn default_lambda0_test() -> f64 {
    4.0
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn c0_min(&self) -> f64 {
        self.c0_min.unwrap_or(match self.scheme {
            Scheme::Unforced => 1.0,
            Scheme::Forced => 100.0,
        })
    }

    /// Parameter set with the grid resolved.
    pub fn params(&self) -> Result<ParamSet> {
        let symbol = OddSymbol::by_name(&self.symbol)?;
        if !(self.lambda0_test > 0.0) {
            return Err(Error::Config("lambda0_test must be positive".into()));
        }
        let mut p = ParamSet {
            lambda0: self.lambda0,
            b: self.b,
            beta: self.beta,
            alpha: self.alpha,
            gamma: self.gamma,
            c0: C0Policy::Adaptive { c_min: self.c0_min() },
            annulus: (self.annulus_lo, self.annulus_hi),
            n: 0,
            q_max: self.q_max,
            symbol,
        };
        p.validate()?;
        p.n = match &self.grid_n {
            GridSpec::Size(n) => *n,
            GridSpec::Named(s) if s == "auto" => p.auto_grid()?,
            GridSpec::Named(s) => {
                return Err(Error::Config(format!("grid_n must be an integer or \"auto\", got \"{s}\"")))
            }
        };
        crate::torus::TorusGrid::new(p.n)?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACCEPTANCE: &str = r#"{"scheme": "unforced", "lambda0": 4, "b": 1.5, "beta": 0.5,
        "alpha": 0.4, "gamma": 0.5, "c0_min": 1, "grid_n": "auto", "q_max": 3}"#;

    #[test]
    fn parses_and_resolves_auto_grid() {
        let c = RunConfig::from_json(ACCEPTANCE).unwrap();
        let p = c.params().unwrap();
        assert_eq!(p.n, 4096);
        assert_eq!(c.lambda0_test, 4.0);
        assert_eq!(p.symbol, OddSymbol::K1);
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = ACCEPTANCE.replace("\"q_max\": 3", "\"q_max\": 3, \"qmax\": 2");
        assert!(matches!(RunConfig::from_json(&bad), Err(Error::Config(_))));
        let bad = ACCEPTANCE.replace("\"q_max\": 3", "\"q_max\": 3, \"flags\": {\"fast\": true}");
        assert!(RunConfig::from_json(&bad).is_err());
    }

    #[test]
    fn grid_variants() {
        let c = RunConfig::from_json(&ACCEPTANCE.replace("\"auto\"", "512")).unwrap();
        assert_eq!(c.params().unwrap().n, 512);
        let c = RunConfig::from_json(&ACCEPTANCE.replace("\"auto\"", "\"big\"")).unwrap();
        assert!(c.params().is_err());
        let c = RunConfig::from_json(&ACCEPTANCE.replace("\"auto\"", "7")).unwrap();
        assert!(c.params().is_err());
    }

    #[test]
    fn scheme_dependent_c0() {
        let c = RunConfig::from_json(&ACCEPTANCE.replace("\"c0_min\": 1,", "").replace("unforced", "forced")).unwrap();
        assert_eq!(c.c0_min(), 100.0);
    }
}
