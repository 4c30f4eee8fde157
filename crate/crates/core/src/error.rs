use thiserror::Error;

/// Errors raised by the spectral substrate, the iteration schemes and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is invalid: need an even n >= 4")]
    InvalidGrid(usize),

    #[error("fields live on different grids ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("coefficients are not Hermitian (relative violation {0:.3e})")]
    HermitianViolation(f64),

    #[error("grid too small: need n/2 - 1 >= {required}, have n = {n}")]
    GridTooSmall { required: f64, n: usize },

    #[error("field is not mean-zero (mean {0:.3e})")]
    NotMeanZero(f64),

    #[error("carrier ({0}, {1}) is not an integer lattice vector")]
    NonLatticeCarrier(f64, f64),

    #[error("symbol `{symbol}` vanishes on construction direction {direction}")]
    DegenerateSymbol { symbol: String, direction: usize },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("amplitude radicand not positive (min {min:.3e} on channel {channel})")]
    Positivity { min: f64, channel: usize },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("{what}: residual {residual:.3e} exceeds {tolerance:.1e}")]
    Exactness {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("parameters infeasible: {0}")]
    Infeasible(String),

    #[error("grid n = {n} needs about {required_mib} MiB, only {available_mib} MiB available")]
    ResourceLimit {
        n: usize,
        required_mib: u64,
        available_mib: u64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) => 2,
            Error::Positivity { .. } => 3,
            Error::GridTooSmall { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
