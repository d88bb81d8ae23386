use thiserror::Error;

/// Why a database lookup came back empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Missing {
    /// The key lies outside the mode range or zero kinds the database covers.
    OutOfRange,
    /// The key is inside the covered range but no record was generated for it.
    NeverGenerated,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} is outside the domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("unsupported order {0}")]
    UnsupportedOrder(i32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scales {alpha} and {beta} are too close; use the equal-scale form")]
    Degenerate { alpha: f64, beta: f64 },

    #[error("quadrature did not converge after {panels} panels: estimate {estimate:e} +/- {abs_err:e}")]
    Convergence {
        estimate: f64,
        abs_err: f64,
        panels: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("finite-difference step {h:e} is below the minimum {min:e}")]
    StepTooSmall { h: f64, min: f64 },

    #[error("resonant scale triple: denominator {denominator:e}")]
    Resonant { denominator: f64 },

    #[error("no record for q={q} ({m},{n},{p}): {reason:?}")]
    NotFound {
        q: u32,
        m: u32,
        n: u32,
        p: u32,
        reason: Missing,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("integrity error on line {line}: {message}")]
    Integrity { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
