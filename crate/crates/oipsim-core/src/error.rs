//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by physics, network, fitting, and I/O operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter set violates a documented invariant (non-positive length,
    /// reflectance outside [0,1), and so on).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The excess-carrier formula produced a density below the physical
    /// floor, which signals inconsistent material parameters.
    #[error("non-physical carrier density {density} m^-3 at depth {depth_m} m")]
    NonPhysicalProfile { density: f64, depth_m: f64 },

    /// A conductivity profile does not span the requested integration depth.
    #[error("profile grid [{grid_start} m, {grid_end} m] does not span thickness {thickness} m")]
    GridMismatch {
        grid_start: f64,
        grid_end: f64,
        thickness: f64,
    },

    /// ABCD-to-S (or S-to-ABCD) conversion hit a vanishing denominator.
    #[error("singular two-port conversion: |denominator| = {magnitude}")]
    SingularConversion { magnitude: f64 },

    /// An iterative solve (width synthesis, coupling bisection) failed to
    /// bracket or converge on its target.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A fit was asked to run on fewer frequency points than it needs.
    #[error("insufficient data: {got} frequency points, need at least {need}")]
    InsufficientData { got: usize, need: usize },

    /// Measured transmission exceeds unity; the closed-form resistance
    /// inversion is undefined for active data.
    #[error("non-passive data: |s21| = {magnitude} > 1 at {frequency_hz} Hz")]
    NonPassiveData { magnitude: f64, frequency_hz: f64 },

    /// No coupling efficiency in (0, 1] reproduces the measurement.
    #[error("coupling out of range: reaching {target_ohms} ohm requires coupling {required}")]
    OutOfRange { target_ohms: f64, required: f64 },

    /// A Touchstone document could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },

    /// Touchstone frequencies must be strictly increasing.
    #[error("non-monotone frequency at line {line}: {frequency_hz} Hz")]
    NonMonotoneFrequency { line: usize, frequency_hz: f64 },

    /// A configuration document is malformed; `path` is the offending
    /// dotted key path.
    #[error("config error at `{path}`: {reason}")]
    ConfigError { path: String, reason: String },

    /// Underlying file-system failure while reading or writing artifacts.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::ConfigError {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::ParseError {
            line,
            reason: reason.into(),
        }
    }
}
