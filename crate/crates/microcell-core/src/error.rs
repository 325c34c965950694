//! Error type shared by all model modules.

use alloc::string::String;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by model construction, evaluation, and solving.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input value violated a type invariant (non-positive length,
    /// opening ratio outside (0,1), ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A current density at or beyond the limiting current density of the
    /// polarization curve.
    #[error("current density {value:.6e} A/m^2 is outside [0, {limit:.6e})")]
    CurrentOutOfRange { value: f64, limit: f64 },

    /// A constant-power load segment demands more than the circuit can
    /// deliver anywhere on the fuel-cell current range.
    #[error("load of {requested:.6e} W exceeds maximum deliverable power {max_deliverable:.6e} W")]
    InfeasibleLoad {
        requested: f64,
        max_deliverable: f64,
    },

    /// No pitch on the search grid satisfies the design constraints.
    #[error("no feasible pitch: {0}")]
    InfeasiblePitch(String),

    /// Calibration did not reach the target residual within its iteration
    /// budget. Carries the best parameters found and the residual norm.
    #[error("calibration did not converge: residual {residual:.6e}")]
    CalibrationFailed {
        best: crate::polarization::PolarizationParams,
        residual: f64,
    },

    /// Simulation preconditions violated (time step too large, gas cell
    /// already exhausted, ...).
    #[error("simulation error: {0}")]
    Simulation(String),

    /// An unknown sweep variable or study name.
    #[error("unknown variable: {0}")]
    UnknownVariable(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
