use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// [`Error::is_config`] separates bad inputs from numerical failures so the
/// command-line front end can map them onto distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no root found: {0}")]
    NoRoot(String),
    #[error("potential has no barrier: {0}")]
    NoBarrier(String),
    #[error("not enough eigenstates: {0}")]
    InsufficientStates(String),
    #[error("wavefunction leaks through the grid boundary: {0}")]
    BoundaryLeak(String),
    #[error("degenerate rate anchor: {0}")]
    DegenerateAnchor(String),
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("dephasing fixed point diverged: {0}")]
    FixedPointDiverged(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),
    #[error("integrator step failure at t = {t:e} s: {reason}")]
    StepFailure { t: f64, reason: String },
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("invalid sweep axis: {0}")]
    AxisInvalid(String),
}

impl Error {
    /// True when the error stems from the inputs rather than the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::PreconditionViolated(_)
                | Error::TruncationTooSmall(_)
                | Error::InvalidInitialState(_)
                | Error::AxisInvalid(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
