use thiserror::Error;

/// Errors raised by the solver workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state has length {got}, expected {expected}")]
    StateDimension { expected: usize, got: usize },

    #[error("inadmissible state: {0}")]
    Inadmissible(String),

    #[error("invalid direction k={0} (only k=1 and k=2 are supported)")]
    InvalidDirection(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("energy Hessian is not positive definite: {0}")]
    IndefiniteHessian(String),

    #[error("zero signal speed, no finite CFL time step exists")]
    ZeroSignalSpeed,

    #[error("Krylov solver failed: {0}")]
    Krylov(String),

    #[error("Picard iteration did not converge after {iters} iterations (last energy change {last_change:e})")]
    PicardNotConverged { iters: usize, last_change: f64 },

    #[error("step {step} at t={time}: {source}")]
    Step {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("tableau error: {0}")]
    Tableau(String),

    #[error("malformed series file: {0}")]
    Series(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attaches step/time context to a solver error.
    pub fn at_step(self, step: usize, time: f64) -> Self {
        Error::Step {
            step,
            time,
            source: Box::new(self),
        }
    }
}
