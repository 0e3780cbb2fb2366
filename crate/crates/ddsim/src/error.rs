use thiserror::Error;

/// Errors produced by simulation and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: requested rel {requested:.3e}, achieved rel {achieved:.3e}")]
    QuadratureNotConverged { requested: f64, achieved: f64 },

    /// Least-squares refinement exhausted its iteration budget.
    #[error("fit did not converge after {iterations} iterations")]
    FitDidNotConverge { iterations: usize },

    /// The data carry no oscillation the Rabi model could lock onto.
    #[error("no detectable oscillation in data")]
    NoOscillation,

    /// The data do not constrain the model parameters.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// No usable spectroscopy points were supplied.
    #[error("empty spectrum: no usable spectroscopy points")]
    EmptySpectrum,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
