use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("inadmissible state at zone ({i}, {j}): {what} = {value}")]
    Inadmissible {
        i: i64,
        j: i64,
        what: &'static str,
        value: f64,
    },

    #[error("Riemann fixed point failed to converge at interface x={x}, y={y}: residual {residual}")]
    RiemannNonConvergence { x: f64, y: f64, residual: f64 },

    #[error("Newton iteration failed in implicit stage {stage}: residual {residual}")]
    NewtonNonConvergence { stage: usize, residual: f64 },

    #[error("eigenvalue iteration did not converge for state {state:?}")]
    EigenFailure { state: Vec<f64> },

    #[error("problem id {0:?} is unknown; valid ids: {1}")]
    UnknownProblem(String, String),

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SolverError>;
