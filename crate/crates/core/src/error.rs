use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid drift: {0}")]
    InvalidDrift(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("randomization rate q_{index} = {value} must be positive")]
    NonPositiveRate { index: usize, value: f64 },

    #[error("killing rate c = {0} must be positive")]
    NonPositiveKilling(f64),

    #[error("time interval is reversed: s = {s} > t = {t}")]
    ReversedInterval { s: f64, t: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("spectral split failed: {0}")]
    SpectralSplit(String),

    #[error("singular linear system for block ({row}, {col})")]
    SingularBlock { row: usize, col: usize },

    #[error("factorization residual {value:e} exceeds {tol:e}")]
    Residual { value: f64, tol: f64 },

    #[error("no admissible root: {0}")]
    NoRoot(String),

    #[error("invalid inversion settings: {0}")]
    Inversion(String),

    #[error("transform evaluation failed at node {node:?}: {source}")]
    Node {
        node: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid simulation settings: {0}")]
    Simulation(String),
}

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::SpectralSplit(_) | Error::SingularBlock { .. } | Error::NoRoot(_) | Error::Residual { .. } => true,
            Error::Node { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
