use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root multiset must contain at least one root")]
    EmptyRoots,

    #[error("root {index} ({re}{im:+}i) is not finite")]
    NonFiniteRoot { index: usize, re: f64, im: f64 },

    #[error("root {index} ({re}{im:+}i) is not a positive real number")]
    NotPositiveReal { index: usize, re: f64, im: f64 },

    #[error("coefficient vector must describe a polynomial of degree at least 1")]
    DegreeTooLow,

    #[error("leading coefficient must be exactly 1")]
    NotMonic,

    #[error("operation needs degree at least {required}, got {actual}")]
    DegreeBelow { required: usize, actual: usize },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("scale factor {index} is zero")]
    ZeroScale { index: usize },

    #[error("expected {expected} scale factors, got {actual}")]
    ScaleCountMismatch { expected: usize, actual: usize },

    #[error("derivative order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("n = {n} outside supported range 1..=120")]
    StirlingRange { n: usize },

    #[error("root finder did not converge after {iterations} sweeps (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
        iterates: Vec<(f64, f64)>,
        residuals: Vec<f64>,
    },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
