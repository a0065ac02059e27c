use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Both Rabi frequencies vanish, so the dressed basis has no mixing angle.
    #[error("dressed transformation undefined: omega1 = omega2 = 0")]
    UndefinedMixingAngle,

    #[error("step size underflow at t = {time}")]
    StepSizeUnderflow { time: f64 },

    #[error("step budget of {steps} exhausted at t = {time}")]
    StepBudgetExhausted { steps: usize, time: f64 },

    #[error("Fock truncation overflow: tail mass {tail:e} at n_max = {n_max} (cap reached)")]
    TruncationOverflow { n_max: usize, tail: f64 },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("long-time integration did not reach steady state within {steps} steps (residual {residual:e})")]
    NotConverged { steps: usize, residual: f64 },

    #[error("density matrix not positive: smallest eigenvalue {min_eigenvalue:e}")]
    NonPositiveState { min_eigenvalue: f64 },

    #[error("invalid sweep specification: {0}")]
    InvalidSweep(String),

    #[error("no converged cell in sweep result")]
    NoConvergedCells,

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("missing mandatory config key `{0}`")]
    MissingKey(&'static str),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
