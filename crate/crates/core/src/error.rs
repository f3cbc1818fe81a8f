use thiserror::Error;

#[derive(Debug, Error)]
pub enum GelfandError {
    #[error("{name} = {value} is outside the domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("gamma({0}) overflows double precision")]
    Overflow(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("dimension N = {dim} violates the regularity window N < (p^2+3p)/(p-1) = {limit} for p = {p}")]
    Window { dim: usize, p: f64, limit: f64 },

    #[error("maximum of alpha^(p-1)/f(alpha) not attained: {0}")]
    MaximumNotAttained(String),

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("integration blew up at r = {r}")]
    BlowUp { r: f64 },

    #[error("step size underflow at r = {r} (h = {h})")]
    StepUnderflow { r: f64, h: f64 },

    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl GelfandError {
    /// True for errors caused by bad parameters rather than a numerical
    /// failure of a solver.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            GelfandError::Domain { .. }
                | GelfandError::Overflow(_)
                | GelfandError::InvalidInput(_)
                | GelfandError::NoSolution(_)
                | GelfandError::Window { .. }
                | GelfandError::MaximumNotAttained(_)
                | GelfandError::Json(_)
                | GelfandError::Csv(_)
        )
    }

    pub(crate) fn domain(name: &'static str, value: f64, reason: impl Into<String>) -> Self {
        GelfandError::Domain {
            name,
            value,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, GelfandError>;
