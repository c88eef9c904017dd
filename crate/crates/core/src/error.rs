use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("`{0}` is not a phase variable e_j/f_j")]
    NotPhaseVariable(String),
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("bad square root: {0}")]
    BadSquareRoot(String),
    #[error("coefficient z^{index} lies outside the validity order {order}")]
    OutOfValidity { index: i64, order: i64 },
    #[error("truncation order {available} is too small, need at least {required}")]
    InsufficientOrder { required: u32, available: u32 },
    #[error("no flow table for time {0}")]
    MissingFlow(u32),
    #[error("flow table for time {time} only covers indices up to {max}, need {needed}")]
    FlowIndex { time: u32, max: u32, needed: u32 },
    #[error("chart conversion failed: {0}")]
    Chart(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("form is not Hamiltonian: {0}")]
    NotHamiltonian(String),
}

/// Fail with [`Error::InsufficientOrder`] unless `available >= required`.
pub fn need_order(required: u32, available: u32) -> Result<()> {
    if available < required {
        Err(Error::InsufficientOrder { required, available })
    } else {
        Ok(())
    }
}
