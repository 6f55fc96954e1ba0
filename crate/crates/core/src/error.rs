use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("enumeration of {requested} tuples exceeds the budget of {budget}")]
    Size { requested: u128, budget: u128 },

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("(n + gamma) - A_n is singular or ill-conditioned at degree {degree} (condition estimate {condition:e})")]
    Regularity { degree: usize, condition: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series did not converge: {0}")]
    Convergence(String),

    #[error("chart error: {0}")]
    Chart(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate multiplicity: {0}")]
    DegenerateMultiplicity(String),

    #[error("point lies on the mirror of root {root}: {detail}")]
    SingularPoint { root: usize, detail: String },

    #[error("constant mismatch: formula value {formula}, best-fit value {best_fit}, residual {residual:e}")]
    ConstantMismatch { formula: f64, best_fit: f64, residual: f64 },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence(_) => 3,
            _ => 2,
        }
    }
}
