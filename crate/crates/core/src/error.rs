use thiserror::Error;

/// Errors raised by the channel calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian (deviation {deviation:.3e} > {tolerance:.3e})")]
    Hermiticity { deviation: f64, tolerance: f64 },
    #[error("positivity violated: minimum eigenvalue {min_eigenvalue:.3e}")]
    Positivity { min_eigenvalue: f64 },
    #[error("trace is {trace:.12}, expected 1")]
    Trace { trace: f64 },
    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("not column-stochastic: {0}")]
    Stochasticity(String),
    #[error("not bistochastic: row sum deviation {deviation:.3e}")]
    Bistochasticity { deviation: f64 },
    #[error("invariant state is not unique ({multiplicity} independent solutions)")]
    NonUniqueInvariant { multiplicity: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("state is not in the required class: {0}")]
    Class(String),
    #[error("quasi-free constraint violated: {0}")]
    Constraint(String),
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("operator norm {norm:.12} exceeds 1")]
    Norm { norm: f64 },
    #[error("matrix is not an orthogonal projector (deviation {deviation:.3e})")]
    Projector { deviation: f64 },
    #[error("symbol is not of the form 1/2 [[1, R], [R*, S]]: {0}")]
    BlockForm(String),
    #[error("{modes} modes requested, Fock-space realization supports at most {max}")]
    ModeLimit { modes: usize, max: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
