use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("chart point outside the model's parameter domain: {0}")]
    OutOfChart(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("tuple is not traceless (sum = {sum:e})")]
    NotTraceless { sum: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("degenerate cell {cell} (area {area:e})")]
    DegenerateCell { cell: usize, area: f64 },

    #[error("mass matrix is not symmetric positive definite")]
    MassNotSpd,

    #[error("eigensolver did not converge after {iterations} iterations (max residual {max_residual:e})")]
    ConvergenceFailure { iterations: usize, max_residual: f64 },

    #[error("spectral gap around zero too small: eigenvalue {eigenvalue:e} within ambiguous band (eps_gap {eps_gap:e}); refine the mesh")]
    GapTooSmall { eigenvalue: f64, eps_gap: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
