use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point outside the open unit disk: |z| = {modulus}")]
    Domain { modulus: f64 },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("sequence has coincident points at indices {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("delta_{index} underflowed to zero; the sequence is not interpolating")]
    NonInterpolating { index: usize },

    #[error("window [{start}, {end}] is invalid for a sequence of {len} stored points")]
    Window { start: usize, end: usize, len: usize },

    #[error("model kernel degenerate at index {index}: 1 - |theta|^2 = {one_minus_mod_sq}")]
    KernelDegenerate { index: usize, one_minus_mod_sq: f64 },

    #[error("measure `{measure}` cannot be paired with the {family} kernel family")]
    IncompatibleMeasure { measure: &'static str, family: &'static str },

    #[error("eigen iteration did not converge after {iterations} steps (best {best}, residual {residual:e})")]
    NotConverged { iterations: usize, best: f64, residual: f64 },

    #[error("eigen cross-check failed: power iteration {power} vs Jacobi {jacobi}")]
    CrossCheck { power: f64, jacobi: f64 },

    #[error("Gram window is numerically singular: lambda_min = {lambda_min:e}")]
    NearSingular { lambda_min: f64 },

    #[error("linear solve stalled: relative residual {residual:e} after {iterations} iterations")]
    SolveStalled { iterations: usize, residual: f64 },

    #[error("approximate solver broke its contract at step {step}: {what} = {value:e} exceeds {bound:e}")]
    ContractViolation { step: usize, what: &'static str, value: f64, bound: f64 },

    #[error("iterative interpolation did not reach the target residual in {iterations} steps (residual {residual:e})")]
    IterationLimit { iterations: usize, residual: f64 },

    #[error("sup |theta| on the window is {kappa}, must be < 1")]
    KappaTooLarge { kappa: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { field, reason: reason.into() }
    }
}
