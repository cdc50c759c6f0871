use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Fibonacci number F_{0} overflows u64")]
    FibonacciOverflow(usize),

    #[error("integer {n} has no Zeckendorf string of length {len} (must be < {bound})")]
    ZeckendorfRange { n: u64, len: usize, bound: u64 },

    #[error("configuration violates the PXP constraint at sites {0} and {1}")]
    ConstraintViolation(usize, usize),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric (|a_ij - a_ji| = {0:e} at ({1}, {2}))")]
    NotSymmetric(f64, usize, usize),

    #[error("eigenvalue iteration did not converge for index {0}")]
    NoConvergence(usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("inversion map does not commute with the coupled Hamiltonian")]
    InversionBroken,

    #[error("Hamiltonian path assertion failed between steps {0} and {1}")]
    PathBroken(usize, usize),

    #[error("scar construction residual {residual:e} exceeds tolerance {tolerance:e}")]
    ScarResidual { residual: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
