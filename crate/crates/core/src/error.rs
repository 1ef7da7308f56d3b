use thiserror::Error;

/// Errors produced by tree construction, spectral computations and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parent array is empty")]
    Empty,
    #[error("no root: exactly one vertex must have the root sentinel")]
    NoRoot,
    #[error("multiple roots at vertices {first} and {second}")]
    MultipleRoots { first: usize, second: usize },
    #[error("parent index {parent} of vertex {vertex} is out of range for {n} vertices")]
    IndexOutOfRange { vertex: usize, parent: usize, n: usize },
    #[error("cycle detected through vertex {vertex}")]
    CycleDetected { vertex: usize },
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("cannot delete the root")]
    CannotDeleteRoot,
    #[error("index out of range: {0}")]
    IndexError(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("eigensolver did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("matrix too small: {0}")]
    TooSmall(String),
    #[error("Perron vector is not strictly positive (min entry {min_entry:e})")]
    NotPositive { min_entry: f64 },
    #[error("eigenvalue clusters overlap near {lambda} at tolerance {tol:e}")]
    AmbiguousCluster { lambda: f64, tol: f64 },
    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("no sign change bracketing a root in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
