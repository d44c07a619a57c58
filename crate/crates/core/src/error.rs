use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("power iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("spectral result is not converged (residual {residual:e} > tol {tol:e})")]
    Unconverged { residual: f64, tol: f64 },
    #[error("bisection bracket [{lo}, {hi}] does not change sign")]
    Bracket { lo: f64, hi: f64 },
    #[error("input graph is not a tree: {0}")]
    NotATree(String),
    #[error("malformed level sequence: {0}")]
    LevelSequence(String),
    #[error(transparent)]
    Graph6(#[from] crate::graph6::Graph6Error),
}

pub type Result<T> = std::result::Result<T, Error>;
