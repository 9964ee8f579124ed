use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the real domain of the function being evaluated.
    #[error("{op}: argument {x} is outside the domain")]
    Domain { op: &'static str, x: f64 },

    #[error("invalid parameter {name} = {value}: {expected}")]
    Parameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("index {index} outside 1..={max}")]
    Index { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite integrand value {value} at node {node} (s = {s})")]
    NonFinite { node: usize, s: f64, value: f64 },

    /// The conjugate derivative overflowed at a quadrature node.
    #[error("evaluation diverged at node {node}: inner product {inner}")]
    Diverged {
        node: usize,
        inner: f64,
        mu: Vec<f64>,
    },

    #[error("Jacobian is singular even after regularization")]
    SingularJacobian,

    #[error("linear system is numerically singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("supremum is unbounded above at x = {x}")]
    Unbounded { x: f64 },
}
