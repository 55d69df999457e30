use thiserror::Error;

use crate::graph::GraphFamily;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{family} graph needs at least {min} vertices, got {n}")]
    TooFewVertices {
        family: GraphFamily,
        min: usize,
        n: usize,
    },
    #[error("lattice size {0} is not a perfect square")]
    NotSquare(usize),
    #[error("boundary clamping is only defined for the 2-D lattice, not {0}")]
    BoundaryNotSupported(GraphFamily),
    #[error("configuration has {got} spins, graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("spin values must be -1 or +1")]
    InvalidSpin,
    #[error("clamped vertex {0} does not hold its clamp value")]
    ClampViolated(usize),
    #[error("exact enumeration limited to {max} free spins, got {got}")]
    EnumerationTooLarge { max: usize, got: usize },
    #[error("no exact magnetization solver for {0}")]
    UnsupportedFamily(GraphFamily),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Wolff cluster updates require h = 0 (got h = {0})")]
    WolffNeedsZeroField(f64),
    #[error("Wolff cluster updates are not available for the mean-field complete graph")]
    WolffOnCompleteGraph,
    #[error("level S = {level} makes n(1+S)/2 an integer at n = {n}")]
    IntegerLevel { n: usize, level: f64 },
    #[error("magnetization {xbar} ties the supermajority level")]
    Tie { xbar: f64 },
    #[error("exact conditional error limited to n <= {max}, got {n}")]
    ExactTooLarge { max: usize, n: usize },
    #[error("estimator {method} cannot use this source: {reason}")]
    MethodSourceMismatch {
        method: &'static str,
        reason: &'static str,
    },
    #[error("window contains no support point")]
    EmptyWindow,
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
