use std::fmt;

use thiserror::Error;

use crate::graph::EdgeRef;

/// Why a rewiring could not be applied to a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inapplicable {
    MissingSource(EdgeRef),
    CreatedExists(EdgeRef),
    SharedEndpoint,
    EndpointMismatch,
}

impl fmt::Display for Inapplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inapplicable::MissingSource(e) => write!(f, "source edge {e} is not in the graph"),
            Inapplicable::CreatedExists(e) => write!(f, "created edge {e} already exists"),
            Inapplicable::SharedEndpoint => write!(f, "source edges share an endpoint"),
            Inapplicable::EndpointMismatch => {
                write!(f, "created edges do not use the four source endpoints")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on node `{label}`")]
    SelfLoop { line: usize, label: String },

    #[error("node id {0} out of range")]
    NodeOutOfRange(usize),

    #[error("rewiring inapplicable: {0}")]
    Inapplicable(Inapplicable),

    #[error("edges {0} and {1} share an endpoint")]
    InvalidPair(EdgeRef, EdgeRef),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("all edge weights are zero")]
    DegenerateWeights,

    #[error("approximation ratio undefined: optimum is zero")]
    UndefinedRatio,

    #[error("exact search stopped after {explored} nodes without proving optimality")]
    NotProven { explored: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by user input rather than by the toolkit.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::SelfLoop { .. }
                | Error::NodeOutOfRange(_)
                | Error::InvalidArgument(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
