use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid node id {0}")]
    InvalidNode(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no regular graph with {n} nodes of degree {degree}")]
    InfeasibleRegular { n: usize, degree: usize },

    #[error("every node has degree 0, cost is undefined")]
    ZeroCentralDegree,

    #[error("eigenvector centrality did not converge after {iterations} iterations (last change {last_change:e})")]
    NotConverged {
        iterations: usize,
        last_change: f64,
        last_iterate: Vec<f64>,
    },

    #[error("no affordable seed for player {player} (budget {budget})")]
    NoAffordableSeed { player: u8, budget: f64 },

    #[error("numerical failure at t={time}: {message}; try a smaller dt")]
    Numerical { time: f64, message: String },

    #[error("best responses have {0} mutual fixed points, expected exactly one")]
    NashNotUnique(usize),

    #[error("replication {replication}: {source}")]
    Replication {
        replication: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
