use thiserror::Error;

use crate::types::CountPair;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("score {0} is not finite")]
    NonFiniteScore(f64),

    #[error("no points with score {0}")]
    ScoreNotFound(f64),

    #[error("cannot remove {requested} at score {score}: only {present} present")]
    InsufficientWeight {
        score: f64,
        requested: CountPair,
        present: CountPair,
    },

    #[error("weight must be non-zero")]
    ZeroWeight,

    #[error("bridge search needs two non-empty hulls")]
    DegenerateHull,

    #[error("no node accumulator registered")]
    NoAccumulatorRegistered,

    #[error("coordinate difference (0, 0) has no cost threshold")]
    ZeroDifference,

    #[error("polyline is not convex at vertex {0}")]
    NonConvexInput(usize),

    #[error("domain error: {0}")]
    Domain(String),
}
