//! Exact AUC and H-measure under insertions and deletions of scored,
//! labeled points.
//!
//! - [`ScoreIndex`] answers "how many points of each class score below σ".
//! - [`AucState`] keeps the Mann–Whitney statistic exact on top of it.
//! - [`RocHullIndex`] keeps the upper hull of the ROC curve with a per-edge
//!   accumulator, from which [`hmeasure::exact_h`] reads the H-measure.
//! - [`hmeasure::approx_h`] handles externally supplied priors.
//! - [`oracles`] holds from-scratch reference implementations.

pub mod auc;
pub mod error;
pub mod hmeasure;
pub mod hull;
pub mod oracles;
pub mod score_index;
pub mod types;

pub use auc::AucState;
pub use error::{Error, Result};
pub use hmeasure::{BetaParams, HullPolyline, Priors};
pub use hull::{HullTree, RocHullIndex};
pub use score_index::ScoreIndex;
pub use types::{CountPair, DataPoint, Label, RocPoint, Score};
