//! Stream evaluation front end: parses `score,label` lines, maintains the
//! requested metrics in cumulative or sliding-window mode, and optionally
//! checks and times them against a from-scratch recomputation.

pub mod config;
pub mod engine;
pub mod error;
pub mod input;
pub mod output;
pub mod run;

pub use config::{Args, RunConfig};
pub use error::CliError;
pub use input::{parse_line, LabelMap, Records};
pub use output::MetricReport;
pub use run::{execute, run, RunSummary};
