//! IO companion of `elc-core`: JSON run configuration, the ELC1 snapshot
//! format, CSV time series, run summaries, the verification suite and the
//! named fixture runs the acceptance tests drive.

pub mod config;
pub mod fixtures;
pub mod report;
pub mod sinks;
pub mod snapshot;
pub mod verify;
