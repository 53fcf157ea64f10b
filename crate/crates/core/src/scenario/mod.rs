//! Scenario ingestion, batch execution and reporting.

pub mod model;
pub mod report;
pub mod run;

pub use model::{bundled_suite, load_scenario, Kind, Payload, Scenario};
pub use report::{CaseReport, NumericValue, Report, Summary, Verdict};
pub use run::{run, RunOptions};
