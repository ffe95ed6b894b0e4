//! Seeded study runner, summaries and reports for the `evaqs` command-line tool.

pub mod config;
pub mod report;
pub mod study;
pub mod summary;

pub use config::{Overrides, StudyConfig, StudyKind};
pub use study::{run_study, write_csv, StudyRow, CSV_HEADER, SCHEMA_VERSION};
pub use summary::{percentile, summarize, CellSummary};
