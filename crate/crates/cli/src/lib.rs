//! Batch certification harness: suite configurations in, reports out.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{Cli, ConfigError, Format, Suite, SuiteConfig};
pub use report::{emit_report, CertificationReport, Check, Summary};
pub use suites::run_suite;
