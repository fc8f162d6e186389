//! Config parsing and result files for the `beamsearch` command-line tool.

mod execute;
mod output;
pub mod spec;

pub use execute::{build_template, execute, worker_count, ExecuteOptions, ExecutionReport, WORKERS_ENV};
pub use spec::{parse_spec, ExperimentKind, ExperimentSpec, RawConfig};
