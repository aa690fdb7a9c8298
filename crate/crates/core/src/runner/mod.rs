//! Batch orchestration: configuration, parallel grid execution and
//! deterministic CSV output.

mod config;
mod execute;
mod output;

pub use config::{
    load_config, parse_config, EngineChoice, Experiment, Grid, GridValue, Initial, RunConfig,
    DEFAULT_REPEATS, DEFAULT_SPECTRUM_STEPS, DEFAULT_TRIALS,
};
pub use execute::{execute, render};
pub use output::{num, sha256_hex, Artifact, OutputRecord, RunManifest, Table};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::OutOfRange { .. }
        | Error::Contract(_)
        | Error::Domain(_)
        | Error::DimensionMismatch { .. } => EXIT_CONFIG,
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Numeric(_) | Error::Invariant(_) => EXIT_NUMERIC,
        Error::Io(_) => EXIT_IO,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Config(_) => "config",
        Error::OutOfRange { .. } => "out-of-range",
        Error::Contract(_) => "contract",
        Error::Domain(_) => "domain",
        Error::DimensionMismatch { .. } => "dimension",
        Error::Capacity { .. } => "capacity",
        Error::Numeric(_) => "numeric",
        Error::Invariant(_) => "invariant",
        Error::Io(_) => "io",
    }
}

/// One-line JSON error record.
pub fn error_record(e: &Error) -> serde_json::Value {
    serde_json::json!({
        "status": "error",
        "kind": error_kind(e),
        "exit_code": exit_code(e),
        "message": e.to_string(),
    })
}
