//! Files, threads and the command line for the `kcenter-core` solver.

pub mod cli;
pub mod csv;
pub mod pool;
pub mod report;
pub mod synth;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("row {row}, column {col}: cannot parse {value:?} as a number")]
    Parse { row: usize, col: usize, value: String },
    #[error("row {row}, column {col}: value {value:?} is not finite")]
    NotFinite { row: usize, col: usize, value: String },
    #[error("row {row}: expected {expected} fields, found {got}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("no data rows")]
    Empty,
    #[error("invalid synthetic spec {0:?}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] kcenter_core::Error),
}
