//! Seeded verification campaigns over the inequality catalog, their JSON and
//! CSV reports, trial replay and the `opineq` command line.

pub mod campaign;
pub mod cli;
pub mod config;
pub mod replay;
pub mod report;

use std::path::Path;

use opineq_core::catalog::CatalogError;
use opineq_core::generators::GenError;
use opineq_core::linalg::LinalgError;
use thiserror::Error;

pub use campaign::run_campaign;
pub use config::{CampaignConfig, OutputPaths, Preset, SpecSelection};
pub use replay::replay;
pub use report::{CampaignReport, SpecAggregate, TrialRow, FORMAT_VERSION};

/// Process exit status: success.
pub const EXIT_OK: i32 = 0;
/// Process exit status: usage or runtime error.
pub const EXIT_ERROR: i32 = 1;
/// Process exit status: at least one violation found.
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("fingerprint format {found:?} does not match {expected:?}")]
    VersionMismatch { found: String, expected: String },
    #[error("unknown inequality {0:?}")]
    UnknownSpec(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Catalog(CatalogError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, err: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}

impl From<CatalogError> for HarnessError {
    fn from(err: CatalogError) -> Self {
        match err {
            CatalogError::UnknownSpec(id) => HarnessError::UnknownSpec(id),
            other => HarnessError::Catalog(other),
        }
    }
}

impl From<GenError> for HarnessError {
    fn from(err: GenError) -> Self {
        HarnessError::Catalog(err.into())
    }
}

impl From<LinalgError> for HarnessError {
    fn from(err: LinalgError) -> Self {
        HarnessError::Catalog(err.into())
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(err: serde_json::Error) -> Self {
        HarnessError::Json(err.to_string())
    }
}
