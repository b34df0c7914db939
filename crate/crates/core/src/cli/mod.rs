//! Library side of the `minsum` command: solve reports, verification suites and decay experiments.

pub mod corpus;
pub mod experiment;
pub mod solve;
pub mod verify;

use thiserror::Error;

use crate::characterization::CharacterizationError;
use crate::exact::ExactError;
use crate::graph::GraphError;
use crate::messages::MinSumError;
use crate::walks::WalkError;

/// Process exit status for success.
pub const EXIT_OK: i32 = 0;
/// Process exit status when a verification check fails.
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
/// Process exit status for unreadable input or violated preconditions.
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    MinSum(#[from] MinSumError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Characterization(#[from] CharacterizationError),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT_ERROR
    }
}

pub fn write_output(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
