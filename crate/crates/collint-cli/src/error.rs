// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

use collint::CollintError;
use thiserror::Error;

/// Failures of the command-line driver.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Library(#[from] CollintError),

    #[error("cannot serialize report: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 for a principal-logarithm failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(CollintError::BranchFailure { .. }) => 2,
            _ => 1,
        }
    }
}
