// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Interpolating master-equation generators for collision models.

pub mod affine;
pub mod diagnostics;
pub mod error;
pub mod gaussian;
pub mod interp;
pub mod numkit;
pub mod scenarios;
pub mod superop;

pub use error::{CollintError, Result};

/// Library version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
