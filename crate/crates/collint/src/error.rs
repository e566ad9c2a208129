// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and the physics layers built on them.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CollintError {
    /// An operation that needs a square matrix received a rectangular one.
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    /// Input contained NaN or infinite entries.
    #[error("matrix contains non-finite entries")]
    NonFinite,

    /// Operand shapes do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An eigenvalue sits on the closed negative real axis, so the principal
    /// logarithm is undefined.
    #[error("principal logarithm undefined: eigenvalue {eigenvalue} on the negative real axis")]
    BranchFailure { eigenvalue: Complex64 },

    /// The matrix is (numerically) not invertible.
    #[error("matrix is singular (eigenvalue of modulus {modulus:e})")]
    Singular { modulus: f64 },

    /// Not enough Taylor data to reach the requested order.
    #[error("insufficient Taylor data: need {needed} coefficients, have {available}")]
    InsufficientOrder { needed: usize, available: usize },

    /// A Choi matrix has an eigenvalue below the negative tolerance.
    #[error("map is not completely positive: Choi eigenvalue {min_eigenvalue:e}")]
    NotCP { min_eigenvalue: f64 },

    /// A generator does not annihilate the trace.
    #[error("generator is not trace annihilating: residual {residual:e}")]
    NotTraceAnnihilating { residual: f64 },

    /// The affine generator has a singular linear part.
    #[error("no isolated fixed point: smallest singular value {sigma_min:e}")]
    NoIsolatedFixedPoint { sigma_min: f64 },

    /// Eigenbranches could not be followed across a grid of durations.
    #[error("Kraus branch matching failed at dt = {dt:e}: best overlap {overlap:.3}")]
    BranchMatchingFailure { dt: f64, overlap: f64 },

    /// Probabilities do not sum to one or are negative.
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    /// Projectors do not form a complete orthogonal rank-one set.
    #[error("incomplete or non-orthogonal projector basis: {0}")]
    IncompleteBasis(String),

    /// Ancilla state is not of Gibbs form for the supplied Hamiltonian.
    #[error("ancilla state is not thermal for the given Hamiltonian: residual {residual:e}")]
    NonThermalAncilla { residual: f64 },

    /// A state fails its validity condition.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A scalar parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Eigen or Schur iteration did not converge.
    #[error("decomposition failed to converge: {0}")]
    NoConvergence(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CollintError>;
