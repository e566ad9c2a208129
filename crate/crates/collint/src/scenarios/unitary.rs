// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed unitary families `U(δt) = exp(−i H δt)` acting on state vectors.

use std::f64::consts::PI;

use super::{exponential_taylor, require_hermitian, TAYLOR_TERMS};
use crate::error::{CollintError, Result};
use crate::interp::UpdateMapSeries;
use crate::numkit::{self, c, CMatrix};

/// `x mod 2π`, returned in `[−π, π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let y = x - two_pi * ((x + PI) / two_pi).floor();
    // Guard the upper end against roundoff in the floor.
    if y >= PI {
        y - two_pi
    } else {
        y
    }
}

/// `δt ↦ exp(−i H δt)` with its exponential Taylor series.
pub fn unitary_map(h: &CMatrix) -> Result<UpdateMapSeries> {
    let d = require_hermitian(h, "H")?;
    let hc = h.clone();
    Ok(UpdateMapSeries::from_evaluator(d, "unitary", move |t| {
        numkit::expm(&(&hc * c(0.0, -t))).expect("exponential of a finite Hermitian matrix")
    })
    .with_taylor(exponential_taylor(h, TAYLOR_TERMS)))
}

/// `−i mod_{[−π,π)}(H δt) / δt`, the principal interpolation generator.
pub fn unitary_generator_exact(h: &CMatrix, dt: f64) -> Result<CMatrix> {
    require_hermitian(h, "H")?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CollintError::InvalidParameter(format!(
            "duration must be positive, got {dt}"
        )));
    }
    let (vals, vecs) = numkit::eigh(h)?;
    let n = vals.len();
    let mut diag = CMatrix::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        diag[(k, k)] = c(0.0, -wrap_phase(lam * dt) / dt);
    }
    Ok(&vecs * diag * vecs.adjoint())
}

/// `−π ≤ H_min δt` and `H_max δt < π`, so the interpolation reproduces `−iH`.
pub fn within_small_time_regime(h: &CMatrix, dt: f64) -> Result<bool> {
    require_hermitian(h, "H")?;
    let (vals, _) = numkit::eigh(h)?;
    let lo = vals.first().copied().unwrap_or(0.0);
    let hi = vals.last().copied().unwrap_or(0.0);
    Ok(-PI <= lo * dt && hi * dt < PI)
}
