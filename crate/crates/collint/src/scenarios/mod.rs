// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Worked collision-model families.
//!
//! Each constructor returns an [`UpdateMapSeries`] together with whatever
//! closed-form data the family admits (golden series coefficients, mode
//! decompositions, symbolic Taylor terms).

mod bombardment;
mod dyson;
mod ensemble;
mod partial_swap;
mod toy;
mod unitary;
mod zeno;

pub use bombardment::{
    ancillary_bombardment, bombardment_l1_closed_form, fock_convergence, oscillator_quadratures, system_channel,
    thermal_state, Bombardment, BombardmentSpec, FockConvergence,
};
pub use dyson::{
    duration_scaled_first_order, dyson_effective_hamiltonian, dyson_family, time_ordered_exponential, DysonConvention,
    DysonSeries,
};
pub use ensemble::{mixed_unitary, DecoherenceMode, EnsembleSpec, MixedUnitary};
pub use partial_swap::{PartialSwap, PartialSwapGolden};
pub use toy::{scalar_toy, toy_divergence_point};
pub use unitary::{unitary_generator_exact, unitary_map, within_small_time_regime, wrap_phase};
pub use zeno::{zeno_transfer, ZenoTransfer};

use crate::error::{CollintError, Result};
use crate::interp::{self, UpdateMapSeries};
use crate::numkit::{self, c, CMatrix, CVector};

/// Default Hermiticity tolerance for user-supplied operators.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub(crate) fn require_hermitian(m: &CMatrix, name: &str) -> Result<usize> {
    let n = numkit::ensure_square(m)?;
    let scale = m.norm().max(1.0);
    let defect = (m - m.adjoint()).norm();
    if defect > HERMITIAN_TOL * scale {
        return Err(CollintError::InvalidParameter(format!(
            "{name} is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(n)
}

pub(crate) fn require_density(rho: &CMatrix, name: &str) -> Result<usize> {
    let n = require_hermitian(rho, name)?;
    let tr = rho.trace();
    if (tr - c(1.0, 0.0)).norm() > 1e-10 {
        return Err(CollintError::InvalidState(format!("{name} has trace {tr}")));
    }
    let rep = numkit::hermitian_report(rho, 1e-10)?;
    if !rep.is_psd() {
        return Err(CollintError::InvalidState(format!(
            "{name} has eigenvalue {:e}",
            rep.min_eigenvalue
        )));
    }
    Ok(n)
}

/// `[(−iH)^k / k!]` for `k = 1..=count`.
pub(crate) fn exponential_taylor(h: &CMatrix, count: usize) -> Vec<CMatrix> {
    let mih = h * c(0.0, -1.0);
    let mut out = Vec::with_capacity(count);
    let mut term = numkit::eye(h.nrows());
    for k in 1..=count {
        term = &term * &mih * c(1.0 / k as f64, 0.0);
        out.push(term.clone());
    }
    out
}

/// Number of stored Taylor terms for analytic families.
pub(crate) const TAYLOR_TERMS: usize = 12;

/// State along an interrupted collision sequence versus the interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct InterruptionSample {
    pub t: f64,
    /// `M(r) M(δt)^n v0` with `t = n δt + r`.
    pub exact: CVector,
    /// `exp(t L_δt) v0`.
    pub interpolated: CVector,
}

/// Compare the interpolated trajectory with the interruption `M(δt, r) = M(r)`.
pub fn interruption_comparison(
    series: &UpdateMapSeries,
    dt: f64,
    v0: &CVector,
    times: &[f64],
) -> Result<Vec<InterruptionSample>> {
    let m = series.evaluate(dt)?;
    let l = interp::generator_exact(&m, dt)?;
    let interpolated = interp::propagate(&l, v0, times)?;
    times
        .iter()
        .zip(interpolated)
        .map(|(&t, interp_v)| {
            // Snap to the nearest stroboscopic point to avoid r ≈ δt roundoff.
            let ratio = t / dt;
            let n = if (ratio - ratio.round()).abs() < 1e-12 {
                ratio.round()
            } else {
                ratio.floor()
            };
            let r = (t - n * dt).max(0.0);
            let mut v = v0.clone();
            for _ in 0..n as usize {
                v = &m * v;
            }
            let exact = series.evaluate(r)? * v;
            Ok(InterruptionSample {
                t,
                exact,
                interpolated: interp_v,
            })
        })
        .collect()
}
