// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Time-dependent Hamiltonians `H(t) = H_0 + t H_1 + t² H_2` and their
//! effective (interpolated) Hamiltonians.
//!
//! Two conventions are supported. With [`DysonConvention::ClockReset`] every
//! collision runs `H(t)` for `t ∈ [0, δt]`, so longer collisions see more of
//! the polynomial. With [`DysonConvention::DurationScaled`] every collision
//! runs `H(t/δt)`, so the whole profile is traversed whatever the duration.

use super::{require_hermitian, TAYLOR_TERMS};
use crate::error::{CollintError, Result};
use crate::interp::{generator_series_from_taylor, UpdateMapSeries};
use crate::numkit::{self, c, commutator, eye, CMatrix};

/// How the collision duration enters the Hamiltonian profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DysonConvention {
    ClockReset,
    DurationScaled,
}

/// Effective and time-averaged Hamiltonians as power series in δt.
#[derive(Debug, Clone, PartialEq)]
pub struct DysonSeries {
    /// `H_eff = i L_δt`, coefficients of `δt^m`.
    pub h_eff: Vec<CMatrix>,
    /// `(1/δt) ∫ H` over one collision, coefficients of `δt^m`.
    pub h_avg: Vec<CMatrix>,
}

fn check_inputs(h: [&CMatrix; 3]) -> Result<usize> {
    let d = require_hermitian(h[0], "H0")?;
    for (k, m) in h.iter().enumerate().skip(1) {
        if require_hermitian(m, &format!("H{k}"))? != d {
            return Err(CollintError::DimensionMismatch(format!("H{k} differs in size from H0")));
        }
    }
    Ok(d)
}

/// Taylor coefficients `U_1..U_count` of the collision propagator.
fn propagator_taylor(h: [&CMatrix; 3], conv: DysonConvention, count: usize) -> Vec<CMatrix> {
    let d = h[0].nrows();
    let mi = c(0.0, -1.0);
    match conv {
        DysonConvention::ClockReset => {
            // (k+1) U_{k+1} = −i (H_0 U_k + H_1 U_{k−1} + H_2 U_{k−2})
            let mut u = vec![eye(d)];
            for k in 0..count {
                let mut acc = CMatrix::zeros(d, d);
                for (j, hj) in h.iter().enumerate() {
                    if j <= k {
                        acc += *hj * &u[k - j];
                    }
                }
                u.push(acc * (mi / (k as f64 + 1.0)));
            }
            u.into_iter().skip(1).collect()
        }
        DysonConvention::DurationScaled => {
            // U(δt) = V(1) with V' = −i δt H(u) V; expand V = Σ δt^k V_k(u) where
            // each V_k is a matrix polynomial in u and V_k = −i ∫_0^u H V_{k−1}.
            let mut poly: Vec<CMatrix> = vec![eye(d)];
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                let mut next = vec![CMatrix::zeros(d, d); poly.len() + 3];
                for (i, p) in poly.iter().enumerate() {
                    for (j, hj) in h.iter().enumerate() {
                        let deg = i + j;
                        next[deg + 1] += *hj * p * (mi / (deg as f64 + 1.0));
                    }
                }
                let mut at_one = CMatrix::zeros(d, d);
                for p in &next {
                    at_one += p;
                }
                out.push(at_one);
                poly = next;
            }
            out
        }
    }
}

/// `T exp(−i ∫_{t0}^{t1} H(s) ds)` by fourth-order Magnus steps.
pub fn time_ordered_exponential<F>(h: F, t0: f64, t1: f64, steps: usize) -> Result<CMatrix>
where
    F: Fn(f64) -> CMatrix,
{
    let steps = steps.max(1);
    let step = (t1 - t0) / steps as f64;
    let off = 3f64.sqrt() / 6.0;
    let mut u = eye(h(t0).nrows());
    for k in 0..steps {
        let mid = t0 + (k as f64 + 0.5) * step;
        let a1 = h(mid - off * step) * c(0.0, -1.0);
        let a2 = h(mid + off * step) * c(0.0, -1.0);
        let omega = (&a1 + &a2) * c(0.5 * step, 0.0) + commutator(&a2, &a1) * c(3f64.sqrt() / 12.0 * step * step, 0.0);
        u = numkit::expm(&omega)? * u;
    }
    Ok(u)
}

const MAGNUS_STEPS: usize = 200;

/// Collision propagator family under the chosen convention.
pub fn dyson_family(h0: &CMatrix, h1: &CMatrix, h2: &CMatrix, conv: DysonConvention) -> Result<UpdateMapSeries> {
    let d = check_inputs([h0, h1, h2])?;
    let taylor = propagator_taylor([h0, h1, h2], conv, TAYLOR_TERMS);
    let (a, b, cc) = (h0.clone(), h1.clone(), h2.clone());
    let label = match conv {
        DysonConvention::ClockReset => "dyson_clock_reset",
        DysonConvention::DurationScaled => "dyson_duration_scaled",
    };
    let series = UpdateMapSeries::from_evaluator(d, label, move |dt| {
        if dt == 0.0 {
            return eye(a.nrows());
        }
        let profile = |s: f64| {
            let x = match conv {
                DysonConvention::ClockReset => s,
                DysonConvention::DurationScaled => s / dt,
            };
            &a + &b * c(x, 0.0) + &cc * c(x * x, 0.0)
        };
        time_ordered_exponential(profile, 0.0, dt, MAGNUS_STEPS).expect("finite Magnus step")
    });
    Ok(series.with_taylor(taylor))
}

/// Effective Hamiltonian series through `δt^order` and the time average.
pub fn dyson_effective_hamiltonian(
    h0: &CMatrix,
    h1: &CMatrix,
    h2: &CMatrix,
    order: usize,
    conv: DysonConvention,
) -> Result<DysonSeries> {
    let d = check_inputs([h0, h1, h2])?;
    let taylor = propagator_taylor([h0, h1, h2], conv, order + 1);
    let gs = generator_series_from_taylor(&taylor, order)?;
    let h_eff = gs.coefficients.iter().map(|l| l * c(0.0, 1.0)).collect();
    let mut h_avg = vec![CMatrix::zeros(d, d); order + 1];
    match conv {
        DysonConvention::ClockReset => {
            for (k, hk) in [h0, h1, h2].iter().enumerate() {
                if k <= order {
                    h_avg[k] = *hk * c(1.0 / (k as f64 + 1.0), 0.0);
                }
            }
        }
        DysonConvention::DurationScaled => {
            h_avg[0] = h0 + h1 * c(0.5, 0.0) + h2 * c(1.0 / 3.0, 0.0);
        }
    }
    Ok(DysonSeries { h_eff, h_avg })
}

/// First-order effective Hamiltonian of the duration-scaled profile,
/// `−(i/2) ∫∫_{u₂<u₁} [H(u₁), H(u₂)]` over the unit square's lower triangle.
pub fn duration_scaled_first_order(h0: &CMatrix, h1: &CMatrix, h2: &CMatrix) -> Result<CMatrix> {
    check_inputs([h0, h1, h2])?;
    let inner = commutator(h1, h0) * c(1.0 / 6.0, 0.0) + commutator(h2, h0) * c(1.0 / 6.0, 0.0)
        - commutator(h1, h2) * c(1.0 / 30.0, 0.0);
    Ok(inner * c(0.0, -0.5))
}
