// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Qubit partial swap against ancillas of Bloch vector `(0, 0, r)`, in the
//! Bloch representation `x ↦ T(δt) x + d(δt)`.
//!
//! With `c = cos(ωδt)` and `s = sin(ωδt)`:
//!
//! ```text
//! T = [[c², r c s, 0], [−r c s, c², 0], [0, 0, c²]],   d = (0, 0, r s²)
//! ```
//!
//! The Bloch components are taken against `(σ_x, −σ_y, σ_z)`, which fixes the
//! sense of the rotation generated by the `r c s` block.

use crate::affine::{augment, rvec, AffineGenerator, AffineMap};
use crate::error::{CollintError, Result};
use crate::interp::UpdateMapSeries;
use crate::numkit::{self, RMatrix, RVector};

use super::TAYLOR_TERMS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSwap {
    pub omega: f64,
    pub r: f64,
}

/// Closed-form generator coefficients `A_0..A_2`, `b_0..b_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSwapGolden {
    pub a: [RMatrix; 3],
    pub b: [RVector; 3],
}

fn rotation_block(x: f64) -> RMatrix {
    RMatrix::from_row_slice(3, 3, &[0.0, x, 0.0, -x, 0.0, 0.0, 0.0, 0.0, 0.0])
}

impl PartialSwap {
    pub fn new(omega: f64, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(CollintError::InvalidParameter(format!(
                "ancilla polarisation r = {r} outside [0, 1]"
            )));
        }
        if !omega.is_finite() {
            return Err(CollintError::InvalidParameter("ω must be finite".into()));
        }
        Ok(Self { omega, r })
    }

    /// `(T(δt), d(δt))`.
    pub fn map(&self, dt: f64) -> AffineMap {
        let (s, c) = (self.omega * dt).sin_cos();
        let r = self.r;
        AffineMap {
            t: RMatrix::from_row_slice(3, 3, &[c * c, r * c * s, 0.0, -r * c * s, c * c, 0.0, 0.0, 0.0, c * c]),
            d: rvec(&[0.0, 0.0, r * s * s]),
        }
    }

    /// Taylor coefficients `(T_k, d_k)` of `δt^k`, `k = 1..=count`, from the
    /// double-angle forms `c² = (1 + cos 2x)/2`, `cs = sin(2x)/2`, `s² = (1 − cos 2x)/2`.
    pub fn taylor(&self, count: usize) -> Vec<AffineMap> {
        let two_w = 2.0 * self.omega;
        let mut fact = 1.0;
        (1..=count)
            .map(|k| {
                fact *= k as f64;
                let p = two_w.powi(k as i32) / fact;
                let (cos_k, sin_k) = if k % 2 == 0 {
                    let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    (sign * p, 0.0)
                } else {
                    let sign = if ((k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    (0.0, sign * p)
                };
                let c2 = 0.5 * cos_k;
                let cs = 0.5 * sin_k;
                let s2 = -0.5 * cos_k;
                let r = self.r;
                AffineMap {
                    t: RMatrix::from_row_slice(3, 3, &[c2, r * cs, 0.0, -r * cs, c2, 0.0, 0.0, 0.0, c2]),
                    d: rvec(&[0.0, 0.0, r * s2]),
                }
            })
            .collect()
    }

    /// The family as a linear map on the augmented vector `(1, x)`.
    pub fn series(&self) -> UpdateMapSeries {
        let me = *self;
        let taylor = self
            .taylor(TAYLOR_TERMS)
            .iter()
            .map(|m| {
                let mut g = augment(m);
                g[(0, 0)] = 0.0;
                numkit::to_complex(&g)
            })
            .collect();
        UpdateMapSeries::from_evaluator(4, "partial_swap", move |dt| numkit::to_complex(&augment(&me.map(dt))))
            .with_taylor(taylor)
    }

    /// Closed-form generator coefficients.
    pub fn golden(&self) -> PartialSwapGolden {
        let (w, r) = (self.omega, self.r);
        let damp = -w * w * (1.0 - 0.5 * r * r);
        PartialSwapGolden {
            a: [
                rotation_block(w * r),
                RMatrix::from_diagonal(&rvec(&[damp, damp, -w * w])),
                rotation_block(w.powi(3) * r * (1.0 - r * r) / 3.0),
            ],
            b: [RVector::zeros(3), rvec(&[0.0, 0.0, w * w * r]), RVector::zeros(3)],
        }
    }

    /// First-order truncated generator `A_0 + δt A_1`, `b_0 + δt b_1`.
    pub fn first_order_generator(&self, dt: f64) -> AffineGenerator {
        let g = self.golden();
        AffineGenerator {
            a: &g.a[0] + &g.a[1] * dt,
            b: &g.b[0] + &g.b[1] * dt,
        }
    }
}
