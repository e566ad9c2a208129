// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! The scalar family `M(δt) = 1 − b δt − a δt²`.

use crate::error::{CollintError, Result};
use crate::interp::UpdateMapSeries;
use crate::numkit::{c, CMatrix};

/// One-dimensional polynomial update map.
pub fn scalar_toy(a: f64, b: f64) -> Result<UpdateMapSeries> {
    if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(CollintError::InvalidParameter(format!(
            "scalar toy needs finite a, b >= 0, got a = {a}, b = {b}"
        )));
    }
    let scalar = |x: f64| CMatrix::from_element(1, 1, c(x, 0.0));
    Ok(
        UpdateMapSeries::from_evaluator(1, "scalar_toy", move |t| scalar(1.0 - b * t - a * t * t))
            .with_polynomial_taylor(vec![scalar(-b), scalar(-a)]),
    )
}

/// Positive root of `1 − b δt − a δt² = 0`, where the toy map leaves the
/// principal logarithm's domain.
pub fn toy_divergence_point(a: f64, b: f64) -> Option<f64> {
    if a > 0.0 {
        Some((-b + (b * b + 4.0 * a).sqrt()) / (2.0 * a))
    } else if b > 0.0 {
        Some(1.0 / b)
    } else {
        None
    }
}
