// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Interpolation generators `L_δt = Log(M(δt)) / δt` and their expansion in δt.
//!
//! An update map family `M(δt)` with `M(0) = I` and Taylor data
//! `M(δt) = I + Σ_k δt^k M_k` yields a generator series
//! `L_δt = Σ_m δt^m L_m` with `L_0 = M_1` and
//!
//! ```text
//! L_m = M_{m+1} - Σ_{n=1}^{m} 1/(n+1)! Σ_{β ∈ C_w(m-n, n+1)} L_{β_1} L_{β_2} ... L_{β_{n+1}}
//! ```
//!
//! where `C_w(M, N)` are the weak compositions of `M` into `N` parts. Products
//! are kept in the written order since the `L_m` need not commute.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{CollintError, Result};
use crate::numkit::{self, c, eye, CMatrix, CVector, TaylorFitOptions};

/// A closed-form evaluator `δt ↦ M(δt)`.
pub type Evaluator = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// A family of update maps, given by an evaluator, Taylor data, or both.
#[derive(Clone)]
pub struct UpdateMapSeries {
    pub dim: usize,
    pub evaluator: Option<Evaluator>,
    /// `[M_1, M_2, ...]` about `δt = 0`.
    pub taylor: Option<Vec<CMatrix>>,
    /// The Taylor list is a complete polynomial: later coefficients are zero.
    pub polynomial: bool,
    pub label: String,
}

impl fmt::Debug for UpdateMapSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UpdateMapSeries")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("evaluator", &self.evaluator.is_some())
            .field("taylor_len", &self.taylor.as_ref().map(|t| t.len()))
            .finish()
    }
}

impl UpdateMapSeries {
    /// Family given by a closed-form evaluator.
    pub fn from_evaluator<F>(dim: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        Self {
            dim,
            evaluator: Some(Arc::new(f)),
            taylor: None,
            polynomial: false,
            label: label.into(),
        }
    }

    /// Family given only by Taylor coefficients `[M_1, M_2, ...]`.
    pub fn from_taylor(dim: usize, label: impl Into<String>, taylor: Vec<CMatrix>) -> Self {
        Self {
            dim,
            evaluator: None,
            taylor: Some(taylor),
            polynomial: false,
            label: label.into(),
        }
    }

    /// Attach Taylor coefficients to an evaluator-backed family.
    pub fn with_taylor(mut self, taylor: Vec<CMatrix>) -> Self {
        self.taylor = Some(taylor);
        self
    }

    /// Attach the complete coefficient list of a polynomial family.
    pub fn with_polynomial_taylor(mut self, taylor: Vec<CMatrix>) -> Self {
        self.taylor = Some(taylor);
        self.polynomial = true;
        self
    }

    /// `M(δt)`. Falls back to summing the Taylor data when no evaluator exists.
    pub fn evaluate(&self, dt: f64) -> Result<CMatrix> {
        if let Some(f) = &self.evaluator {
            let m = f(dt);
            if m.nrows() != self.dim || m.ncols() != self.dim {
                return Err(CollintError::DimensionMismatch(format!(
                    "evaluator returned {}x{}, expected {}",
                    m.nrows(),
                    m.ncols(),
                    self.dim
                )));
            }
            return Ok(m);
        }
        let taylor = self
            .taylor
            .as_ref()
            .ok_or_else(|| CollintError::InvalidParameter("update map has neither evaluator nor Taylor data".into()))?;
        let mut acc = eye(self.dim);
        let mut p = 1.0;
        for mk in taylor {
            p *= dt;
            acc += mk * c(p, 0.0);
        }
        Ok(acc)
    }

    /// Rough time scale `1/||M'(0)||`, or `1/sqrt||M''(0)/2||` when the
    /// first derivative vanishes, used to size finite-difference stencils.
    pub fn characteristic_time(&self) -> f64 {
        let (m1, m2) = match &self.taylor {
            Some(t) if !t.is_empty() => (t[0].norm(), t.get(1).map(|m| m.norm()).unwrap_or(0.0)),
            _ => {
                let h = 1e-4;
                let (Ok(p), Ok(m), Ok(z)) = (self.evaluate(h), self.evaluate(-h), self.evaluate(0.0)) else {
                    return 1.0;
                };
                (
                    (&p - &m).norm() / (2.0 * h),
                    (&p + &m - &z * c(2.0, 0.0)).norm() / (2.0 * h * h),
                )
            }
        };
        if m1 > 1e-8 {
            1.0 / m1
        } else if m2 > 1e-8 {
            1.0 / m2.sqrt()
        } else {
            1.0
        }
    }

    /// `[M_1, ..., M_count]`, from stored data or by a Chebyshev fit of the evaluator.
    pub fn taylor_coefficients(&self, count: usize) -> Result<Vec<CMatrix>> {
        if let Some(t) = &self.taylor {
            if t.len() >= count {
                return Ok(t[..count].to_vec());
            }
            if self.polynomial {
                let mut out = t.clone();
                out.resize(count, CMatrix::zeros(self.dim, self.dim));
                return Ok(out);
            }
            if self.evaluator.is_none() {
                return Err(CollintError::InsufficientOrder {
                    needed: count,
                    available: t.len(),
                });
            }
        }
        let opts = TaylorFitOptions {
            half_width: 0.1 * self.characteristic_time(),
            ..TaylorFitOptions::default()
        };
        let coeffs = numkit::taylor_fit(|t| self.evaluate(t), count, opts)?;
        Ok(coeffs.into_iter().skip(1).collect())
    }
}

/// Coefficients `[L_0, ..., L_K]` of the generator series.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSeries {
    pub coefficients: Vec<CMatrix>,
    /// Highest retained power `K`.
    pub order: usize,
}

impl GeneratorSeries {
    /// `Σ_{m ≤ upto} δt^m L_m`.
    pub fn truncated(&self, dt: f64, upto: usize) -> CMatrix {
        let n = self.coefficients[0].nrows();
        let mut acc = CMatrix::zeros(n, n);
        let mut p = 1.0;
        for lm in self.coefficients.iter().take(upto + 1) {
            acc += lm * c(p, 0.0);
            p *= dt;
        }
        acc
    }
}

/// `L_δt = Log(M) / δt`.
pub fn generator_exact(m: &CMatrix, dt: f64) -> Result<CMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CollintError::InvalidParameter(format!(
            "duration must be positive, got {dt}"
        )));
    }
    Ok(numkit::logm_principal(m)? * c(1.0 / dt, 0.0))
}

/// All length-`n` tuples of non-negative integers summing to `m`, in
/// lexicographic order. There are `binomial(m + n - 1, n - 1)` of them.
pub fn weak_compositions(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=rest {
            prefix.push(first);
            rec(rest - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, n, &mut Vec::with_capacity(n), &mut out);
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Generator coefficients from Taylor data `[M_1, ..., M_{K+1}]`.
///
/// The inner sums over weak compositions are the `δt^j` coefficients of
/// powers of the partial series `Σ_i δt^i L_i`, which are accumulated with
/// left multiplication so that the written product order is preserved.
pub fn generator_series_from_taylor(taylor: &[CMatrix], order: usize) -> Result<GeneratorSeries> {
    if taylor.len() < order + 1 {
        return Err(CollintError::InsufficientOrder {
            needed: order + 1,
            available: taylor.len(),
        });
    }
    let n = taylor[0].nrows();
    let mut l: Vec<CMatrix> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut acc = taylor[m].clone();
        if m >= 1 {
            // powers[p][j] = Σ_{β ∈ C_w(j, p)} Π L_β, for p = 1..=m+1, j = 0..m-1.
            let mut powers: Vec<Vec<CMatrix>> = vec![l[..m].to_vec()];
            for _p in 2..=m + 1 {
                let prev = powers.last().expect("non-empty");
                let next: Vec<CMatrix> = (0..m)
                    .map(|j| {
                        let mut s = CMatrix::zeros(n, n);
                        for i in 0..=j {
                            s += &l[i] * &prev[j - i];
                        }
                        s
                    })
                    .collect();
                powers.push(next);
            }
            for k in 1..=m {
                acc -= &powers[k][m - k] * c(1.0 / factorial(k + 1), 0.0);
            }
        }
        l.push(acc);
    }
    Ok(GeneratorSeries { coefficients: l, order })
}

/// Reference evaluation of the recursion that enumerates the compositions explicitly.
pub fn generator_series_by_compositions(taylor: &[CMatrix], order: usize) -> Result<GeneratorSeries> {
    if taylor.len() < order + 1 {
        return Err(CollintError::InsufficientOrder {
            needed: order + 1,
            available: taylor.len(),
        });
    }
    let dim = taylor[0].nrows();
    let mut l: Vec<CMatrix> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut acc = taylor[m].clone();
        for n in 1..=m {
            let weight = c(1.0 / factorial(n + 1), 0.0);
            for beta in weak_compositions(m - n, n + 1) {
                let prod = beta.iter().fold(eye(dim), |p, &b| p * &l[b]);
                acc -= prod * weight;
            }
        }
        l.push(acc);
    }
    Ok(GeneratorSeries { coefficients: l, order })
}

/// Generator series `[L_0, ..., L_K]` of an update map family.
pub fn generator_series(series: &UpdateMapSeries, order: usize) -> Result<GeneratorSeries> {
    let taylor = series.taylor_coefficients(order + 1)?;
    generator_series_from_taylor(&taylor, order)
}

/// Finite-difference estimate of `[L_0, ..., L_K]` from the exact generator.
///
/// Uses `Log(M(δt))/δt` at Chebyshev nodes on both sides of zero, which
/// requires the evaluator to accept negative durations.
pub fn generator_series_numeric(series: &UpdateMapSeries, order: usize, half_width: f64) -> Result<GeneratorSeries> {
    let opts = TaylorFitOptions {
        half_width,
        ..TaylorFitOptions::default()
    };
    let coefficients = numkit::taylor_fit(
        |t| Ok(numkit::logm_principal(&series.evaluate(t)?)? * c(1.0 / t, 0.0)),
        order,
        opts,
    )?;
    Ok(GeneratorSeries { coefficients, order })
}

/// `v(t) = exp(t L) v0` on each grid point.
pub fn propagate(l: &CMatrix, v0: &CVector, t_grid: &[f64]) -> Result<Vec<CVector>> {
    numkit::ensure_square(l)?;
    if v0.len() != l.nrows() {
        return Err(CollintError::DimensionMismatch(format!(
            "state of length {} for generator of size {}",
            v0.len(),
            l.nrows()
        )));
    }
    t_grid
        .par_iter()
        .map(|&t| Ok(numkit::expm(&(l * c(t, 0.0)))? * v0))
        .collect()
}

/// `max_{n ≤ n_max} ||exp(n δt L) v0 - M^n v0||` for a supplied generator `L`.
pub fn stroboscopic_residual_with(l: &CMatrix, m: &CMatrix, dt: f64, n_max: usize, v0: &CVector) -> Result<f64> {
    let times: Vec<f64> = (0..=n_max).map(|n| n as f64 * dt).collect();
    let interpolated = propagate(l, v0, &times)?;
    let mut discrete = v0.clone();
    let mut worst: f64 = 0.0;
    for (n, v) in interpolated.iter().enumerate() {
        if n > 0 {
            discrete = m * discrete;
        }
        worst = worst.max((v - &discrete).norm());
    }
    Ok(worst)
}

/// Stroboscopic residual of the exact interpolation generator.
pub fn stroboscopic_residual(series: &UpdateMapSeries, dt: f64, n_max: usize, v0: &CVector) -> Result<f64> {
    let m = series.evaluate(dt)?;
    let l = generator_exact(&m, dt)?;
    stroboscopic_residual_with(&l, &m, dt, n_max, v0)
}

/// Result of [`convergence_order_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    /// Least-squares slope of `log residual` against `log δt`.
    pub slope: f64,
    /// `||L_δt - Σ_{m ≤ K} δt^m L_m||_F` per grid point.
    pub residuals: Vec<f64>,
    /// All residuals sit at the roundoff floor, so no slope is meaningful.
    pub degenerate: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fit the decay rate of the truncation error of the order-`K` series.
pub fn convergence_order_fit(series: &UpdateMapSeries, order: usize, dt_grid: &[f64]) -> Result<OrderFit> {
    let gs = generator_series(series, order)?;
    let residuals: Vec<f64> = dt_grid
        .par_iter()
        .map(|&dt| {
            let exact = generator_exact(&series.evaluate(dt)?, dt)?;
            Ok((exact - gs.truncated(dt, order)).norm())
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = gs.coefficients[0].norm().max(1.0);
    let degenerate = residuals.iter().all(|&r| r <= 1e-12 * scale);
    let slope = if degenerate {
        f64::NAN
    } else {
        loglog_slope(dt_grid, &residuals)
    };
    Ok(OrderFit {
        slope,
        residuals,
        degenerate,
    })
}

/// First duration at which the principal logarithm stops existing.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchDivergence {
    /// Smallest offending δt, located by bisection.
    pub dt: f64,
    /// The failure reported just beyond `dt`.
    pub error: CollintError,
}

fn exists_generator(series: &UpdateMapSeries, dt: f64) -> std::result::Result<(), CollintError> {
    let m = series.evaluate(dt)?;
    generator_exact(&m, dt).map(|_| ())
}

/// Scan `(0, dt_max]` on `samples` points and bisect the first failure to
/// relative accuracy `rel_tol`. Returns `None` when every sample succeeds.
pub fn locate_branch_failure(
    series: &UpdateMapSeries,
    dt_max: f64,
    samples: usize,
    rel_tol: f64,
) -> Result<Option<BranchDivergence>> {
    let grid: Vec<f64> = (1..=samples).map(|k| dt_max * k as f64 / samples as f64).collect();
    let status: Vec<bool> = grid
        .par_iter()
        .map(|&dt| exists_generator(series, dt).is_ok())
        .collect();
    let Some(first_bad) = status.iter().position(|ok| !ok) else {
        return Ok(None);
    };
    let mut hi = grid[first_bad];
    let mut lo = if first_bad == 0 { 0.0 } else { grid[first_bad - 1] };
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= 0.0 || exists_generator(series, mid).is_ok() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let error = exists_generator(series, hi)
        .err()
        .unwrap_or(CollintError::InvalidParameter(
            "failure vanished under bisection".into(),
        ));
    Ok(Some(BranchDivergence { dt: hi, error }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_element(1, 1, c(x, 0.0))
    }

    fn toy() -> UpdateMapSeries {
        UpdateMapSeries::from_evaluator(1, "toy", |dt| scalar(1.0 - dt - 10.0 * dt * dt)).with_taylor(vec![
            scalar(-1.0),
            scalar(-10.0),
            scalar(0.0),
            scalar(0.0),
            scalar(0.0),
        ])
    }

    #[test]
    fn toy_generator_at_one_tenth() {
        let l = generator_exact(&scalar(0.8), 0.1).unwrap();
        assert_relative_eq!(l[(0, 0)].re, 0.8f64.ln() / 0.1, epsilon = 1e-13);
        assert_eq!(generator_exact(&eye(3), 0.4).unwrap(), CMatrix::zeros(3, 3));
        assert!(generator_exact(&eye(1), 0.0).is_err());
    }

    #[test]
    fn compositions_match_listing() {
        let mut c32 = weak_compositions(3, 2);
        c32.sort();
        assert_eq!(c32, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        assert_eq!(weak_compositions(2, 3).len(), 6);
        assert_eq!(weak_compositions(0, 4), vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn toy_series_coefficients() {
        let gs = generator_series(&toy(), 3).unwrap();
        let expect = [-1.0, -10.5, -31.0 / 3.0, -60.25];
        for (l, e) in gs.coefficients.iter().zip(expect) {
            assert_relative_eq!(l[(0, 0)].re, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn dp_and_composition_forms_agree() {
        let mk = |s: f64| {
            CMatrix::from_fn(3, 3, |i, j| {
                c((i as f64 + 1.3 * j as f64 + s).sin(), (s * i as f64).cos())
            })
        };
        let taylor: Vec<CMatrix> = (0..6).map(|k| mk(k as f64)).collect();
        let a = generator_series_from_taylor(&taylor, 5).unwrap();
        let b = generator_series_by_compositions(&taylor, 5).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((x - y).norm() < 1e-10 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn exponential_family_has_no_corrections() {
        let m1 = CMatrix::from_row_slice(2, 2, &[c(0.1, 0.), c(1., 0.), c(-0.4, 0.2), c(0., 0.)]);
        let taylor: Vec<CMatrix> = (1..=5).map(|k| m1.pow(k as u32) * c(1.0 / factorial(k), 0.0)).collect();
        let gs = generator_series_from_taylor(&taylor, 4).unwrap();
        assert!((&gs.coefficients[0] - &m1).norm() < 1e-15);
        for lm in &gs.coefficients[1..] {
            assert!(lm.norm() < 1e-14);
        }
    }

    #[test]
    fn insufficient_order_reported() {
        let s = UpdateMapSeries::from_taylor(1, "short", vec![scalar(1.0)]);
        assert!(matches!(
            generator_series(&s, 2),
            Err(CollintError::InsufficientOrder {
                needed: 3,
                available: 1
            })
        ));
    }

    #[test]
    fn toy_trajectory_is_geometric() {
        let l = generator_exact(&scalar(0.8), 0.1).unwrap();
        let v0 = CVector::from_element(1, c(1.0, 0.0));
        let grid: Vec<f64> = (0..6).map(|n| n as f64 * 0.1).collect();
        let traj = propagate(&l, &v0, &grid).unwrap();
        for (n, v) in traj.iter().enumerate() {
            assert_relative_eq!(v[0].re, 0.8f64.powi(n as i32), epsilon = 1e-14);
        }
    }

    #[test]
    fn toy_stroboscopic_and_truncation() {
        let v0 = CVector::from_element(1, c(1.0, 0.0));
        assert!(stroboscopic_residual(&toy(), 0.15, 20, &v0).unwrap() <= 1e-10);
        let gs = generator_series(&toy(), 1).unwrap();
        let m = toy().evaluate(0.15).unwrap();
        let r = stroboscopic_residual_with(&gs.truncated(0.15, 1), &m, 0.15, 20, &v0).unwrap();
        assert!(r > 1e-3);
    }

    #[test]
    fn toy_branch_divergence() {
        let div = locate_branch_failure(&toy(), 0.5, 50, 1e-12).unwrap().unwrap();
        let root = (-1.0 + 41f64.sqrt()) / 20.0;
        assert!((div.dt - root).abs() < 1e-9);
    }

    #[test]
    fn toy_order_fits() {
        let grid: Vec<f64> = (0..8).map(|k| 0.002 * 1.5f64.powi(k)).collect();
        for k in 0..3 {
            let fit = convergence_order_fit(&toy(), k, &grid).unwrap();
            assert!((fit.slope - (k as f64 + 1.0)).abs() < 0.15, "K={k} slope {}", fit.slope);
        }
    }

    #[test]
    fn numeric_series_matches_recursion() {
        let gs = generator_series(&toy(), 3).unwrap();
        let fd = generator_series_numeric(&toy(), 3, 0.05).unwrap();
        for (a, b) in gs.coefficients.iter().zip(&fd.coefficients) {
            assert!((a - b).norm() < 1e-6 * (1.0 + a.norm()), "{a} vs {b}");
        }
    }
}
