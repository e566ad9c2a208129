// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Affine update maps `x ↦ T x + d` and their generators `ẋ = A x + b`.
//!
//! Both are handled through the augmented matrices
//!
//! ```text
//! [[1, 0ᵀ], [d, T]]        [[0, 0ᵀ], [b, A]]
//! ```
//!
//! so composition is matrix multiplication and the flow of a generator is a
//! single matrix exponential. The qubit Bloch-vector representation (n = 3)
//! gets dedicated unit-ball checks.

use nalgebra::{DMatrix, DVector};

use crate::error::{CollintError, Result};
use crate::numkit::{self, RMatrix, RVector};

/// `x ↦ T x + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub t: RMatrix,
    pub d: RVector,
}

/// `ẋ = A x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineGenerator {
    pub a: RMatrix,
    pub b: RVector,
}

fn check_shapes(m: &RMatrix, v: &RVector) -> Result<usize> {
    let n = numkit::ensure_square(m)?;
    if v.len() != n {
        return Err(CollintError::DimensionMismatch(format!(
            "vector of length {} for {}x{} matrix",
            v.len(),
            n,
            n
        )));
    }
    if m.iter().chain(v.iter()).any(|x| !x.is_finite()) {
        return Err(CollintError::NonFinite);
    }
    Ok(n)
}

fn split_augmented(m: &RMatrix) -> Result<(RMatrix, RVector)> {
    let n1 = numkit::ensure_square(m)?;
    if n1 == 0 {
        return Err(CollintError::DimensionMismatch("empty augmented matrix".into()));
    }
    let n = n1 - 1;
    Ok((
        m.view((1, 1), (n, n)).into_owned(),
        m.view((1, 0), (n, 1)).column(0).into_owned(),
    ))
}

impl AffineMap {
    pub fn new(t: RMatrix, d: RVector) -> Result<Self> {
        check_shapes(&t, &d)?;
        Ok(Self { t, d })
    }

    /// The identity map on `R^n`.
    pub fn identity(n: usize) -> Self {
        Self {
            t: RMatrix::identity(n, n),
            d: RVector::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn apply(&self, x: &RVector) -> RVector {
        &self.t * x + &self.d
    }

    /// `self ∘ first`, i.e. apply `first` and then `self`.
    pub fn compose(&self, first: &AffineMap) -> AffineMap {
        AffineMap {
            t: &self.t * &first.t,
            d: &self.t * &first.d + &self.d,
        }
    }

    /// Read `T` and `d` back from an augmented `(n+1)×(n+1)` matrix.
    pub fn from_augmented(m: &RMatrix) -> Result<Self> {
        let (t, d) = split_augmented(m)?;
        Ok(Self { t, d })
    }
}

impl AffineGenerator {
    pub fn new(a: RMatrix, b: RVector) -> Result<Self> {
        check_shapes(&a, &b)?;
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `[[0, 0ᵀ], [b, A]]`.
    pub fn augmented(&self) -> RMatrix {
        let n = self.dim();
        let mut g = RMatrix::zeros(n + 1, n + 1);
        g.view_mut((1, 1), (n, n)).copy_from(&self.a);
        g.view_mut((1, 0), (n, 1)).copy_from(&self.b);
        g
    }

    /// Read `A` and `b` back from an augmented generator matrix.
    pub fn from_augmented(m: &RMatrix) -> Result<Self> {
        let (a, b) = split_augmented(m)?;
        Ok(Self { a, b })
    }

    /// The affine map obtained by flowing for time `t`.
    pub fn flow(&self, t: f64) -> Result<AffineMap> {
        AffineMap::from_augmented(&numkit::expm_real(&(self.augmented() * t))?)
    }

    /// `x(t)` for `x(0) = x0`.
    pub fn evolve(&self, x0: &RVector, t: f64) -> Result<RVector> {
        Ok(self.flow(t)?.apply(x0))
    }
}

/// `[[1, 0ᵀ], [d, T]]`.
pub fn augment(m: &AffineMap) -> RMatrix {
    let n = m.dim();
    let mut g = RMatrix::identity(n + 1, n + 1);
    g.view_mut((1, 1), (n, n)).copy_from(&m.t);
    g.view_mut((1, 0), (n, 1)).copy_from(&m.d);
    g
}

/// `A = Log(T)/δt`, `b = (Log(T)/(T - 1))·d/δt`.
pub fn affine_generator(m: &AffineMap, dt: f64) -> Result<AffineGenerator> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CollintError::InvalidParameter(format!(
            "duration must be positive, got {dt}"
        )));
    }
    check_shapes(&m.t, &m.d)?;
    let a = numkit::logm_principal_real(&m.t)? / dt;
    let b = numkit::log_over_xm1_real(&m.t)? * &m.d / dt;
    Ok(AffineGenerator { a, b })
}

/// Local behaviour of the flow near its fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// Every eigenvalue of `A` has negative real part.
    Attracting,
    /// Every eigenvalue has positive real part.
    Repelling,
    /// Both signs occur.
    Saddle,
    /// Some eigenvalue is purely imaginary and none is positive.
    Marginal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub point: RVector,
    pub stability: Stability,
    /// Real parts of the eigenvalues of `A`.
    pub spectrum_real: Vec<f64>,
}

const SINGULAR_RATIO: f64 = 1e-10;

/// Solve `A x* = -b`.
pub fn fixed_point(g: &AffineGenerator) -> Result<FixedPoint> {
    let n = check_shapes(&g.a, &g.b)?;
    let svd = g.a.clone().svd(false, false);
    let sigma_max = svd.singular_values.max();
    let sigma_min = if n == 0 { 0.0 } else { svd.singular_values.min() };
    if sigma_max == 0.0 || sigma_min < SINGULAR_RATIO * sigma_max {
        return Err(CollintError::NoIsolatedFixedPoint { sigma_min });
    }
    let point =
        g.a.clone()
            .lu()
            .solve(&(-&g.b))
            .ok_or(CollintError::NoIsolatedFixedPoint { sigma_min })?;

    let eig = g.a.complex_eigenvalues();
    let spectrum_real: Vec<f64> = eig.iter().map(|z| z.re).collect();
    let tol = 1e-12 * sigma_max;
    let neg = spectrum_real.iter().filter(|&&r| r < -tol).count();
    let pos = spectrum_real.iter().filter(|&&r| r > tol).count();
    let stability = if neg == n {
        Stability::Attracting
    } else if pos == n {
        Stability::Repelling
    } else if pos > 0 && neg > 0 {
        Stability::Saddle
    } else if pos > 0 {
        Stability::Repelling
    } else {
        Stability::Marginal
    };
    Ok(FixedPoint {
        point,
        stability,
        spectrum_real,
    })
}

/// The 26 unit vectors pointing at the faces, edges and corners of a cube.
pub fn cube_directions() -> Vec<RVector> {
    let mut out = Vec::with_capacity(26);
    for i in -1i32..=1 {
        for j in -1i32..=1 {
            for k in -1i32..=1 {
                if i == 0 && j == 0 && k == 0 {
                    continue;
                }
                let v = RVector::from_vec(vec![i as f64, j as f64, k as f64]);
                out.push(v.normalize());
            }
        }
    }
    out
}

fn require_bloch(n: usize) -> Result<()> {
    if n != 3 {
        return Err(CollintError::DimensionMismatch(format!(
            "Bloch-ball checks need n = 3, got {n}"
        )));
    }
    Ok(())
}

/// `max_a |T a + d| - 1` over the sampled unit directions.
///
/// Non-positive values mean the sampled surface stays inside the unit ball.
pub fn bloch_map_excess(m: &AffineMap) -> Result<f64> {
    require_bloch(m.dim())?;
    Ok(cube_directions()
        .iter()
        .map(|a| m.apply(a).norm() - 1.0)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `max_a aᵀ A a + aᵀ b` over the sampled unit directions.
///
/// The outward velocity on the sphere; it must not be positive for a
/// generator of qubit channels.
pub fn bloch_generator_excess(g: &AffineGenerator) -> Result<f64> {
    require_bloch(g.dim())?;
    Ok(cube_directions()
        .iter()
        .map(|a| a.dot(&(&g.a * a)) + a.dot(&g.b))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Largest Bloch-vector norm reached by flowing each sampled boundary point
/// and the origin along `g` on an even grid of `samples` times in `(0, t_max]`.
pub fn bloch_trajectory_max_norm(g: &AffineGenerator, t_max: f64, samples: usize) -> Result<f64> {
    require_bloch(g.dim())?;
    let mut starts = cube_directions();
    starts.push(RVector::zeros(3));
    let mut worst: f64 = 0.0;
    for k in 1..=samples {
        let flow = g.flow(t_max * k as f64 / samples as f64)?;
        for x in &starts {
            worst = worst.max(flow.apply(x).norm());
        }
    }
    Ok(worst)
}

/// Split an augmented complex generator coefficient into `(A, b)`.
///
/// Used to read affine series back from the generic linear machinery; the
/// imaginary parts must vanish up to `tol`.
pub fn generator_from_complex_augmented(m: &DMatrix<num_complex::Complex64>, tol: f64) -> Result<AffineGenerator> {
    let imag = numkit::max_abs_imag(m);
    if imag > tol {
        return Err(CollintError::InvalidParameter(format!(
            "augmented generator has imaginary part {imag:e}"
        )));
    }
    AffineGenerator::from_augmented(&numkit::real_part(m))
}

/// Real vector from a slice.
pub fn rvec(xs: &[f64]) -> RVector {
    DVector::from_column_slice(xs)
}
