// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense matrix kernels: exponential, principal logarithm, the divided
//! difference `Log(X)/(X - 1)`, Kronecker products, row-major vectorization,
//! Hermitian diagnostics and Taylor-coefficient extraction.
//!
//! All matrices are `nalgebra` dense matrices over `Complex64` (or `f64` for
//! the real wrappers). Everything here is a pure function.

use nalgebra::{DMatrix, DVector, Scalar, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CollintError, Result};

/// Complex dense matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Real dense matrix.
pub type RMatrix = DMatrix<f64>;
/// Complex column vector.
pub type CVector = DVector<Complex64>;
/// Real column vector.
pub type RVector = DVector<f64>;

/// Relative modulus below which an eigenvalue is treated as zero.
const SINGULAR_RTOL: f64 = 1e-14;
/// `|Im λ| <= BRANCH_RTOL |λ|` together with `Re λ <= 0` puts λ on the cut.
const BRANCH_RTOL: f64 = 1e-12;
/// Inverse scaling stops once `||T - I||_1` drops below this.
const LOG_SQRT_TARGET: f64 = 0.25;
/// Gauss-Legendre nodes used for `log(I + X)` after scaling.
const LOG_PADE_NODES: usize = 8;
/// `log_over_xm1` uses its power series below this distance from identity.
const LOG_SERIES_RADIUS: f64 = 0.5;

/// Shorthand for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Complex identity of size `n`.
pub fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Fail unless `m` is square.
pub fn ensure_square<T: Scalar>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(CollintError::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(CollintError::NonFinite)
    }
}

/// Maximum absolute column sum.
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Embed a real matrix into the complex field.
pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

/// Real part, entrywise.
pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

/// Largest imaginary magnitude, entrywise.
pub fn max_abs_imag(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Pauli X.
pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

/// Pauli Y.
pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

/// Pauli Z.
pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// Lowering operator `|0><1|`.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
}

// ---------------------------------------------------------------------------
// Vectorization and Kronecker products
// ---------------------------------------------------------------------------

/// Row-major stacking: `vec([[a, b], [c, d]]) = (a, b, c, d)`.
///
/// With this ordering `vec(X Y Z^T) = (X ⊗ Z) vec(Y)`.
pub fn vec<T: Scalar>(m: &DMatrix<T>) -> DVector<T> {
    DVector::from_iterator(m.nrows() * m.ncols(), m.transpose().iter().cloned())
}

/// Inverse of [`vec`].
pub fn unvec<T: Scalar>(v: &DVector<T>, rows: usize, cols: usize) -> Result<DMatrix<T>> {
    if v.len() != rows * cols {
        return Err(CollintError::DimensionMismatch(format!(
            "cannot reshape length {} into {rows}x{cols}",
            v.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, v.as_slice()))
}

/// Kronecker product `A ⊗ B` with `(A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Real Kronecker product.
pub fn kron_real(a: &RMatrix, b: &RMatrix) -> RMatrix {
    a.kronecker(b)
}

/// Partial trace over the second tensor factor of a `(da*db)`-dimensional operator.
pub fn partial_trace_second(m: &CMatrix, da: usize, db: usize) -> Result<CMatrix> {
    if m.nrows() != da * db || m.ncols() != da * db {
        return Err(CollintError::DimensionMismatch(format!(
            "operator is {}x{}, expected {}",
            m.nrows(),
            m.ncols(),
            da * db
        )));
    }
    Ok(CMatrix::from_fn(da, da, |i, j| {
        (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
    }))
}

// ---------------------------------------------------------------------------
// Hermitian diagnostics
// ---------------------------------------------------------------------------

/// Hermiticity and positivity summary of a square matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianReport {
    /// `||M - M†||_max <= tolerance * (1 + ||M||_max)`.
    pub is_hermitian: bool,
    /// Smallest eigenvalue of `(M + M†)/2`.
    pub min_eigenvalue: f64,
    /// Tolerance used for the Hermiticity decision.
    pub tolerance: f64,
}

impl HermitianReport {
    /// Hermitian and no eigenvalue below `-tolerance`.
    pub fn is_psd(&self) -> bool {
        self.is_hermitian && self.min_eigenvalue >= -self.tolerance
    }
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::try_new(herm, 1e-15, 0)
        .ok_or_else(|| CollintError::NoConvergence("Hermitian eigensolver".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Report Hermiticity and the minimum eigenvalue of the symmetrized input.
pub fn hermitian_report(m: &CMatrix, tolerance: f64) -> Result<HermitianReport> {
    ensure_square(m)?;
    let scale = 1.0 + m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let defect = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (values, _) = eigh(m)?;
    Ok(HermitianReport {
        is_hermitian: defect <= tolerance * scale,
        min_eigenvalue: values.first().copied().unwrap_or(0.0),
        tolerance,
    })
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

fn scaled(m: &CMatrix, s: f64) -> CMatrix {
    m * c(s, 0.0)
}

fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let a2 = a * a;
    let mut u = scaled(&eye(n), b[1]);
    let mut v = scaled(&eye(n), b[0]);
    let mut p = eye(n);
    for k in 1..b.len() / 2 {
        p = &p * &a2;
        u += scaled(&p, b[2 * k + 1]);
        v += scaled(&p, b[2 * k]);
    }
    (a * u, v)
}

fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let b = &PADE13;
    let n = a.nrows();
    let id = eye(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u = a * (&a6 * u_inner + scaled(&a6, b[7]) + scaled(&a4, b[5]) + scaled(&a2, b[3]) + scaled(&id, b[1]));
    let v_inner = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * v_inner + scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]) + scaled(&id, b[0]);
    (u, v)
}

/// Matrix exponential by Padé scaling and squaring.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let nrm = norm1(a);
    for &(m, theta) in THETA.iter() {
        if nrm <= theta {
            let b: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let (u, v) = pade_low(a, b);
            return pade_solve(&u, &v);
        }
    }
    let s = if nrm > THETA13 {
        (nrm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a_s = scaled(a, 2f64.powi(-s));
    let (u, v) = pade13(&a_s);
    let mut r = pade_solve(&u, &v)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn pade_solve(u: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let p = v + u;
    let q = v - u;
    q.lu().solve(&p).ok_or(CollintError::Singular { modulus: 0.0 })
}

/// Exponential of a real matrix.
pub fn expm_real(a: &RMatrix) -> Result<RMatrix> {
    Ok(real_part(&expm(&to_complex(a))?))
}

// ---------------------------------------------------------------------------
// Principal logarithm
// ---------------------------------------------------------------------------

/// Complex Schur form `M = Q T Q†` with `T` upper triangular.
pub fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    ensure_square(m)?;
    let scale = norm1(m).max(1.0);
    let decomposition = nalgebra::linalg::Schur::try_new(m.clone(), 1e-16 * scale, 100_000)
        .ok_or_else(|| CollintError::NoConvergence("complex Schur".into()))?;
    let (q, mut t) = decomposition.unpack();
    let n = t.nrows();
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = c(0.0, 0.0);
        }
    }
    Ok((q, t))
}

/// Check each eigenvalue for the singular and branch-cut conditions.
fn check_principal_domain(eigs: impl Iterator<Item = Complex64>, scale: f64) -> Result<()> {
    for lambda in eigs {
        let modulus = lambda.norm();
        if modulus <= SINGULAR_RTOL * scale {
            return Err(CollintError::Singular { modulus });
        }
        if lambda.im.abs() <= BRANCH_RTOL * modulus && lambda.re <= 0.0 {
            return Err(CollintError::BranchFailure { eigenvalue: lambda });
        }
    }
    Ok(())
}

/// Principal square root of an upper-triangular matrix (column recurrence).
fn sqrt_upper_triangular(t: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = 0.5 * (1.0 + x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `log(I + X)` for small `||X||` via the Gauss-Legendre form of the diagonal Padé approximant.
fn log1p_pade(x: &CMatrix) -> Result<CMatrix> {
    let n = x.nrows();
    let (nodes, weights) = gauss_legendre_unit(LOG_PADE_NODES);
    let mut acc = CMatrix::zeros(n, n);
    for (xj, wj) in nodes.iter().zip(weights.iter()) {
        let denom = eye(n) + scaled(x, *xj);
        let term = denom.lu().solve(x).ok_or(CollintError::Singular { modulus: 0.0 })?;
        acc += scaled(&term, *wj);
    }
    Ok(acc)
}

/// Principal matrix logarithm via complex Schur form and inverse scaling and squaring.
///
/// Fails with [`CollintError::BranchFailure`] when an eigenvalue satisfies
/// `|Im λ| <= 1e-12 |λ|` and `Re λ <= 0`, and with [`CollintError::Singular`]
/// when an eigenvalue has modulus below `1e-14 max(1, ||M||_1)`.
pub fn logm_principal(m: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let scale = norm1(m).max(1.0);
    let (q, t) = schur(m)?;
    check_principal_domain((0..n).map(|i| t[(i, i)]), scale)?;

    let id = eye(n);
    let mut root = t;
    let mut k = 0;
    while norm1(&(&root - &id)) > LOG_SQRT_TARGET {
        root = sqrt_upper_triangular(&root);
        k += 1;
        if k > 64 {
            return Err(CollintError::NoConvergence("inverse scaling".into()));
        }
    }
    let log_t = scaled(&log1p_pade(&(&root - &id))?, 2f64.powi(k));
    Ok(&q * log_t * q.adjoint())
}

/// Principal logarithm of a real matrix with no eigenvalue on `(-∞, 0]`.
pub fn logm_principal_real(m: &RMatrix) -> Result<RMatrix> {
    Ok(real_part(&logm_principal(&to_complex(m))?))
}

/// Divided difference `Log(M) (M - I)^{-1}`, continued through `M - I` singular.
///
/// Near the identity the power series `Σ (-1)^m (M - I)^m / (m + 1)` is summed.
/// Otherwise the result is read off the upper-right block of
/// `Log([[M, I], [0, I]])`, which equals the divided difference of `Log`
/// at the pair `(M, I)` and needs no inverse of `M - I`.
pub fn log_over_xm1(m: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let id = eye(n);
    let x = m - &id;
    if x.norm() < LOG_SERIES_RADIUS {
        return Ok(log_over_xm1_series(&x));
    }
    let scale = norm1(m).max(1.0);
    let (_, t) = schur(m)?;
    check_principal_domain((0..n).map(|i| t[(i, i)]), scale)?;
    let mut block = CMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(m);
    block.view_mut((0, n), (n, n)).copy_from(&id);
    block.view_mut((n, n), (n, n)).copy_from(&id);
    let log_block = logm_principal(&block)?;
    Ok(log_block.view((0, n), (n, n)).into_owned())
}

fn log_over_xm1_series(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let mut acc = eye(n);
    let mut power = eye(n);
    for k in 1..400 {
        power = &power * x;
        let coeff = if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0);
        let term = scaled(&power, coeff);
        let tn = term.norm();
        acc += term;
        if tn <= 1e-18 * acc.norm() {
            break;
        }
    }
    acc
}

/// Real wrapper of [`log_over_xm1`].
pub fn log_over_xm1_real(m: &RMatrix) -> Result<RMatrix> {
    Ok(real_part(&log_over_xm1(&to_complex(m))?))
}

// ---------------------------------------------------------------------------
// Taylor-coefficient extraction
// ---------------------------------------------------------------------------

/// Options for [`taylor_fit`].
#[derive(Debug, Clone, Copy)]
pub struct TaylorFitOptions {
    /// Half-width of the sampling interval `[-h, h]`.
    pub half_width: f64,
    /// Number of Chebyshev nodes (even, so that `t = 0` is never sampled).
    pub nodes: usize,
}

impl Default for TaylorFitOptions {
    fn default() -> Self {
        Self {
            half_width: 0.1,
            nodes: 24,
        }
    }
}

/// Taylor coefficients `c_0..c_order` at `t = 0` of a matrix-valued analytic function.
///
/// The function is sampled at Chebyshev nodes in `[-h, h]`, its Chebyshev
/// interpolant is formed, and the monomial coefficients of the interpolant
/// are returned. The origin itself is never evaluated, so functions with a
/// removable singularity at zero (such as `Log(M(t))/t`) are supported.
pub fn taylor_fit<F>(f: F, order: usize, opts: TaylorFitOptions) -> Result<Vec<CMatrix>>
where
    F: Fn(f64) -> Result<CMatrix> + Sync,
{
    let n = opts.nodes.max(order + 2);
    let n = n + (n % 2);
    let h = opts.half_width;
    let us: Vec<f64> = (0..n)
        .map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos())
        .collect();
    let samples: Vec<CMatrix> = us.par_iter().map(|&u| f(h * u)).collect::<Result<Vec<_>>>()?;
    let (rows, cols) = samples[0].shape();
    for s in &samples {
        if s.shape() != (rows, cols) {
            return Err(CollintError::DimensionMismatch("sampled function changed shape".into()));
        }
    }
    // Chebyshev coefficients a_k of the interpolant in u = t / h.
    let mut cheb = Vec::with_capacity(n);
    for k in 0..n {
        let mut a = CMatrix::zeros(rows, cols);
        for (j, s) in samples.iter().enumerate() {
            let tk = (k as f64 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos();
            a += scaled(s, tk);
        }
        let norm = if k == 0 { 1.0 } else { 2.0 } / n as f64;
        cheb.push(scaled(&a, norm));
    }
    // Coefficients at the roundoff floor only amplify noise in the
    // monomial conversion. The floor is estimated from the median of the
    // last quarter of the coefficients and everything below it is dropped.
    let peak = cheb.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut tail: Vec<f64> = cheb[3 * n / 4..].iter().map(|a| a.norm()).collect();
    tail.sort_by(f64::total_cmp);
    let floor = tail[tail.len() / 2].max(f64::EPSILON * peak);
    let keep = cheb.iter().rposition(|a| a.norm() > 4.0 * floor).map_or(1, |k| k + 1);
    cheb.truncate(keep.max(order + 1).min(n));
    // Monomial coefficients of T_k(u), truncated at degree `order`.
    let mut poly_prev = vec![0.0; order + 1];
    let mut poly_cur = vec![0.0; order + 1];
    poly_prev[0] = 1.0;
    if order >= 1 {
        poly_cur[1] = 1.0;
    }
    let mut out = vec![CMatrix::zeros(rows, cols); order + 1];
    for (k, a) in cheb.iter().enumerate() {
        let poly: &Vec<f64> = if k == 0 { &poly_prev } else { &poly_cur };
        for (j, &pj) in poly.iter().enumerate() {
            if pj != 0.0 {
                out[j] += scaled(a, pj);
            }
        }
        if k >= 1 {
            let mut next = vec![0.0; order + 1];
            for j in 0..=order {
                let shifted = if j >= 1 { 2.0 * poly_cur[j - 1] } else { 0.0 };
                next[j] = shifted - poly_prev[j];
            }
            poly_prev = std::mem::replace(&mut poly_cur, next);
        }
    }
    for (j, m) in out.iter_mut().enumerate() {
        *m = scaled(m, h.powi(-(j as i32)));
    }
    Ok(out)
}
