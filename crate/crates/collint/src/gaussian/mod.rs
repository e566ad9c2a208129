// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian bosonic systems in phase space.
//!
//! Quadratures are stored mode-adjacent, `X = (q_1, p_1, ..., q_N, p_N)`, and
//! covariance matrices use the convention in which the vacuum is `σ = 𝟙`.
//! [`ordering_permutation`] converts to the `(q_1..q_N, p_1..p_N)` layout and
//! [`to_half_convention`] / [`from_half_convention`] convert to the `σ/2`
//! normalization.

mod bombardment;
mod classify;

pub use bombardment::{
    gaussian_generator_series, gaussian_generator_series_numeric, gaussian_generator_series_recursive, printed_b2,
    GaussianBombardment, GaussianSeries,
};
pub use classify::{
    classify_dynamics, excitation_rate, purification_possible, purity, purity_rate, BlockExpansion,
    DynamicsClassification, DynamicsComponent, DynamicsKind, Labels, IMPOSSIBLE_CELLS,
};

use crate::error::{CollintError, Result};
use crate::numkit::{self, c, CMatrix, RMatrix, RVector};

/// Default absolute tolerance for the Gaussian complete-positivity checks.
pub const GAUSSIAN_CP_TOL: f64 = 1e-9;

/// `Ω = ⊕ ω` with `ω = [[0, 1], [-1, 0]]`, for `n` modes.
pub fn symplectic_form(n: usize) -> RMatrix {
    let mut m = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// Permutation `P` with `X_alt = P X`, where `X_alt = (q_1..q_N, p_1..p_N)`.
///
/// Matrices transform as `P M Pᵀ`; the form becomes `P Ω Pᵀ = [[0, 𝟙], [-𝟙, 0]]`.
pub fn ordering_permutation(n: usize) -> RMatrix {
    let mut p = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        p[(k, 2 * k)] = 1.0;
        p[(n + k, 2 * k + 1)] = 1.0;
    }
    p
}

/// Convert a vacuum-normalized covariance to the `σ/2` convention.
pub fn to_half_convention(sigma: &RMatrix) -> RMatrix {
    sigma * 0.5
}

/// Convert a `σ/2`-normalized covariance back to the vacuum-normalized one.
pub fn from_half_convention(sigma_alt: &RMatrix) -> RMatrix {
    sigma_alt * 2.0
}

fn modes_of(dim: usize) -> Result<usize> {
    if dim % 2 != 0 {
        return Err(CollintError::DimensionMismatch(format!(
            "phase-space dimension {dim} is odd"
        )));
    }
    Ok(dim / 2)
}

fn check_square_len(m: &RMatrix, v: &RVector, what: &str) -> Result<usize> {
    let n = numkit::ensure_square(m)?;
    if v.len() != n {
        return Err(CollintError::DimensionMismatch(format!(
            "{what}: vector of length {} for {n}x{n} matrix",
            v.len()
        )));
    }
    if m.iter().chain(v.iter()).any(|x| !x.is_finite()) {
        return Err(CollintError::NonFinite);
    }
    modes_of(n)?;
    Ok(n)
}

fn symmetry_defect(m: &RMatrix) -> f64 {
    (m - m.transpose()).amax()
}

/// Smallest eigenvalue of the Hermitian matrix `s + i·k` (real `s` symmetric, real `k` antisymmetric).
fn min_eig_hermitian(s: &RMatrix, k: &RMatrix) -> Result<f64> {
    let m = CMatrix::from_fn(s.nrows(), s.ncols(), |i, j| c(s[(i, j)], k[(i, j)]));
    Ok(numkit::eigh(&m)?.0.first().copied().unwrap_or(0.0))
}

/// Mean vector and covariance matrix of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: RVector,
    pub cov: RMatrix,
}

impl GaussianState {
    /// Build and validate against `σ + iΩ ⪰ -tol` with [`GAUSSIAN_CP_TOL`].
    pub fn new(mean: RVector, cov: RMatrix) -> Result<Self> {
        let s = Self { mean, cov };
        s.validate(GAUSSIAN_CP_TOL)?;
        Ok(s)
    }

    /// Number of modes.
    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// Smallest eigenvalue of `σ + iΩ`.
    pub fn uncertainty_margin(&self) -> Result<f64> {
        let n = check_square_len(&self.cov, &self.mean, "state")?;
        min_eig_hermitian(&self.cov, &symplectic_form(n / 2))
    }

    /// Check symmetry of `σ` and the uncertainty relation `σ + iΩ ⪰ -tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        check_square_len(&self.cov, &self.mean, "state")?;
        let scale = 1.0 + self.cov.amax();
        if symmetry_defect(&self.cov) > tol * scale {
            return Err(CollintError::InvalidState("covariance is not symmetric".into()));
        }
        let margin = self.uncertainty_margin()?;
        if margin < -tol {
            return Err(CollintError::InvalidState(format!("σ + iΩ has eigenvalue {margin:e}")));
        }
        Ok(())
    }

    /// Vacuum of `n` modes.
    pub fn vacuum(n: usize) -> Self {
        Self {
            mean: RVector::zeros(2 * n),
            cov: RMatrix::identity(2 * n, 2 * n),
        }
    }

    /// Coherent state with the given mean and vacuum covariance.
    pub fn coherent(mean: RVector) -> Result<Self> {
        let n = modes_of(mean.len())?;
        Self::new(mean, RMatrix::identity(2 * n, 2 * n))
    }

    /// Single-mode thermal state `X = 0`, `σ = ν𝟙₂` with `ν ≥ 1`.
    pub fn thermal_single(nu: f64) -> Result<Self> {
        if !(nu >= 1.0) {
            return Err(CollintError::InvalidParameter(format!("ν = {nu} < 1")));
        }
        Self::new(RVector::zeros(2), RMatrix::identity(2, 2) * nu)
    }

    /// Single-mode squeezed state `σ = diag(σ_qq, σ_pp)` with `σ_qq σ_pp ≥ 1`.
    pub fn squeezed(sigma_qq: f64, sigma_pp: f64) -> Result<Self> {
        Self::new(
            RVector::zeros(2),
            RMatrix::from_row_slice(2, 2, &[sigma_qq, 0.0, 0.0, sigma_pp]),
        )
    }

    /// Gibbs state of `H = ½XᵀFX + αᵀX` at inverse temperature `β`.
    ///
    /// `F` must be positive definite. The mean is `-F⁻¹α` and the covariance
    /// is `coth(iβΩF/2)·iΩ`, evaluated through matrix exponentials.
    pub fn thermal(h: &QuadraticHamiltonian, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(CollintError::InvalidParameter(format!("β = {beta}")));
        }
        let n = h.dim();
        let chol =
            h.f.clone()
                .cholesky()
                .ok_or_else(|| CollintError::InvalidParameter("thermal state needs positive-definite F".into()))?;
        let mean = -chol.solve(&h.alpha);
        let omega = numkit::to_complex(&symplectic_form(n / 2));
        let y = (&omega * numkit::to_complex(&h.f)) * c(0.0, 0.5 * beta);
        let ep = numkit::expm(&y)?;
        let em = numkit::expm(&(-&y))?;
        let denom = (&ep - &em)
            .lu()
            .try_inverse()
            .ok_or(CollintError::Singular { modulus: 0.0 })?;
        let coth = (&ep + &em) * denom;
        let sigma = numkit::real_part(&(coth * omega * c(0.0, 1.0)));
        let sigma = (&sigma + sigma.transpose()) * 0.5;
        Self::new(mean, sigma)
    }
}

/// `H = ½XᵀFX + αᵀX`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    pub f: RMatrix,
    pub alpha: RVector,
}

impl QuadraticHamiltonian {
    /// Validates shapes and symmetry of `F`.
    pub fn new(f: RMatrix, alpha: RVector) -> Result<Self> {
        check_square_len(&f, &alpha, "Hamiltonian")?;
        if symmetry_defect(&f) > 1e-12 * (1.0 + f.amax()) {
            return Err(CollintError::InvalidParameter("F is not symmetric".into()));
        }
        Ok(Self { f, alpha })
    }

    /// Phase-space dimension `2N`.
    pub fn dim(&self) -> usize {
        self.f.nrows()
    }
}

/// `S = exp(ΩFt)` and `d = ((exp(ΩFt) − 𝟙)/(ΩF)) Ωα`.
///
/// Both are read off the exponential of the augmented matrix
/// `[[0, 0ᵀ], [Ωα, ΩF]]·t`, which stays well defined when `ΩF` is singular.
pub fn symplectic_evolve(h: &QuadraticHamiltonian, t: f64) -> Result<(RMatrix, RVector)> {
    let n = h.dim();
    let omega = symplectic_form(n / 2);
    let mut aug = RMatrix::zeros(n + 1, n + 1);
    aug.view_mut((1, 1), (n, n)).copy_from(&(&omega * &h.f * t));
    aug.view_mut((1, 0), (n, 1)).copy_from(&(&omega * &h.alpha * t));
    let e = numkit::expm_real(&aug)?;
    Ok((
        e.view((1, 1), (n, n)).into_owned(),
        e.view((1, 0), (n, 1)).column(0).into_owned(),
    ))
}

/// Phase-space channel `X ↦ TX + d`, `σ ↦ TσTᵀ + R`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    pub t: RMatrix,
    pub d: RVector,
    pub r: RMatrix,
}

/// Outcome of a Gaussian complete-positivity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCpReport {
    /// Smallest eigenvalue of the Hermitian test matrix.
    pub min_eigenvalue: f64,
    /// Tolerance the decision was taken at.
    pub tolerance: f64,
}

impl GaussianCpReport {
    /// `min_eigenvalue ≥ -tolerance`.
    pub fn passes(&self) -> bool {
        self.min_eigenvalue >= -self.tolerance
    }
}

impl GaussianChannel {
    /// Validates shapes and symmetry of `R`.
    pub fn new(t: RMatrix, d: RVector, r: RMatrix) -> Result<Self> {
        let n = check_square_len(&t, &d, "channel")?;
        if r.shape() != (n, n) {
            return Err(CollintError::DimensionMismatch("R must match T".into()));
        }
        if symmetry_defect(&r) > 1e-10 * (1.0 + r.amax()) {
            return Err(CollintError::InvalidParameter("R is not symmetric".into()));
        }
        Ok(Self { t, d, r })
    }

    /// Identity channel on `n` modes.
    pub fn identity(n: usize) -> Self {
        Self {
            t: RMatrix::identity(2 * n, 2 * n),
            d: RVector::zeros(2 * n),
            r: RMatrix::zeros(2 * n, 2 * n),
        }
    }

    /// Phase-space dimension `2N`.
    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    /// Apply the channel to a state.
    pub fn apply(&self, s: &GaussianState) -> Result<GaussianState> {
        if s.mean.len() != self.dim() {
            return Err(CollintError::DimensionMismatch("state and channel differ".into()));
        }
        Ok(GaussianState {
            mean: &self.t * &s.mean + &self.d,
            cov: &self.t * &s.cov * self.t.transpose() + &self.r,
        })
    }

    /// Channel obtained by applying `first`, then `self`.
    pub fn compose(&self, first: &GaussianChannel) -> GaussianChannel {
        GaussianChannel {
            t: &self.t * &first.t,
            d: &self.t * &first.d + &self.d,
            r: &self.t * &first.r * self.t.transpose() + &self.r,
        }
    }
}

/// Smallest eigenvalue of `R − i(TΩTᵀ − Ω)`, passing iff it is `≥ -tol`.
pub fn gaussian_cp_check(ch: &GaussianChannel, tol: f64) -> Result<GaussianCpReport> {
    let omega = symplectic_form(modes_of(ch.dim())?);
    let k = &ch.t * &omega * ch.t.transpose() - &omega;
    Ok(GaussianCpReport {
        min_eigenvalue: min_eig_hermitian(&ch.r, &(-k))?,
        tolerance: tol,
    })
}

/// Generator `X' = Ω(AX + b)`, `σ' = (ΩA)σ + σ(ΩA)ᵀ + C`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianGenerator {
    pub a: RMatrix,
    pub b: RVector,
    pub c: RMatrix,
}

impl GaussianGenerator {
    /// Validates shapes and symmetry of `C`.
    pub fn new(a: RMatrix, b: RVector, c: RMatrix) -> Result<Self> {
        let n = check_square_len(&a, &b, "generator")?;
        if c.shape() != (n, n) {
            return Err(CollintError::DimensionMismatch("C must match A".into()));
        }
        if symmetry_defect(&c) > 1e-10 * (1.0 + c.amax()) {
            return Err(CollintError::InvalidParameter("C is not symmetric".into()));
        }
        Ok(Self { a, b, c })
    }

    /// Zero generator on `n` modes.
    pub fn zero(n: usize) -> Self {
        Self {
            a: RMatrix::zeros(2 * n, 2 * n),
            b: RVector::zeros(2 * n),
            c: RMatrix::zeros(2 * n, 2 * n),
        }
    }

    /// Phase-space dimension `2N`.
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// The drift matrix `ΩA`.
    pub fn drift(&self) -> RMatrix {
        symplectic_form(self.dim() / 2) * &self.a
    }

    /// Channel generated over time `t`.
    ///
    /// `T` and `d` come from the augmented exponential. The noise term
    /// `R = ∫₀ᵗ e^{Ks} C e^{Kᵀs} ds` with `K = ΩA` is computed with the Van
    /// Loan block exponential of `[[-K, C], [0, Kᵀ]]·t`.
    pub fn flow(&self, t: f64) -> Result<GaussianChannel> {
        let n = self.dim();
        let omega = symplectic_form(n / 2);
        let k = &omega * &self.a;
        let mut aug = RMatrix::zeros(n + 1, n + 1);
        aug.view_mut((1, 1), (n, n)).copy_from(&(&k * t));
        aug.view_mut((1, 0), (n, 1)).copy_from(&(&omega * &self.b * t));
        let e = numkit::expm_real(&aug)?;
        let mut vl = RMatrix::zeros(2 * n, 2 * n);
        vl.view_mut((0, 0), (n, n)).copy_from(&(-&k * t));
        vl.view_mut((0, n), (n, n)).copy_from(&(&self.c * t));
        vl.view_mut((n, n), (n, n)).copy_from(&(k.transpose() * t));
        let f = numkit::expm_real(&vl)?;
        let f12 = f.view((0, n), (n, n)).into_owned();
        let f22 = f.view((n, n), (n, n)).into_owned();
        let r = f22.transpose() * f12;
        Ok(GaussianChannel {
            t: e.view((1, 1), (n, n)).into_owned(),
            d: e.view((1, 0), (n, 1)).column(0).into_owned(),
            r: (&r + r.transpose()) * 0.5,
        })
    }

    /// Time derivative of the mean and covariance of `s`.
    pub fn velocity(&self, s: &GaussianState) -> (RVector, RMatrix) {
        let omega = symplectic_form(self.dim() / 2);
        let k = &omega * &self.a;
        let dx = &k * &s.mean + &omega * &self.b;
        let ds = &k * &s.cov + &s.cov * k.transpose() + &self.c;
        (dx, ds)
    }
}

/// Smallest eigenvalue of `C − iΩ(A − Aᵀ)Ω`, passing iff it is `≥ -tol`.
pub fn generator_cp_check(g: &GaussianGenerator, tol: f64) -> Result<GaussianCpReport> {
    let omega = symplectic_form(modes_of(g.dim())?);
    let k = &omega * (&g.a - g.a.transpose()) * &omega;
    Ok(GaussianCpReport {
        min_eigenvalue: min_eig_hermitian(&g.c, &(-k))?,
        tolerance: tol,
    })
}

fn generator_exact_signed(ch: &GaussianChannel, dt: f64) -> Result<GaussianGenerator> {
    let n = ch.dim();
    let omega = symplectic_form(modes_of(n)?);
    let omega_inv = -&omega;
    let k = numkit::logm_principal_real(&ch.t)? / dt;
    let omb = numkit::log_over_xm1_real(&ch.t)? * &ch.d / dt;
    let tt = numkit::kron_real(&ch.t, &ch.t);
    let vc = numkit::log_over_xm1_real(&tt)? * numkit::vec(&ch.r) / dt;
    let cm = numkit::unvec(&vc, n, n)?;
    Ok(GaussianGenerator {
        a: &omega_inv * k,
        b: &omega_inv * omb,
        c: (&cm + cm.transpose()) * 0.5,
    })
}

/// Exact interpolation generator matching `ch` stroboscopically at step `dt`.
///
/// `ΩA = Log(T)/δt`, `Ωb = Log(T)(T − 𝟙)⁻¹d/δt` and
/// `vec C = Log(T⊗T)(T⊗T − 𝟙)⁻¹ vec R/δt`.
pub fn gaussian_generator_exact(ch: &GaussianChannel, dt: f64) -> Result<GaussianGenerator> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(CollintError::InvalidParameter(format!("δt = {dt} must be positive")));
    }
    generator_exact_signed(ch, dt)
}

/// Exact generator of the member at `dt` of a channel family.
pub fn gaussian_generator_of_family<F>(family: F, dt: f64) -> Result<GaussianGenerator>
where
    F: Fn(f64) -> Result<GaussianChannel>,
{
    gaussian_generator_exact(&family(dt)?, dt)
}
