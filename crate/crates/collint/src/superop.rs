// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Channel algebra on `d`-dimensional density matrices.
//!
//! Superoperators act on row-major `vec(ρ)`, so `A ρ B ↦ (A ⊗ Bᵀ) vec(ρ)`
//! and the conjugation `A ρ A†` becomes `A ⊗ A*`.

use crate::error::{CollintError, Result};
use crate::numkit::{self, c, eye, kron, CMatrix, HermitianReport};

/// A linear map on `d × d` matrices stored as its `d² × d²` superoperator.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOnStates {
    dim: usize,
    superop: CMatrix,
}

/// A list of Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub operators: Vec<CMatrix>,
}

/// A generator written as `-i[H, ρ] + Σ Γ_j (F_j ρ F_j† - ½{F_j† F_j, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladForm {
    /// Traceless Hermitian Hamiltonian.
    pub hamiltonian: CMatrix,
    /// Rates, sorted descending.
    pub rates: Vec<f64>,
    /// Traceless modes, orthonormal under `Tr(A† B)`.
    pub modes: Vec<CMatrix>,
    /// All rates are at least `-tol`.
    pub completely_positive: bool,
}

/// Result of [`cptp_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    /// Hermiticity and minimum eigenvalue of the Choi matrix.
    pub choi: HermitianReport,
    /// `max_{ij} |Tr(ch(|i><j|)) - δ_ij|`.
    pub tp_residual: f64,
}

impl CptpReport {
    pub fn is_cp(&self) -> bool {
        self.choi.is_psd()
    }

    pub fn is_tp(&self) -> bool {
        self.tp_residual <= self.choi.tolerance
    }
}

/// Superoperator of `ρ ↦ A ρ B`.
pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    kron(a, &b.transpose())
}

/// Superoperator of `ρ ↦ -i[H, ρ]`.
pub fn commutator_superop(h: &CMatrix) -> CMatrix {
    let id = eye(h.nrows());
    (sandwich(h, &id) - sandwich(&id, h)) * c(0.0, -1.0)
}

/// Superoperator of the dissipator `F ρ F† - ½{F† F, ρ}`.
pub fn dissipator_superop(f: &CMatrix) -> CMatrix {
    let id = eye(f.nrows());
    let fdf = f.adjoint() * f;
    sandwich(f, &f.adjoint()) - (sandwich(&fdf, &id) + sandwich(&id, &fdf)) * c(0.5, 0.0)
}

fn realign(m: &CMatrix, d: usize) -> CMatrix {
    // J[(a,i),(b,j)] = S[(a,b),(i,j)]; the map is its own inverse.
    CMatrix::from_fn(d * d, d * d, |r, s| {
        let (a, i) = (r / d, r % d);
        let (b, j) = (s / d, s % d);
        m[(a * d + b, i * d + j)]
    })
}

impl ChannelOnStates {
    /// Wrap a `d² × d²` superoperator.
    pub fn from_superop(dim: usize, superop: CMatrix) -> Result<Self> {
        if superop.nrows() != dim * dim || superop.ncols() != dim * dim {
            return Err(CollintError::DimensionMismatch(format!(
                "superoperator is {}x{}, expected {}",
                superop.nrows(),
                superop.ncols(),
                dim * dim
            )));
        }
        Ok(Self { dim, superop })
    }

    /// The identity channel on `d × d` matrices.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            superop: eye(dim * dim),
        }
    }

    /// `Σ_k A_k ⊗ A_k*`.
    pub fn from_kraus(ops: &KrausSet) -> Result<Self> {
        let dim = ops
            .operators
            .first()
            .map(|a| a.nrows())
            .ok_or_else(|| CollintError::InvalidParameter("empty Kraus set".into()))?;
        let mut superop = CMatrix::zeros(dim * dim, dim * dim);
        for a in &ops.operators {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(CollintError::DimensionMismatch(
                    "Kraus operators must share one square shape".into(),
                ));
            }
            superop += kron(a, &a.conjugate());
        }
        Ok(Self { dim, superop })
    }

    /// Build the channel from its Choi matrix.
    pub fn from_choi(dim: usize, choi: &CMatrix) -> Result<Self> {
        if choi.nrows() != dim * dim || choi.ncols() != dim * dim {
            return Err(CollintError::DimensionMismatch("Choi matrix shape".into()));
        }
        Ok(Self {
            dim,
            superop: realign(choi, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn superop(&self) -> &CMatrix {
        &self.superop
    }

    /// Apply the map to a `d × d` matrix.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(CollintError::DimensionMismatch(format!(
                "state is {}x{}, channel acts on {}",
                rho.nrows(),
                rho.ncols(),
                self.dim
            )));
        }
        numkit::unvec(&(&self.superop * numkit::vec(rho)), self.dim, self.dim)
    }

    /// Sequential composition: `self` after `first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if self.dim != first.dim {
            return Err(CollintError::DimensionMismatch("channel dimensions".into()));
        }
        Ok(Self {
            dim: self.dim,
            superop: &self.superop * &first.superop,
        })
    }

    /// `max_{ij} |Tr(ch(|i><j|)) - δ_ij|`.
    pub fn tp_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                // Tr(ch(E_ij)) = Σ_a S[(a,a),(i,j)].
                let tr: num_complex::Complex64 = (0..d).map(|a| self.superop[(a * d + a, i * d + j)]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((tr - c(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Choi matrix `J = Σ_ij ch(|i><j|) ⊗ |i><j|`, i.e. `(ch ⊗ id)(|ψ><ψ|)` with
/// the unnormalized `|ψ> = Σ_n |n>|n>`.
pub fn choi(ch: &ChannelOnStates) -> CMatrix {
    realign(&ch.superop, ch.dim)
}

/// Default eigenvalue cutoff `1e-12 · Tr(J)` for Kraus extraction.
pub fn default_kraus_tol(j: &CMatrix) -> f64 {
    1e-12 * j.trace().re.abs().max(f64::MIN_POSITIVE)
}

/// Kraus operators `√λ_k unvec(u_k)` from the eigendecomposition of `J`.
///
/// Eigenvalues at or below `tol` are dropped; any below `-tol` is an error.
/// Operators are ordered by decreasing eigenvalue.
pub fn kraus_from_choi(j: &CMatrix, tol: f64) -> Result<KrausSet> {
    let n = numkit::ensure_square(j)?;
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(CollintError::DimensionMismatch(format!(
            "Choi matrix of size {n} is not d²"
        )));
    }
    let (values, vectors) = numkit::eigh(j)?;
    if let Some(&min) = values.first() {
        if min < -tol {
            return Err(CollintError::NotCP { min_eigenvalue: min });
        }
    }
    let mut operators = Vec::new();
    for k in (0..n).rev() {
        if values[k] <= tol {
            continue;
        }
        let u = vectors.column(k).into_owned();
        let a = numkit::unvec(&u, d, d)? * c(values[k].sqrt(), 0.0);
        operators.push(a);
    }
    Ok(KrausSet { operators })
}

impl KrausSet {
    /// `||Σ A_k† A_k - I||_F`.
    pub fn tp_residual(&self) -> f64 {
        let Some(first) = self.operators.first() else {
            return f64::INFINITY;
        };
        let d = first.nrows();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, a| acc + a.adjoint() * a);
        (sum - eye(d)).norm()
    }
}

/// Minimum Choi eigenvalue and trace-preservation residual.
pub fn cptp_check(ch: &ChannelOnStates, tol: f64) -> Result<CptpReport> {
    Ok(CptpReport {
        choi: numkit::hermitian_report(&choi(ch), tol)?,
        tp_residual: ch.tp_residual(),
    })
}

impl LindbladForm {
    /// Superoperator of the generator described by this form.
    pub fn superoperator(&self) -> CMatrix {
        let mut l = commutator_superop(&self.hamiltonian);
        for (rate, mode) in self.rates.iter().zip(&self.modes) {
            l += dissipator_superop(mode) * c(*rate, 0.0);
        }
        l
    }
}

/// Decompose a trace-annihilating, Hermiticity-preserving generator.
///
/// The traceless part of the generator's Choi matrix gives the dissipator
/// coefficient matrix; its eigenvectors are the modes. The overlap with the
/// identity gives the Hamiltonian. Modes with `|Γ| <= tol` are discarded.
pub fn lindblad_decompose(l: &CMatrix, tol: f64) -> Result<LindbladForm> {
    let n = numkit::ensure_square(l)?;
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(CollintError::DimensionMismatch(format!(
            "generator of size {n} is not d²"
        )));
    }
    let scale = 1.0 + l.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let residual = (0..n)
        .map(|col| {
            (0..d)
                .map(|a| l[(a * d + a, col)])
                .sum::<num_complex::Complex64>()
                .norm()
        })
        .fold(0.0, f64::max);
    if residual > tol.max(1e-12) * scale {
        return Err(CollintError::NotTraceAnnihilating { residual });
    }

    let j = realign(l, d);
    let omega = numkit::vec(&eye(d)) * c(1.0 / (d as f64).sqrt(), 0.0);
    let projector = eye(n) - &omega * omega.adjoint();

    // K = χ_00/(2d) I + d^{-1/2} unvec(P J ω), so that
    // L[ρ] = K ρ + ρ K† + Σ_{kl≥1} χ_kl F_k ρ F_l†.
    let w = &j * &omega;
    let chi00 = (omega.adjoint() * &w)[(0, 0)];
    let k_op = eye(d) * (chi00 / c(2.0 * d as f64, 0.0))
        + numkit::unvec(&(&projector * &w), d, d)? * c(1.0 / (d as f64).sqrt(), 0.0);
    let hamiltonian = (&k_op - k_op.adjoint()) * c(0.0, 0.5);
    let hamiltonian = (&hamiltonian + hamiltonian.adjoint()) * c(0.5, 0.0);

    let coeff = &projector * &j * &projector;
    let (values, vectors) = numkit::eigh(&coeff)?;
    let mut pairs: Vec<(f64, CMatrix)> = Vec::new();
    for k in 0..n {
        if values[k].abs() <= tol {
            continue;
        }
        let mode = numkit::unvec(&vectors.column(k).into_owned(), d, d)?;
        pairs.push((values[k], gauge_phase(mode)));
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let completely_positive = pairs.iter().all(|(g, _)| *g >= -tol);
    let (rates, modes) = pairs.into_iter().unzip();
    Ok(LindbladForm {
        hamiltonian,
        rates,
        modes,
        completely_positive,
    })
}

/// Rotate the global phase so the largest-magnitude entry is real positive.
///
/// Ties within a relative `1e-9` are broken by row-major position.
pub fn gauge_phase(m: CMatrix) -> CMatrix {
    let peak = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = m
        .transpose()
        .iter()
        .cloned()
        .find(|z| z.norm() >= peak * (1.0 - 1e-9))
        .unwrap_or(c(0.0, 0.0));
    if pivot.norm() == 0.0 {
        return m;
    }
    let phase = pivot.conj() / pivot.norm();
    m * phase
}
