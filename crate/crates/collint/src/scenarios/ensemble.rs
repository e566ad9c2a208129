// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Random unitary channels `ρ ↦ Σ_k p_k U_k ρ U_k†` with `U_k = exp(−i H_k δt)`.

use nalgebra::SymmetricEigen;

use super::{require_hermitian, TAYLOR_TERMS};
use crate::error::{CollintError, Result};
use crate::interp::UpdateMapSeries;
use crate::numkit::{self, c, CMatrix, RMatrix};
use crate::superop::{commutator_superop, sandwich};

/// Probabilities `p_k` attached to Hamiltonians `H_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub probabilities: Vec<f64>,
    pub hamiltonians: Vec<CMatrix>,
}

/// A Hermitian decoherence mode `A` entering as `−(γ/2)[A, [A, ρ]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceMode {
    pub rate: f64,
    pub operator: CMatrix,
}

#[derive(Debug, Clone)]
pub struct MixedUnitary {
    pub series: UpdateMapSeries,
    /// `⟨H⟩ = Σ p_k H_k`.
    pub mean_hamiltonian: CMatrix,
    /// `Q_kl = p_k δ_kl − p_k p_l`.
    pub q: RMatrix,
    /// Orthonormal traceless Hermitian modes of the Hamiltonian covariance, rate-descending.
    pub modes: Vec<DecoherenceMode>,
    /// `L_0 = −i[⟨H⟩, ·]`.
    pub l0: CMatrix,
    /// `L_1 = ½ Σ_kl Q_kl (−i)² [H_k, [H_l, ·]]`.
    pub l1: CMatrix,
}

const PROBABILITY_TOL: f64 = 1e-12;

impl EnsembleSpec {
    pub fn validate(&self) -> Result<usize> {
        if self.probabilities.is_empty() || self.probabilities.len() != self.hamiltonians.len() {
            return Err(CollintError::InvalidProbabilities(format!(
                "{} probabilities for {} Hamiltonians",
                self.probabilities.len(),
                self.hamiltonians.len()
            )));
        }
        if let Some(p) = self.probabilities.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(CollintError::InvalidProbabilities(format!(
                "entry {p} is not a probability"
            )));
        }
        let total: f64 = self.probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(CollintError::InvalidProbabilities(format!("sum is {total}")));
        }
        let d = require_hermitian(&self.hamiltonians[0], "H_0")?;
        for (k, h) in self.hamiltonians.iter().enumerate() {
            if require_hermitian(h, &format!("H_{k}"))? != d {
                return Err(CollintError::DimensionMismatch(format!(
                    "H_{k} differs in size from H_0"
                )));
            }
        }
        Ok(d)
    }

    /// `Q_kl = p_k δ_kl − p_k p_l`.
    pub fn q_matrix(&self) -> RMatrix {
        let p = &self.probabilities;
        let n = p.len();
        RMatrix::from_fn(n, n, |k, l| if k == l { p[k] } else { 0.0 } - p[k] * p[l])
    }
}

/// Orthonormal Hermitian basis of `d × d` matrices; element 0 is `1/√d`.
fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = vec![numkit::eye(d) * c(1.0 / (d as f64).sqrt(), 0.0)];
    // Diagonal traceless part: generalized Gell-Mann diagonal matrices.
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for k in 0..l {
            m[(k, k)] = c(norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut re = CMatrix::zeros(d, d);
            re[(i, j)] = c(s, 0.0);
            re[(j, i)] = c(s, 0.0);
            let mut im = CMatrix::zeros(d, d);
            im[(i, j)] = c(0.0, -s);
            im[(j, i)] = c(0.0, s);
            out.push(re);
            out.push(im);
        }
    }
    out
}

/// Superoperator family, zeroth and first-order generators, and modes.
pub fn mixed_unitary(spec: &EnsembleSpec) -> Result<MixedUnitary> {
    let d = spec.validate()?;
    let p = spec.probabilities.clone();
    let hs = spec.hamiltonians.clone();
    let dim = d * d;

    let mut mean = CMatrix::zeros(d, d);
    for (pk, hk) in p.iter().zip(&hs) {
        mean += hk * c(*pk, 0.0);
    }

    let generators: Vec<CMatrix> = hs.iter().map(commutator_superop).collect();
    let mut taylor = vec![CMatrix::zeros(dim, dim); TAYLOR_TERMS];
    for (pk, g) in p.iter().zip(&generators) {
        let mut term = numkit::eye(dim);
        for (k, slot) in taylor.iter_mut().enumerate() {
            term = &term * g * c(1.0 / (k as f64 + 1.0), 0.0);
            *slot += &term * c(*pk, 0.0);
        }
    }

    let q = spec.q_matrix();
    let mut l1 = CMatrix::zeros(dim, dim);
    for k in 0..p.len() {
        for l in 0..p.len() {
            if q[(k, l)] != 0.0 {
                l1 += &generators[k] * &generators[l] * c(0.5 * q[(k, l)], 0.0);
            }
        }
    }

    // Covariance of the traceless Hamiltonian parts in an orthonormal
    // Hermitian operator basis, so that modes sharing an operator merge.
    let basis = hermitian_basis(d);
    let coeffs = RMatrix::from_fn(basis.len(), hs.len(), |j, k| (&basis[j] * &hs[k]).trace().re);
    let mut cov = &coeffs * &q * coeffs.transpose();
    // Drop the identity direction (basis element 0 is 1/√d).
    for j in 0..basis.len() {
        cov[(0, j)] = 0.0;
        cov[(j, 0)] = 0.0;
    }
    let eig = SymmetricEigen::new(cov);
    let scale = q.norm().max(1.0) * coeffs.norm().max(1.0).powi(2);
    let mut modes: Vec<DecoherenceMode> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > PROBABILITY_TOL * scale)
        .map(|(j, &g)| {
            let v = eig.eigenvectors.column(j);
            let mut a = CMatrix::zeros(d, d);
            for (vk, bk) in v.iter().zip(&basis) {
                a += bk * c(*vk, 0.0);
            }
            // Sign convention: the first (row-major) entry of maximal modulus is positive.
            let top = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let lead = (0..d * d)
                .map(|k| a[(k / d, k % d)])
                .find(|z| z.norm() >= top * (1.0 - 1e-9));
            if let Some(z) = lead {
                if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
                    a = -a;
                }
            }
            DecoherenceMode { rate: g, operator: a }
        })
        .collect();
    modes.sort_by(|x, y| y.rate.total_cmp(&x.rate));

    let series = UpdateMapSeries::from_evaluator(dim, "mixed_unitary", move |t| {
        let mut acc = CMatrix::zeros(dim, dim);
        for (pk, hk) in p.iter().zip(&hs) {
            let u = numkit::expm(&(hk * c(0.0, -t))).expect("exponential of a finite Hermitian matrix");
            acc += sandwich(&u, &u.adjoint()) * c(*pk, 0.0);
        }
        acc
    })
    .with_taylor(taylor);

    Ok(MixedUnitary {
        series,
        l0: commutator_superop(&mean),
        mean_hamiltonian: mean,
        q,
        modes,
        l1,
    })
}
