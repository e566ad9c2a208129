// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Frequently measured system: unitary evolution for `δt`, then a projective
//! measurement in a fixed orthonormal basis. The update acts on the vector of
//! outcome probabilities, `Λ_kl(δt) = |⟨k| e^{−iHδt} |l⟩|²`.

use super::{exponential_taylor, require_hermitian, TAYLOR_TERMS};
use crate::error::{CollintError, Result};
use crate::interp::UpdateMapSeries;
use crate::numkit::{self, c, CMatrix};

const PROJECTOR_TOL: f64 = 1e-10;

/// Measurement basis and the resulting transfer-matrix family.
#[derive(Debug, Clone)]
pub struct ZenoTransfer {
    pub series: UpdateMapSeries,
    /// Columns are the basis vectors `|k⟩`.
    pub basis: CMatrix,
}

fn basis_from_projectors(projectors: &[CMatrix], d: usize) -> Result<CMatrix> {
    if projectors.len() != d {
        return Err(CollintError::IncompleteBasis(format!(
            "{} projectors for dimension {d}",
            projectors.len()
        )));
    }
    let mut basis = CMatrix::zeros(d, d);
    let mut total = CMatrix::zeros(d, d);
    for (k, p) in projectors.iter().enumerate() {
        if p.nrows() != d || p.ncols() != d {
            return Err(CollintError::IncompleteBasis(format!(
                "projector {k} has the wrong shape"
            )));
        }
        if (p - p.adjoint()).norm() > PROJECTOR_TOL || (p * p - p).norm() > PROJECTOR_TOL {
            return Err(CollintError::IncompleteBasis(format!(
                "operator {k} is not an orthogonal projector"
            )));
        }
        if (p.trace().re - 1.0).abs() > PROJECTOR_TOL {
            return Err(CollintError::IncompleteBasis(format!("projector {k} is not rank one")));
        }
        let (_, vecs) = numkit::eigh(p)?;
        basis.set_column(k, &vecs.column(d - 1));
        total += p;
    }
    if (total - numkit::eye(d)).norm() > PROJECTOR_TOL * d as f64 {
        return Err(CollintError::IncompleteBasis(
            "projectors do not sum to the identity".into(),
        ));
    }
    Ok(basis)
}

fn transfer(u: &CMatrix) -> CMatrix {
    u.map(|z| c(z.norm_sqr(), 0.0))
}

/// Probability transfer family for Hamiltonian `h` measured in `projectors`.
pub fn zeno_transfer(h: &CMatrix, projectors: &[CMatrix]) -> Result<ZenoTransfer> {
    let d = require_hermitian(h, "H")?;
    let basis = basis_from_projectors(projectors, d)?;
    let h_basis = basis.adjoint() * h * &basis;

    let mut u = vec![numkit::eye(d)];
    u.extend(exponential_taylor(&h_basis, TAYLOR_TERMS));
    let taylor: Vec<CMatrix> = (1..=TAYLOR_TERMS)
        .map(|m| {
            let mut acc = CMatrix::zeros(d, d);
            for a in 0..=m {
                acc += u[a].zip_map(&u[m - a], |x, y| x * y.conj());
            }
            acc.map(|z| c(z.re, 0.0))
        })
        .collect();

    let hb = h_basis.clone();
    let series = UpdateMapSeries::from_evaluator(d, "zeno", move |t| {
        transfer(&numkit::expm(&(&hb * c(0.0, -t))).expect("exponential of a finite Hermitian matrix"))
    })
    .with_taylor(taylor);
    Ok(ZenoTransfer { series, basis })
}
