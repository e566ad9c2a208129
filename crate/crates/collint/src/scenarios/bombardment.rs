// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ancillary bombardment: each collision couples the system to a fresh
//! ancilla in state `ρ_A` under `H = H_S ⊗ 1 + 1 ⊗ H_A + Σ_k Q_k ⊗ R_k` for
//! a duration `δt`, after which the ancilla is traced out.
//!
//! The update map has the expansion `φ(δt) = 1 + Σ_n δt^n φ_n` with
//! `φ_n[ρ] = (1/n!) Tr_A(ad_{−iH}^n (ρ ⊗ ρ_A))`, which is evaluated here by
//! applying the nested commutators to each matrix unit of the system.

use super::{require_density, require_hermitian, TAYLOR_TERMS};
use crate::error::{CollintError, Result};
use crate::interp::{generator_series_from_taylor, UpdateMapSeries};
use crate::numkit::{self, c, commutator, kron, partial_trace_second, CMatrix};
use crate::superop::{commutator_superop, sandwich};

/// Free Hamiltonians, interaction terms `(Q_k, R_k)` and the ancilla state.
#[derive(Debug, Clone, PartialEq)]
pub struct BombardmentSpec {
    pub h_s: CMatrix,
    pub h_a: CMatrix,
    pub terms: Vec<(CMatrix, CMatrix)>,
    pub rho_a: CMatrix,
}

impl BombardmentSpec {
    /// Check Hermiticity and shapes; returns `(d_S, d_A)`.
    pub fn validate(&self) -> Result<(usize, usize)> {
        let ds = require_hermitian(&self.h_s, "H_S")?;
        let da = require_hermitian(&self.h_a, "H_A")?;
        for (k, (q, r)) in self.terms.iter().enumerate() {
            if require_hermitian(q, &format!("Q_{k}"))? != ds {
                return Err(CollintError::DimensionMismatch(format!("Q_{k} is not {ds}x{ds}")));
            }
            if require_hermitian(r, &format!("R_{k}"))? != da {
                return Err(CollintError::DimensionMismatch(format!("R_{k} is not {da}x{da}")));
            }
        }
        if require_density(&self.rho_a, "rho_A")? != da {
            return Err(CollintError::DimensionMismatch(format!("rho_A is not {da}x{da}")));
        }
        Ok((ds, da))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.h_s.nrows(), self.h_a.nrows())
    }

    /// `H_SA = Σ_k Q_k ⊗ R_k`.
    pub fn interaction(&self) -> CMatrix {
        let (ds, da) = self.dims();
        let mut h = CMatrix::zeros(ds * da, ds * da);
        for (q, r) in &self.terms {
            h += kron(q, r);
        }
        h
    }

    /// `H_S ⊗ 1 + 1 ⊗ H_A + H_SA`.
    pub fn total_hamiltonian(&self) -> CMatrix {
        let (ds, da) = self.dims();
        kron(&self.h_s, &numkit::eye(da)) + kron(&numkit::eye(ds), &self.h_a) + self.interaction()
    }

    /// `⟨X⟩ = Tr(X ρ_A)`.
    pub fn expectation(&self, x: &CMatrix) -> num_complex::Complex64 {
        (x * &self.rho_a).trace()
    }

    /// `Tr_A(X (1 ⊗ ρ_A))` for a joint operator `X`.
    pub fn ancilla_average(&self, x: &CMatrix) -> CMatrix {
        let (ds, da) = self.dims();
        let weighted = x * kron(&numkit::eye(ds), &self.rho_a);
        partial_trace_second(&weighted, ds, da).expect("shapes fixed by the spec")
    }
}

/// Superoperator of `ρ ↦ Tr_A(U (ρ ⊗ ρ_A) U†)` with `U = exp(−i H δt)`.
pub fn system_channel(spec: &BombardmentSpec, dt: f64) -> Result<CMatrix> {
    let (ds, da) = spec.validate()?;
    let u = numkit::expm(&(spec.total_hamiltonian() * c(0.0, -dt)))?;
    Ok(channel_from_unitary(&u, &spec.rho_a, ds, da))
}

fn matrix_unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut e = CMatrix::zeros(d, d);
    e[(i, j)] = c(1.0, 0.0);
    e
}

fn channel_from_unitary(u: &CMatrix, rho_a: &CMatrix, ds: usize, da: usize) -> CMatrix {
    let mut s = CMatrix::zeros(ds * ds, ds * ds);
    let ud = u.adjoint();
    for i in 0..ds {
        for j in 0..ds {
            let out = partial_trace_second(&(u * kron(&matrix_unit(ds, i, j), rho_a) * &ud), ds, da)
                .expect("shapes fixed by the spec");
            s.set_column(i * ds + j, &numkit::vec(&out));
        }
    }
    s
}

/// `[φ_1, ..., φ_count]`.
fn phi_series(spec: &BombardmentSpec, count: usize) -> Vec<CMatrix> {
    let (ds, da) = spec.dims();
    let h = spec.total_hamiltonian();
    let mut phis = vec![CMatrix::zeros(ds * ds, ds * ds); count];
    for i in 0..ds {
        for j in 0..ds {
            let mut x = kron(&matrix_unit(ds, i, j), &spec.rho_a);
            for (n, phi) in phis.iter_mut().enumerate() {
                x = commutator(&h, &x) * c(0.0, -1.0 / (n as f64 + 1.0));
                let reduced = partial_trace_second(&x, ds, da).expect("shapes fixed by the spec");
                phi.set_column(i * ds + j, &numkit::vec(&reduced));
            }
        }
    }
    phis
}

/// The family with its symbolic data.
#[derive(Debug, Clone)]
pub struct Bombardment {
    pub series: UpdateMapSeries,
    /// `[φ_1, ..., φ_K]` as superoperators.
    pub phi: Vec<CMatrix>,
    /// `[L_0, L_1, L_2]` from the φ series.
    pub generators: Vec<CMatrix>,
    /// `H^(0) = H_S + Tr_A(H_SA ρ_A)`.
    pub h0: CMatrix,
    /// `H^(1) = ½ Tr_A(i [H_A, H_SA] ρ_A)`, with `H_A` embedded as `1 ⊗ H_A`.
    pub h1: CMatrix,
    /// `D_nm = ⟨R_n R_m⟩ − ⟨R_n⟩⟨R_m⟩` over the interaction terms.
    pub d: CMatrix,
}

/// Build the channel family, its φ series and the closed-form first-order data.
pub fn ancillary_bombardment(spec: &BombardmentSpec) -> Result<Bombardment> {
    let (ds, da) = spec.validate()?;
    let phi = phi_series(spec, TAYLOR_TERMS);
    let generators = generator_series_from_taylor(&phi[..3], 2)?.coefficients;

    let h0 = &spec.h_s + spec.ancilla_average(&spec.interaction());
    let bracket = commutator(&kron(&numkit::eye(ds), &spec.h_a), &spec.interaction());
    let h1 = spec.ancilla_average(&bracket) * c(0.0, 0.5);

    let n = spec.terms.len();
    let mut d = CMatrix::zeros(n, n);
    for (a, (_, ra)) in spec.terms.iter().enumerate() {
        for (b, (_, rb)) in spec.terms.iter().enumerate() {
            d[(a, b)] = spec.expectation(&(ra * rb)) - spec.expectation(ra) * spec.expectation(rb);
        }
    }

    let h = spec.total_hamiltonian();
    let rho_a = spec.rho_a.clone();
    let series = UpdateMapSeries::from_evaluator(ds * ds, "bombardment", move |t| {
        let u = numkit::expm(&(&h * c(0.0, -t))).expect("exponential of a finite Hermitian matrix");
        channel_from_unitary(&u, &rho_a, ds, da)
    })
    .with_taylor(phi.clone());

    Ok(Bombardment {
        series,
        phi,
        generators,
        h0,
        h1,
        d,
    })
}

/// `L_1 = −i[H^(1), ·] + Σ_nm D_nm (Q_m ρ Q_n − ½{Q_n Q_m, ρ})`.
///
/// The index placement pairs `D_nm = ⟨R_n† R_m⟩ − ...` with `Q_m ρ Q_n†`,
/// the arrangement in which a positive `D` yields a completely positive
/// dissipator.
pub fn bombardment_l1_closed_form(b: &Bombardment, spec: &BombardmentSpec) -> CMatrix {
    let (ds, _) = spec.dims();
    let id = numkit::eye(ds);
    let mut l1 = commutator_superop(&b.h1);
    for (n, (qn, _)) in spec.terms.iter().enumerate() {
        for (m, (qm, _)) in spec.terms.iter().enumerate() {
            let dnm = b.d[(n, m)];
            let qnqm = qn * qm;
            let jump = sandwich(qm, qn) - (sandwich(&qnqm, &id) + sandwich(&id, &qnqm)) * c(0.5, 0.0);
            l1 += jump * dnm;
        }
    }
    l1
}

/// Truncated oscillator quadratures `q = (a + a†)/√2`, `p = i(a† − a)/√2`.
pub fn oscillator_quadratures(cutoff: usize) -> (CMatrix, CMatrix) {
    let mut a = CMatrix::zeros(cutoff, cutoff);
    for k in 1..cutoff {
        a[(k - 1, k)] = c((k as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ((&a + &ad) * c(s, 0.0), (ad - a) * c(0.0, s))
}

/// Outcome of a Fock-cutoff doubling check.
#[derive(Debug, Clone, PartialEq)]
pub struct FockConvergence<T> {
    pub cutoff: usize,
    pub value: T,
    /// Frobenius distance to the value computed at twice the cutoff.
    pub change_on_doubling: f64,
}

impl<T> FockConvergence<T> {
    pub fn converged(&self, tol: f64) -> bool {
        self.change_on_doubling <= tol
    }
}

/// Evaluate a system-sized quantity at `cutoff` and `2·cutoff`.
pub fn fock_convergence<F>(cutoff: usize, f: F) -> Result<FockConvergence<CMatrix>>
where
    F: Fn(usize) -> Result<CMatrix>,
{
    let value = f(cutoff)?;
    let doubled = f(2 * cutoff)?;
    if value.shape() != doubled.shape() {
        return Err(CollintError::DimensionMismatch(
            "quantity changes shape with the Fock cutoff".into(),
        ));
    }
    Ok(FockConvergence {
        cutoff,
        change_on_doubling: (&value - doubled).norm(),
        value,
    })
}

/// Gibbs state `e^{−βH}/Z`.
pub fn thermal_state(h: &CMatrix, beta: f64) -> Result<CMatrix> {
    require_hermitian(h, "H")?;
    let (vals, vecs) = numkit::eigh(h)?;
    let shift = vals.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = vals.iter().map(|v| (-beta * (v - shift)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut diag = CMatrix::zeros(vals.len(), vals.len());
    for (k, w) in weights.iter().enumerate() {
        diag[(k, k)] = c(w / z, 0.0);
    }
    Ok(&vecs * diag * vecs.adjoint())
}
