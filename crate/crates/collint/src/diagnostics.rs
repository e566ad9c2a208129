// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Analysis tools for collision-model generators: unitality, first-order
//! purification, Kraus-operator scaling in the continuum limit, and
//! sensitivity to the ancilla's energy scale.

use rayon::prelude::*;

use crate::error::{CollintError, Result};
use crate::interp::{generator_exact, loglog_slope};
use crate::numkit::{self, c, commutator, kron, CMatrix};
use crate::scenarios::{ancillary_bombardment, thermal_state, BombardmentSpec};
use crate::superop::{self, gauge_phase, ChannelOnStates, LindbladForm};

/// `||L[1]||_1`, zero for generators that cannot purify any state.
pub fn unitality_defect(l: &CMatrix) -> Result<f64> {
    let n = numkit::ensure_square(l)?;
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(CollintError::DimensionMismatch(format!(
            "generator of size {n} is not d²"
        )));
    }
    let image = l * numkit::vec(&numkit::eye(d));
    Ok(numkit::trace_norm(&numkit::unvec(&image, d, d)?))
}

/// `L_1[1] = −½ Σ_nm ⟨[R_n, R_m]⟩ [Q_n, Q_m]` for a bombardment spec.
///
/// The free Hamiltonians are included as the slots `(H_S, 1)` and `(1, H_A)`;
/// they drop out because one factor of each commutator vanishes.
pub fn purification_first_order(spec: &BombardmentSpec) -> Result<CMatrix> {
    let (ds, da) = spec.validate()?;
    let mut slots: Vec<(CMatrix, CMatrix)> =
        vec![(spec.h_s.clone(), numkit::eye(da)), (numkit::eye(ds), spec.h_a.clone())];
    slots.extend(spec.terms.iter().cloned());
    let mut out = CMatrix::zeros(ds, ds);
    for (n, (qn, rn)) in slots.iter().enumerate() {
        for (qm, rm) in slots.iter().skip(n + 1) {
            // The (n, m) and (m, n) terms are equal, so sum the upper triangle twice.
            let weight = spec.expectation(&commutator(rn, rm));
            out -= commutator(qn, qm) * weight;
        }
    }
    Ok(out)
}

/// Kraus operator scaling class as `δt → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrausKind {
    /// Analytic in δt: leading power is an integer.
    First,
    /// `√δt` times an analytic operator: leading power is a half-integer.
    Second,
    Indeterminate,
}

/// One eigen-branch of the Kraus decomposition followed over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausBranch {
    /// Log-log slope of the leading singular value against δt.
    pub exponent: f64,
    pub kind: KrausKind,
    /// `lim_{δt→0} A(δt) / δt^p` with `p` the exponent rounded to the nearest half-integer.
    pub limit: CMatrix,
    /// Leading singular value at each grid point.
    pub norms: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct KrausKindReport {
    pub dt_grid: Vec<f64>,
    pub branches: Vec<KrausBranch>,
    /// Second-kind limits `A_{n,1/2}`, the continuum-limit decoherence modes.
    pub continuum_modes: Vec<CMatrix>,
    /// Interpolation generator extrapolated to `δt = 0` from the three smallest durations.
    pub continuum_generator: CMatrix,
    pub continuum_lindblad: LindbladForm,
}

impl KrausKindReport {
    /// True when no second-kind operator survives the limit.
    pub fn continuum_is_unitary(&self, tol: f64) -> bool {
        self.continuum_modes.iter().all(|a| a.norm() <= tol)
    }

    /// `||Σ_m A_{m,0} ρ A_{m,0}† − ρ||` as a superoperator, over first-kind
    /// branches with exponent 0.
    pub fn identity_reconstruction_residual(&self) -> f64 {
        let Some(first) = self.branches.first() else {
            return f64::INFINITY;
        };
        let d = first.limit.nrows();
        let mut s = CMatrix::zeros(d * d, d * d);
        for b in &self.branches {
            if b.kind == KrausKind::First && b.exponent.round() == 0.0 {
                s += superop::sandwich(&b.limit, &b.limit.adjoint());
            }
        }
        (s - numkit::eye(d * d)).norm()
    }
}

/// Classification window half-width around integers and half-integers.
pub const KIND_WINDOW: f64 = 0.1;
/// Smallest acceptable normalised overlap between consecutive branch points.
pub const MIN_BRANCH_OVERLAP: f64 = 0.5;

fn classify_exponent(p: f64) -> KrausKind {
    let twice = 2.0 * p;
    let nearest = twice.round();
    if (p - nearest / 2.0).abs() > KIND_WINDOW || !p.is_finite() {
        KrausKind::Indeterminate
    } else if (nearest as i64) % 2 == 0 {
        KrausKind::First
    } else {
        KrausKind::Second
    }
}

fn hs_overlap(a: &CMatrix, b: &CMatrix) -> num_complex::Complex64 {
    (a.adjoint() * b).trace()
}

/// Value at `x = 0` of the interpolating polynomial through all samples.
fn extrapolate_to_zero(xs: &[f64], ys: &[CMatrix]) -> CMatrix {
    let k = xs.len();
    let mut acc = CMatrix::zeros(ys[0].nrows(), ys[0].ncols());
    for i in 0..k {
        let mut w = 1.0;
        for j in 0..k {
            if i != j {
                w *= xs[j] / (xs[j] - xs[i]);
            }
        }
        acc += &ys[i] * c(w, 0.0);
    }
    acc
}

/// Follow the Kraus eigen-branches of `family` over `dt_grid` and classify them.
///
/// The grid must be ascending with at least six points; the three smallest
/// durations are used for the `δt → 0` extrapolations.
pub fn kraus_kind_classify<F>(family: F, dt_grid: &[f64]) -> Result<KrausKindReport>
where
    F: Fn(f64) -> Result<ChannelOnStates> + Sync,
{
    if dt_grid.len() < 6 {
        return Err(CollintError::InvalidParameter("need at least six grid points".into()));
    }
    if dt_grid.windows(2).any(|w| !(w[1] > w[0])) || dt_grid[0] <= 0.0 {
        return Err(CollintError::InvalidParameter(
            "grid must be positive and ascending".into(),
        ));
    }
    let channels: Vec<ChannelOnStates> = dt_grid.par_iter().map(|&dt| family(dt)).collect::<Result<_>>()?;
    let kraus: Vec<Vec<CMatrix>> = channels
        .iter()
        .map(|ch| {
            let j = superop::choi(ch);
            Ok(superop::kraus_from_choi(&j, 1e-10 * j.trace().re.abs().max(1.0))?.operators)
        })
        .collect::<Result<_>>()?;

    // Branch tracking from the smallest duration upwards.
    let count = kraus[0].len();
    let mut tracks: Vec<Vec<CMatrix>> = kraus[0].iter().map(|a| vec![a.clone()]).collect();
    for (g, ops) in kraus.iter().enumerate().skip(1) {
        if ops.len() != count {
            return Err(CollintError::BranchMatchingFailure {
                dt: dt_grid[g],
                overlap: 0.0,
            });
        }
        let mut used = vec![false; count];
        for track in tracks.iter_mut() {
            let prev = track.last().expect("tracks start non-empty");
            let mut best = (usize::MAX, 0.0, c(1.0, 0.0));
            for (k, a) in ops.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let ov = hs_overlap(prev, a);
                let score = ov.norm() / (prev.norm() * a.norm()).max(f64::MIN_POSITIVE);
                if score > best.1 {
                    best = (k, score, ov);
                }
            }
            if best.0 == usize::MAX || best.1 < MIN_BRANCH_OVERLAP {
                return Err(CollintError::BranchMatchingFailure {
                    dt: dt_grid[g],
                    overlap: best.1,
                });
            }
            used[best.0] = true;
            // Align the arbitrary eigenvector phase with the previous point.
            let phase = best.2.conj() / best.2.norm();
            track.push(&ops[best.0] * phase);
        }
    }

    let head = 3.min(dt_grid.len());
    let branches: Vec<KrausBranch> = tracks
        .into_iter()
        .map(|track| {
            let norms: Vec<f64> = track.iter().map(numkit::spectral_norm).collect();
            let exponent = loglog_slope(&dt_grid[..head], &norms[..head]);
            let kind = classify_exponent(exponent);
            let p = (2.0 * exponent).round() / 2.0;
            let scaled: Vec<CMatrix> = track[..head]
                .iter()
                .zip(dt_grid)
                .map(|(a, &dt)| a * c(dt.powf(-p), 0.0))
                .collect();
            let limit = gauge_phase(extrapolate_to_zero(&dt_grid[..head], &scaled));
            KrausBranch {
                exponent,
                kind,
                limit,
                norms,
            }
        })
        .collect();

    let continuum_modes: Vec<CMatrix> = branches
        .iter()
        .filter(|b| b.kind == KrausKind::Second && (2.0 * b.exponent).round() == 1.0)
        .map(|b| b.limit.clone())
        .collect();

    let generators: Vec<CMatrix> = channels[..head]
        .iter()
        .zip(dt_grid)
        .map(|(ch, &dt)| generator_exact(ch.superop(), dt))
        .collect::<Result<_>>()?;
    let continuum_generator = extrapolate_to_zero(&dt_grid[..head], &generators);
    let mut continuum_lindblad = superop::lindblad_decompose(&continuum_generator, 1e-6)?;
    for m in continuum_lindblad.modes.iter_mut() {
        *m = gauge_phase(m.clone());
    }

    Ok(KrausKindReport {
        dt_grid: dt_grid.to_vec(),
        branches,
        continuum_modes,
        continuum_generator,
        continuum_lindblad,
    })
}

/// Response of the generator series to rescaling the ancilla energies.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub lambda: f64,
    /// `||∂L_m/∂λ||_2` for `m = 0, 1, 2`.
    pub derivative_norms: Vec<f64>,
    /// Lowest order whose derivative exceeds the threshold.
    pub first_sensitive_order: Option<usize>,
    /// `[H_SA, 1 ⊗ H_A] = 0`, in which case the second-order dependence
    /// enters only through terms that vanish identically.
    pub commuting_interaction: bool,
}

/// Central-difference step in λ.
pub const LAMBDA_STEP: f64 = 1e-4;
const THERMAL_TOL: f64 = 1e-10;

fn generators_at(spec: &BombardmentSpec, lambda: f64) -> Result<Vec<CMatrix>> {
    let scaled = BombardmentSpec {
        h_a: &spec.h_a * c(lambda, 0.0),
        ..spec.clone()
    };
    Ok(ancillary_bombardment(&scaled)?.generators)
}

/// Derivatives of `L_0, L_1, L_2` under `H_A → λ H_A`, `β → β/λ` at `lambda`.
///
/// The co-transformation keeps the thermal `ρ_A` fixed, so only the explicit
/// `H_A` dependence of the generator is probed.
pub fn energy_scale_sensitivity(
    spec: &BombardmentSpec,
    beta: f64,
    lambda: f64,
    threshold: f64,
) -> Result<SensitivityReport> {
    let (ds, _) = spec.validate()?;
    let expected = thermal_state(&(&spec.h_a * c(lambda, 0.0)), beta / lambda)?;
    let residual = (&expected - &spec.rho_a).norm();
    if residual > THERMAL_TOL {
        return Err(CollintError::NonThermalAncilla { residual });
    }
    let h = LAMBDA_STEP;
    let plus = generators_at(spec, lambda + h)?;
    let minus = generators_at(spec, lambda - h)?;
    let derivative_norms: Vec<f64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| numkit::spectral_norm(&((p - m) * c(1.0 / (2.0 * h), 0.0))))
        .collect();
    let first_sensitive_order = derivative_norms.iter().position(|&d| d > threshold);
    let bracket = commutator(&spec.interaction(), &kron(&numkit::eye(ds), &spec.h_a));
    let scale = spec.interaction().norm() * spec.h_a.norm();
    Ok(SensitivityReport {
        lambda,
        derivative_norms,
        first_sensitive_order,
        commuting_interaction: bracket.norm() <= 1e-12 * scale.max(1.0),
    })
}

/// [`energy_scale_sensitivity`] over a grid of λ values.
pub fn energy_scale_sensitivity_grid(
    spec: &BombardmentSpec,
    beta: f64,
    lambdas: &[f64],
    threshold: f64,
) -> Result<Vec<SensitivityReport>> {
    lambdas
        .par_iter()
        .map(|&l| energy_scale_sensitivity(spec, beta, l, threshold))
        .collect()
}
