// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Four-way classification of Gaussian generators and the purity and
//! excitation-number rates.
//!
//! Every 2×2 block of `A` and `C` is expanded on `{𝟙₂, ω, X, Z}`. Writing
//! each coefficient matrix as symmetric plus antisymmetric part (over the
//! mode indices) sorts it into exactly one symplectic/active cell:
//!
//! | coefficient | symmetric part | antisymmetric part |
//! |-------------|----------------|--------------------|
//! | `A_𝟙`       | symplectic, passive | unsymplectic, active |
//! | `A_ω`       | unsymplectic, active | symplectic, passive |
//! | `A_X`, `A_Z` | symplectic, active | unsymplectic, passive |
//!
//! Diagonal blocks are single-mode, off-diagonal blocks multi-mode. `b` is
//! single-mode symplectic active displacement. For `C` the `𝟙₂` coefficient
//! of each diagonal block is taken as its traceful part (free thermal
//! noise); everything else in `C` is traceless squeezed noise.

use super::{modes_of, symplectic_form, GaussianGenerator, GaussianState};
use crate::error::{CollintError, Result};
use crate::numkit::{RMatrix, RVector};

/// Coefficient matrices of the block expansion `M_ij = I_ij 𝟙₂ + W_ij ω + X_ij X + Z_ij Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockExpansion {
    pub identity: RMatrix,
    pub omega: RMatrix,
    pub x: RMatrix,
    pub z: RMatrix,
}

impl BlockExpansion {
    /// Expand a `2N×2N` matrix.
    pub fn of(m: &RMatrix) -> Result<Self> {
        let n = modes_of(m.nrows())?;
        if m.ncols() != m.nrows() {
            return Err(CollintError::NonSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let coeff = |f: fn(f64, f64, f64, f64) -> f64| {
            RMatrix::from_fn(n, n, |i, j| {
                let b = |r: usize, s: usize| m[(2 * i + r, 2 * j + s)];
                f(b(0, 0), b(0, 1), b(1, 0), b(1, 1))
            })
        };
        Ok(Self {
            identity: coeff(|a, _, _, d| 0.5 * (a + d)),
            omega: coeff(|_, b, c, _| 0.5 * (b - c)),
            x: coeff(|_, b, c, _| 0.5 * (b + c)),
            z: coeff(|a, _, _, d| 0.5 * (a - d)),
        })
    }

    /// Rebuild the `2N×2N` matrix.
    pub fn reassemble(&self) -> RMatrix {
        assemble(&self.identity, &self.omega, &self.x, &self.z)
    }
}

fn assemble(i: &RMatrix, w: &RMatrix, x: &RMatrix, z: &RMatrix) -> RMatrix {
    let n = i.nrows();
    let mut m = RMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for s in 0..n {
            m[(2 * r, 2 * s)] = i[(r, s)] + z[(r, s)];
            m[(2 * r, 2 * s + 1)] = w[(r, s)] + x[(r, s)];
            m[(2 * r + 1, 2 * s)] = x[(r, s)] - w[(r, s)];
            m[(2 * r + 1, 2 * s + 1)] = i[(r, s)] - z[(r, s)];
        }
    }
    m
}

fn sym(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

fn antisym(m: &RMatrix) -> RMatrix {
    (m - m.transpose()) * 0.5
}

fn diagonal(m: &RMatrix) -> RMatrix {
    RMatrix::from_diagonal(&m.diagonal())
}

fn off_diagonal(m: &RMatrix) -> RMatrix {
    m - diagonal(m)
}

/// The four binary labels of a dynamics type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Labels {
    pub single_mode: bool,
    pub symplectic: bool,
    pub passive: bool,
    pub state_dependent: bool,
}

impl Labels {
    const fn new(single_mode: bool, symplectic: bool, passive: bool, state_dependent: bool) -> Self {
        Self {
            single_mode,
            symplectic,
            passive,
            state_dependent,
        }
    }
}

/// Label combinations that no Gaussian generator can realize.
pub const IMPOSSIBLE_CELLS: [Labels; 5] = [
    Labels::new(true, true, true, false),
    Labels::new(true, false, true, true),
    Labels::new(false, true, true, false),
    Labels::new(false, true, false, false),
    Labels::new(false, false, false, false),
];

/// The eleven named types of Gaussian dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynamicsKind {
    SingleModeRotation,
    SingleModeSqueezing,
    Displacement,
    SingleModeSqueezedNoise,
    AmplificationRelaxation,
    FreeThermalNoise,
    MultiModeRotation,
    MultiModeSqueezing,
    MultiModeCounterRotation,
    MultiModeSqueezedNoise,
    MultiModeCounterSqueezing,
}

impl DynamicsKind {
    /// All kinds in table order.
    pub const ALL: [DynamicsKind; 11] = [
        DynamicsKind::SingleModeRotation,
        DynamicsKind::SingleModeSqueezing,
        DynamicsKind::Displacement,
        DynamicsKind::SingleModeSqueezedNoise,
        DynamicsKind::AmplificationRelaxation,
        DynamicsKind::FreeThermalNoise,
        DynamicsKind::MultiModeRotation,
        DynamicsKind::MultiModeSqueezing,
        DynamicsKind::MultiModeCounterRotation,
        DynamicsKind::MultiModeSqueezedNoise,
        DynamicsKind::MultiModeCounterSqueezing,
    ];

    /// Display name.
    pub fn name(self) -> &'static str {
        match self {
            DynamicsKind::SingleModeRotation => "Single-mode Rotation",
            DynamicsKind::SingleModeSqueezing => "Single-mode Squeezing",
            DynamicsKind::Displacement => "Displacement",
            DynamicsKind::SingleModeSqueezedNoise => "Single-mode Squeezed Noise",
            DynamicsKind::AmplificationRelaxation => "Amplification/Relaxation",
            DynamicsKind::FreeThermalNoise => "Free Thermal Noise",
            DynamicsKind::MultiModeRotation => "Multi-mode Rotation",
            DynamicsKind::MultiModeSqueezing => "Multi-mode Squeezing",
            DynamicsKind::MultiModeCounterRotation => "Multi-mode Counter-Rotation",
            DynamicsKind::MultiModeSqueezedNoise => "Multi-mode Squeezed Noise",
            DynamicsKind::MultiModeCounterSqueezing => "Multi-mode Counter-Squeezing",
        }
    }

    /// Labels of this kind.
    pub fn labels(self) -> Labels {
        use DynamicsKind::*;
        match self {
            SingleModeRotation => Labels::new(true, true, true, true),
            SingleModeSqueezing => Labels::new(true, true, false, true),
            Displacement => Labels::new(true, true, false, false),
            SingleModeSqueezedNoise => Labels::new(true, false, true, false),
            AmplificationRelaxation => Labels::new(true, false, false, true),
            FreeThermalNoise => Labels::new(true, false, false, false),
            MultiModeRotation => Labels::new(false, true, true, true),
            MultiModeSqueezing => Labels::new(false, true, false, true),
            MultiModeCounterRotation => Labels::new(false, false, true, true),
            MultiModeSqueezedNoise => Labels::new(false, false, true, false),
            MultiModeCounterSqueezing => Labels::new(false, false, false, true),
        }
    }

    /// Kind with the given labels, `None` for the impossible cells.
    pub fn from_labels(l: Labels) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.labels() == l)
    }
}

/// One named part of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsComponent {
    pub kind: DynamicsKind,
    /// Contribution to `A`.
    pub a: RMatrix,
    /// Contribution to `b`.
    pub b: RVector,
    /// Contribution to `C`.
    pub c: RMatrix,
}

impl DynamicsComponent {
    /// Largest entry of the contribution.
    pub fn magnitude(&self) -> f64 {
        self.a.amax().max(self.b.amax()).max(self.c.amax())
    }
}

/// Result of [`classify_dynamics`].
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsClassification {
    pub a_expansion: BlockExpansion,
    pub c_expansion: BlockExpansion,
    /// `½(A − Ω⁻¹AᵀΩᵀ)`.
    pub a_passive: RMatrix,
    /// `½(A + Ω⁻¹AᵀΩᵀ)`.
    pub a_active: RMatrix,
    /// One entry per kind, in [`DynamicsKind::ALL`] order.
    pub components: Vec<DynamicsComponent>,
}

impl DynamicsClassification {
    /// Kinds whose contribution exceeds `tol`.
    pub fn present(&self, tol: f64) -> Vec<DynamicsKind> {
        self.components
            .iter()
            .filter(|c| c.magnitude() > tol)
            .map(|c| c.kind)
            .collect()
    }

    /// Sum of all components.
    pub fn reassemble(&self) -> GaussianGenerator {
        let n = self.a_passive.nrows();
        let mut g = GaussianGenerator::zero(n / 2);
        for comp in &self.components {
            g.a += &comp.a;
            g.b += &comp.b;
            g.c += &comp.c;
        }
        g
    }

    /// Contribution of one kind.
    pub fn component(&self, kind: DynamicsKind) -> &DynamicsComponent {
        self.components
            .iter()
            .find(|c| c.kind == kind)
            .expect("every kind is present")
    }
}

/// Split a generator into the eleven named dynamics types.
pub fn classify_dynamics(g: &GaussianGenerator) -> Result<DynamicsClassification> {
    let dim = g.dim();
    let n = modes_of(dim)?;
    let omega = symplectic_form(n);
    let conj = -&omega * g.a.transpose() * omega.transpose();
    let a_passive = (&g.a - &conj) * 0.5;
    let a_active = (&g.a + &conj) * 0.5;

    let ea = BlockExpansion::of(&g.a)?;
    let ec = BlockExpansion::of(&g.c)?;
    let zn = RMatrix::zeros(n, n);
    let z2 = RMatrix::zeros(dim, dim);
    let zb = RVector::zeros(dim);
    let build = |i: &RMatrix, w: &RMatrix, x: &RMatrix, z: &RMatrix| assemble(i, w, x, z);

    let (si, ai) = (sym(&ea.identity), antisym(&ea.identity));
    let (sw, aw) = (sym(&ea.omega), antisym(&ea.omega));
    let (sx, ax) = (sym(&ea.x), antisym(&ea.x));
    let (sz, az) = (sym(&ea.z), antisym(&ea.z));

    let a_part = |kind, a: RMatrix| DynamicsComponent {
        kind,
        a,
        b: zb.clone(),
        c: z2.clone(),
    };
    let c_part = |kind, c: RMatrix| DynamicsComponent {
        kind,
        a: z2.clone(),
        b: zb.clone(),
        c,
    };
    use DynamicsKind::*;
    let components = vec![
        a_part(SingleModeRotation, build(&diagonal(&si), &zn, &zn, &zn)),
        a_part(SingleModeSqueezing, build(&zn, &zn, &diagonal(&sx), &diagonal(&sz))),
        DynamicsComponent {
            kind: Displacement,
            a: z2.clone(),
            b: g.b.clone(),
            c: z2.clone(),
        },
        c_part(
            SingleModeSqueezedNoise,
            build(&zn, &diagonal(&ec.omega), &diagonal(&ec.x), &diagonal(&ec.z)),
        ),
        a_part(AmplificationRelaxation, build(&zn, &diagonal(&sw), &zn, &zn)),
        c_part(FreeThermalNoise, build(&diagonal(&ec.identity), &zn, &zn, &zn)),
        a_part(MultiModeRotation, build(&off_diagonal(&si), &aw, &zn, &zn)),
        a_part(
            MultiModeSqueezing,
            build(&zn, &zn, &off_diagonal(&sx), &off_diagonal(&sz)),
        ),
        a_part(MultiModeCounterRotation, build(&zn, &zn, &ax, &az)),
        c_part(
            MultiModeSqueezedNoise,
            build(
                &off_diagonal(&ec.identity),
                &off_diagonal(&ec.omega),
                &off_diagonal(&ec.x),
                &off_diagonal(&ec.z),
            ),
        ),
        a_part(MultiModeCounterSqueezing, build(&ai, &off_diagonal(&sw), &zn, &zn)),
    ];
    Ok(DynamicsClassification {
        a_expansion: ea,
        c_expansion: ec,
        a_passive,
        a_active,
        components,
    })
}

/// Purity `Tr ρ² = 1/√det σ` of a Gaussian state (vacuum-normalized `σ`).
pub fn purity(state: &GaussianState) -> f64 {
    1.0 / state.cov.determinant().sqrt()
}

/// `d/dt det σ = det σ · Tr(2ΩA + σ⁻¹C)`.
pub fn purity_rate(state: &GaussianState, g: &GaussianGenerator) -> Result<f64> {
    let n = state.cov.nrows();
    if g.dim() != n {
        return Err(CollintError::DimensionMismatch("state and generator differ".into()));
    }
    let det = state.cov.determinant();
    let inv = state
        .cov
        .clone()
        .try_inverse()
        .filter(|_| det.abs() > f64::EPSILON * state.cov.amax().max(1.0).powi(n as i32))
        .ok_or(CollintError::Singular { modulus: det.abs() })?;
    Ok(det * ((g.drift() * 2.0).trace() + (inv * &g.c).trace()))
}

/// Whether some state has its purity increased: `Tr(ΩA) < 0`.
pub fn purification_possible(g: &GaussianGenerator) -> bool {
    g.drift().trace() < -1e-14 * (1.0 + g.a.amax())
}

/// Rate of change of the mean total excitation number,
/// `Tr((ΩA + (ΩA)ᵀ)(σ/2 + XXᵀ)) + 2XᵀΩb + Tr C`.
pub fn excitation_rate(state: &GaussianState, g: &GaussianGenerator) -> Result<f64> {
    let n = state.cov.nrows();
    if g.dim() != n {
        return Err(CollintError::DimensionMismatch("state and generator differ".into()));
    }
    let k = g.drift();
    let second = &state.cov * 0.5 + &state.mean * state.mean.transpose();
    let omega = symplectic_form(n / 2);
    Ok(((&k + k.transpose()) * second).trace() + 2.0 * state.mean.dot(&(omega * &g.b)) + g.c.trace())
}
