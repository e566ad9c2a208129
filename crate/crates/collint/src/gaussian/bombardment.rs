// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian collision models: a system repeatedly coupled to fresh Gaussian
//! ancillas through the quadratic Hamiltonian
//!
//! ```text
//! F_SA = [[F_S, G], [Gᵀ, F_A]],   α_SA = (α_S, α_A)
//! ```
//!
//! with the system quadratures first.

use nalgebra::DMatrix;

use super::{generator_exact_signed, modes_of, symplectic_evolve, symplectic_form};
use super::{GaussianChannel, GaussianGenerator, GaussianState, QuadraticHamiltonian};
use crate::error::{CollintError, Result};
use crate::interp::generator_series_from_taylor;
use crate::numkit::{self, CMatrix, RMatrix, RVector, TaylorFitOptions};

/// Ancillary bombardment of a Gaussian system.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBombardment {
    pub f_s: RMatrix,
    pub f_a: RMatrix,
    pub g: RMatrix,
    pub alpha_s: RVector,
    pub alpha_a: RVector,
    pub ancilla: GaussianState,
}

/// Series coefficients `A_m`, `b_m`, `C_m` for `m = 0..=order`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSeries {
    pub a: Vec<RMatrix>,
    pub b: Vec<RVector>,
    pub c: Vec<RMatrix>,
}

impl GaussianSeries {
    /// Number of coefficients per family.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    /// Whether the series holds no coefficients.
    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Largest entrywise difference per order, `max(|ΔA_m|, |Δb_m|, |ΔC_m|)`.
    pub fn max_difference(&self, other: &GaussianSeries) -> Vec<f64> {
        (0..self.len().min(other.len()))
            .map(|m| {
                (&self.a[m] - &other.a[m])
                    .amax()
                    .max((&self.b[m] - &other.b[m]).amax())
                    .max((&self.c[m] - &other.c[m]).amax())
            })
            .collect()
    }

    /// Generator obtained by summing `δt^m` times each coefficient up to `upto`.
    pub fn truncated(&self, dt: f64, upto: usize) -> GaussianGenerator {
        let n = self.a[0].nrows();
        let mut g = GaussianGenerator::zero(n / 2);
        for m in 0..=upto.min(self.len() - 1) {
            let w = dt.powi(m as i32);
            g.a += &self.a[m] * w;
            g.b += &self.b[m] * w;
            g.c += &self.c[m] * w;
        }
        g
    }
}

impl GaussianBombardment {
    /// Validate block shapes, symmetry of `F_S` and `F_A`, and the ancilla state.
    pub fn new(
        f_s: RMatrix,
        f_a: RMatrix,
        g: RMatrix,
        alpha_s: RVector,
        alpha_a: RVector,
        ancilla: GaussianState,
    ) -> Result<Self> {
        let s = Self {
            f_s,
            f_a,
            g,
            alpha_s,
            alpha_a,
            ancilla,
        };
        s.validate()?;
        Ok(s)
    }

    /// Check the block structure; returns `(2N_S, 2N_A)`.
    pub fn validate(&self) -> Result<(usize, usize)> {
        let ds = QuadraticHamiltonian::new(self.f_s.clone(), self.alpha_s.clone())?.dim();
        let da = QuadraticHamiltonian::new(self.f_a.clone(), self.alpha_a.clone())?.dim();
        if self.g.shape() != (ds, da) {
            return Err(CollintError::DimensionMismatch(format!(
                "G is {}x{}, expected {ds}x{da}",
                self.g.nrows(),
                self.g.ncols()
            )));
        }
        if self.g.iter().any(|x| !x.is_finite()) {
            return Err(CollintError::NonFinite);
        }
        if self.ancilla.mean.len() != da {
            return Err(CollintError::DimensionMismatch("ancilla state size".into()));
        }
        self.ancilla.validate(super::GAUSSIAN_CP_TOL)?;
        Ok((ds, da))
    }

    fn dims(&self) -> (usize, usize) {
        (self.f_s.nrows(), self.f_a.nrows())
    }

    /// Joint Hamiltonian `½XᵀF_SA X + α_SAᵀX`.
    pub fn joint_hamiltonian(&self) -> QuadraticHamiltonian {
        let (ds, da) = self.dims();
        let mut f = RMatrix::zeros(ds + da, ds + da);
        f.view_mut((0, 0), (ds, ds)).copy_from(&self.f_s);
        f.view_mut((0, ds), (ds, da)).copy_from(&self.g);
        f.view_mut((ds, 0), (da, ds)).copy_from(&self.g.transpose());
        f.view_mut((ds, ds), (da, da)).copy_from(&self.f_a);
        let mut alpha = RVector::zeros(ds + da);
        alpha.rows_mut(0, ds).copy_from(&self.alpha_s);
        alpha.rows_mut(ds, da).copy_from(&self.alpha_a);
        QuadraticHamiltonian { f, alpha }
    }

    /// Reduced system channel after one interaction of duration `dt`.
    ///
    /// With `M = exp(ΩF_SA δt)` and joint displacement `d`, this is
    /// `T = M_SS`, `d_S + M_SA X_A` and `R = M_SA σ_A M_SAᵀ`. Negative `dt`
    /// is accepted so that the family can be sampled on both sides of zero.
    pub fn dilate_reduce(&self, dt: f64) -> Result<GaussianChannel> {
        let (ds, da) = self.dims();
        let (m, d) = symplectic_evolve(&self.joint_hamiltonian(), dt)?;
        let m_ss = m.view((0, 0), (ds, ds)).into_owned();
        let m_sa = m.view((0, ds), (ds, da)).into_owned();
        let d_s = d.rows(0, ds).into_owned();
        let r = &m_sa * &self.ancilla.cov * m_sa.transpose();
        Ok(GaussianChannel {
            t: m_ss,
            d: &m_sa * &self.ancilla.mean + d_s,
            r: (&r + r.transpose()) * 0.5,
        })
    }

    /// Exact interpolation generator at `dt`.
    pub fn generator_exact(&self, dt: f64) -> Result<GaussianGenerator> {
        super::gaussian_generator_exact(&self.dilate_reduce(dt)?, dt)
    }

    fn omegas(&self) -> (RMatrix, RMatrix) {
        let (ds, da) = self.dims();
        (symplectic_form(ds / 2), symplectic_form(da / 2))
    }

    /// Shortest time scale of the joint quadratic dynamics.
    pub fn characteristic_time(&self) -> f64 {
        let h = self.joint_hamiltonian();
        let scale =
            h.f.norm()
                .max(h.alpha.norm())
                .max(self.ancilla.mean.norm() * h.f.norm());
        1.0 / scale.max(1.0)
    }
}

/// The `b₂` coefficient exactly as it appears in the standard closed form,
/// including the term `+(1/6) Ω_S G Ω_A F_A Ω_A α_A`.
///
/// It does not match the exact generator when `α_A ≠ 0`; see
/// [`gaussian_generator_series`] for the validated form.
pub fn printed_b2(spec: &GaussianBombardment) -> RVector {
    let (os, oa) = spec.omegas();
    let g = &spec.g;
    let (fs, fa) = (&spec.f_s, &spec.f_a);
    let (xa, aa, as_) = (&spec.ancilla.mean, &spec.alpha_a, &spec.alpha_s);
    let goa = g * &oa;
    let goag = &goa * g.transpose();
    fs * &os * &goa * aa * (-1.0 / 12.0)
        + &os * &goa * fa * &oa * aa * (1.0 / 6.0)
        + fs * &os * &goa * fa * xa * (-1.0 / 12.0)
        + &goa * fa * &oa * fa * xa * (1.0 / 6.0)
        + &goag * &os * as_ * (-1.0 / 12.0)
        + &goag * &os * g * xa * (-1.0 / 12.0)
}

/// Closed-form series coefficients up to `order ≤ 2`.
///
/// `A₀ = F_S`, `A₁ = ½GΩ_AGᵀ`,
/// `A₂ = -(1/12)GΩ_AGᵀΩ_SF_S - (1/12)F_SΩ_SGΩ_AGᵀ + (1/6)GΩ_AF_AΩ_AGᵀ`,
/// `b₀ = α_S + GX_A`, `b₁ = ½GΩ_A(F_AX_A + α_A)`, `C₀ = 0`,
/// `C₁ = Ω_SGσ_AGᵀΩ_Sᵀ`, `C₂ = ½Ω_SG(Ω_AF_Aσ_A + σ_A(Ω_AF_A)ᵀ)GᵀΩ_Sᵀ`.
///
/// `b₂` is used in the form validated against the exact generator,
/// `-(1/12)F_SΩ_SGΩ_A(F_AX_A + α_A) + (1/6)GΩ_AF_AΩ_A(F_AX_A + α_A)
///  - (1/12)GΩ_AGᵀΩ_S(α_S + GX_A)`.
pub fn gaussian_generator_series(spec: &GaussianBombardment, order: usize) -> Result<GaussianSeries> {
    if order > 2 {
        return Err(CollintError::InsufficientOrder {
            needed: order + 1,
            available: 3,
        });
    }
    let (ds, _) = spec.validate()?;
    let (os, oa) = spec.omegas();
    let g = &spec.g;
    let (fs, fa) = (&spec.f_s, &spec.f_a);
    let (xa, sa) = (&spec.ancilla.mean, &spec.ancilla.cov);
    let goa = g * &oa;
    let goag = &goa * g.transpose();
    let drive_a = fa * xa + &spec.alpha_a;
    let drive_s = &spec.alpha_s + g * xa;

    let a = vec![
        fs.clone(),
        &goag * 0.5,
        &goag * &os * fs * (-1.0 / 12.0)
            + fs * &os * &goag * (-1.0 / 12.0)
            + &goa * fa * &oa * g.transpose() * (1.0 / 6.0),
    ];
    let b = vec![
        drive_s.clone(),
        &goa * &drive_a * 0.5,
        fs * &os * &goa * &drive_a * (-1.0 / 12.0)
            + &goa * fa * &oa * &drive_a * (1.0 / 6.0)
            + &goag * &os * &drive_s * (-1.0 / 12.0),
    ];
    let osg = &os * g;
    let oafa = &oa * fa;
    let c = vec![
        RMatrix::zeros(ds, ds),
        &osg * sa * osg.transpose(),
        &osg * (&oafa * sa + sa * oafa.transpose()) * osg.transpose() * 0.5,
    ];
    Ok(GaussianSeries {
        a: a.into_iter().take(order + 1).collect(),
        b: b.into_iter().take(order + 1).collect(),
        c: c.into_iter().take(order + 1).collect(),
    })
}

fn cauchy<T, F>(xs: &[T], k: usize, mut f: F) -> Option<RMatrix>
where
    F: FnMut(&T, &T) -> RMatrix,
{
    (0..=k).map(|i| f(&xs[i], &xs[k - i])).reduce(|a, b| a + b)
}

fn augmented(scalar: f64, col: &RVector, block: &RMatrix) -> CMatrix {
    let n = block.nrows();
    let mut m = RMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = scalar;
    m.view_mut((1, 0), (n, 1)).copy_from(col);
    m.view_mut((1, 1), (n, n)).copy_from(block);
    numkit::to_complex(&m)
}

/// Series coefficients to arbitrary order from the generic recursion.
///
/// Exact Taylor data of `T(δt)`, `d(δt)` and `R(δt)` are assembled from
/// powers of the joint augmented drift. `A_m`, `b_m` follow from the
/// logarithm series of `[[1, 0], [d, T]]`, and `C_m` from that of
/// `[[1, 0], [vec R, T⊗T]]`, whose logarithm carries
/// `Log(T⊗T)(T⊗T − 𝟙)⁻¹ vec R` in its first column.
pub fn gaussian_generator_series_recursive(spec: &GaussianBombardment, order: usize) -> Result<GaussianSeries> {
    let (ds, da) = spec.validate()?;
    let n = ds + da;
    let h = spec.joint_hamiltonian();
    let omega = symplectic_form(n / 2);
    let mut drift = RMatrix::zeros(n + 1, n + 1);
    drift.view_mut((1, 1), (n, n)).copy_from(&(&omega * &h.f));
    drift.view_mut((1, 0), (n, 1)).copy_from(&(&omega * &h.alpha));

    let kmax = order + 1;
    let mut powers = vec![RMatrix::identity(n + 1, n + 1)];
    for k in 1..=kmax {
        let next = &drift * &powers[k - 1] / k as f64;
        powers.push(next);
    }
    let m_ss: Vec<RMatrix> = powers.iter().map(|p| p.view((1, 1), (ds, ds)).into_owned()).collect();
    let m_sa: Vec<RMatrix> = powers
        .iter()
        .map(|p| p.view((1, 1 + ds), (ds, da)).into_owned())
        .collect();
    let d_s: Vec<RVector> = powers
        .iter()
        .zip(&m_sa)
        .map(|(p, msa)| p.view((1, 0), (ds, 1)).column(0).into_owned() + msa * &spec.ancilla.mean)
        .collect();
    let sigma = &spec.ancilla.cov;

    let mut taylor_mean = Vec::with_capacity(kmax);
    let mut taylor_cov = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        taylor_mean.push(augmented(0.0, &d_s[k], &m_ss[k]));
        let r_k = cauchy(&m_sa, k, |x, y| x * sigma * y.transpose()).expect("k ≥ 1");
        let tt_k = cauchy(&m_ss, k, numkit::kron_real).expect("k ≥ 1");
        taylor_cov.push(augmented(0.0, &numkit::vec(&r_k), &tt_k));
    }
    let l_mean = generator_series_from_taylor(&taylor_mean, order)?;
    let l_cov = generator_series_from_taylor(&taylor_cov, order)?;

    let os = symplectic_form(ds / 2);
    let os_inv = -&os;
    let mut out = GaussianSeries {
        a: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
    };
    for m in 0..=order {
        let lm = numkit::real_part(&l_mean.coefficients[m]);
        let lc = numkit::real_part(&l_cov.coefficients[m]);
        let oa_m = lm.view((1, 1), (ds, ds)).into_owned();
        let ob_m = lm.view((1, 0), (ds, 1)).column(0).into_owned();
        let vc = lc.view((1, 0), (ds * ds, 1)).column(0).into_owned();
        let c_m = numkit::unvec(&vc, ds, ds)?;
        out.a.push(&os_inv * oa_m);
        out.b.push(&os_inv * ob_m);
        out.c.push((&c_m + c_m.transpose()) * 0.5);
    }
    Ok(out)
}

fn pack(g: &GaussianGenerator) -> CMatrix {
    let n = g.dim();
    let mut m = DMatrix::<f64>::zeros(n, 2 * n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(&g.a);
    m.view_mut((0, n), (n, 1)).copy_from(&g.b);
    m.view_mut((0, n + 1), (n, n)).copy_from(&g.c);
    numkit::to_complex(&m)
}

/// Series coefficients extracted numerically from the exact generator.
///
/// The exact generator is sampled on both sides of `δt = 0` and its Taylor
/// coefficients are recovered with [`numkit::taylor_fit`].
pub fn gaussian_generator_series_numeric(spec: &GaussianBombardment, order: usize) -> Result<GaussianSeries> {
    let (ds, _) = spec.validate()?;
    modes_of(ds)?;
    let opts = TaylorFitOptions {
        half_width: 0.1 * spec.characteristic_time(),
        ..TaylorFitOptions::default()
    };
    let coeffs = numkit::taylor_fit(
        |dt| Ok(pack(&generator_exact_signed(&spec.dilate_reduce(dt)?, dt)?)),
        order,
        opts,
    )?;
    let mut out = GaussianSeries {
        a: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
    };
    for cm in coeffs {
        let r = numkit::real_part(&cm);
        out.a.push(r.view((0, 0), (ds, ds)).into_owned());
        out.b.push(r.view((0, ds), (ds, 1)).column(0).into_owned());
        out.c.push(r.view((0, ds + 1), (ds, ds)).into_owned());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{gaussian_cp_check, GAUSSIAN_CP_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
        let m = RMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        (&m + m.transpose()) * 0.5
    }

    fn random_spec(rng: &mut ChaCha8Rng, ns: usize, na: usize) -> GaussianBombardment {
        let (ds, da) = (2 * ns, 2 * na);
        let nu = rng.random_range(1.0..3.0);
        let ancilla = GaussianState::new(
            RVector::from_fn(da, |_, _| rng.random_range(-1.0..1.0)),
            RMatrix::identity(da, da) * nu,
        )
        .unwrap();
        GaussianBombardment::new(
            random_symmetric(rng, ds),
            random_symmetric(rng, da),
            RMatrix::from_fn(ds, da, |_, _| rng.random_range(-1.0..1.0)),
            RVector::from_fn(ds, |_, _| rng.random_range(-1.0..1.0)),
            RVector::from_fn(da, |_, _| rng.random_range(-1.0..1.0)),
            ancilla,
        )
        .unwrap()
    }

    #[test]
    fn decoupled_blocks_give_free_evolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut spec = random_spec(&mut rng, 1, 1);
        spec.g.fill(0.0);
        let ch = spec.dilate_reduce(0.3).unwrap();
        let (s, d) = symplectic_evolve(
            &QuadraticHamiltonian::new(spec.f_s.clone(), spec.alpha_s.clone()).unwrap(),
            0.3,
        )
        .unwrap();
        assert!((&ch.t - s).amax() < 1e-14);
        assert!((&ch.d - d).amax() < 1e-14);
        assert!(ch.r.amax() < 1e-15);
    }

    #[test]
    fn dilated_channels_are_cp() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (ns, na) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let spec = random_spec(&mut rng, ns, na);
            for dt in [0.05, 0.4, 1.3] {
                let rep = gaussian_cp_check(&spec.dilate_reduce(dt).unwrap(), GAUSSIAN_CP_TOL).unwrap();
                assert!(rep.passes(), "min eig {}", rep.min_eigenvalue);
            }
        }
    }

    #[test]
    fn scalar_coupling_noise_scales_as_g_squared() {
        let (g, nu) = (0.7, 2.5);
        let spec = GaussianBombardment::new(
            RMatrix::zeros(2, 2),
            RMatrix::zeros(2, 2),
            RMatrix::identity(2, 2) * g,
            RVector::zeros(2),
            RVector::zeros(2),
            GaussianState::thermal_single(nu).unwrap(),
        )
        .unwrap();
        let dt = 1e-3;
        let r = spec.dilate_reduce(dt).unwrap().r;
        let expected = RMatrix::identity(2, 2) * (g * g * nu * dt * dt);
        assert!((r - expected).amax() < 1e-6 * dt * dt);
        let series = gaussian_generator_series(&spec, 1).unwrap();
        assert!((&series.c[1] - RMatrix::identity(2, 2) * (g * g * nu)).amax() < 1e-14);
    }

    #[test]
    fn recursion_matches_numeric_extraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (ns, na) in [(1, 1), (2, 1), (1, 2)] {
            let spec = random_spec(&mut rng, ns, na);
            let rec = gaussian_generator_series_recursive(&spec, 3).unwrap();
            let num = gaussian_generator_series_numeric(&spec, 3).unwrap();
            for (m, e) in rec.max_difference(&num).into_iter().enumerate() {
                assert!(e < 1e-6, "order {m}: {e}");
            }
        }
    }

    #[test]
    fn closed_form_matches_recursion() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (ns, na) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let spec = random_spec(&mut rng, ns, na);
            let rec = gaussian_generator_series_recursive(&spec, 2).unwrap();
            let closed = gaussian_generator_series(&spec, 2).unwrap();
            for (m, e) in rec.max_difference(&closed).into_iter().enumerate() {
                assert!(e < 1e-12, "order {m}: {e}");
            }
        }
    }

    #[test]
    fn printed_b2_fails_with_ancilla_drive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = random_spec(&mut rng, 1, 1);
        let rec = gaussian_generator_series_recursive(&spec, 2).unwrap();
        assert!((printed_b2(&spec) - &rec.b[2]).amax() > 1e-3);
        let mut undriven = spec.clone();
        undriven.alpha_a.fill(0.0);
        let rec = gaussian_generator_series_recursive(&undriven, 2).unwrap();
        assert!((printed_b2(&undriven) - &rec.b[2]).amax() < 1e-12);
    }

    #[test]
    fn rank_one_coupling_has_traceless_drift() {
        let u = RVector::from_vec(vec![0.3, -1.1]);
        let v = RVector::from_vec(vec![0.8, 0.5]);
        let spec = GaussianBombardment::new(
            RMatrix::identity(2, 2),
            RMatrix::identity(2, 2) * 2.0,
            &u * v.transpose(),
            RVector::zeros(2),
            RVector::zeros(2),
            GaussianState::vacuum(1),
        )
        .unwrap();
        let s = gaussian_generator_series(&spec, 1).unwrap();
        assert!((symplectic_form(1) * &s.a[1]).trace().abs() < 1e-14);
    }
}
