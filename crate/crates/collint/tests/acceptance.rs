// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance harness: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use collint::affine::generator_from_complex_augmented;
use collint::diagnostics::{energy_scale_sensitivity, kraus_kind_classify, purification_first_order, KrausKind};
use collint::gaussian::{
    classify_dynamics, gaussian_cp_check, gaussian_generator_series, gaussian_generator_series_numeric, printed_b2,
    purity_rate, symplectic_evolve, symplectic_form, DynamicsKind, GaussianBombardment, GaussianGenerator,
    GaussianState, QuadraticHamiltonian, GAUSSIAN_CP_TOL, IMPOSSIBLE_CELLS,
};
use collint::interp::{
    convergence_order_fit, generator_exact, generator_series, locate_branch_failure, stroboscopic_residual,
    UpdateMapSeries,
};
use collint::numkit::{
    self, c, kron, partial_trace_second, sigma_x, sigma_y, sigma_z, CMatrix, CVector, RMatrix, RVector,
    TaylorFitOptions,
};
use collint::scenarios::{
    ancillary_bombardment, dyson_family, mixed_unitary, oscillator_quadratures, scalar_toy, system_channel,
    thermal_state, unitary_map, zeno_transfer, BombardmentSpec, DysonConvention, EnsembleSpec, PartialSwap,
};
use collint::superop::{lindblad_decompose, ChannelOnStates};
use collint::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sub-check results of one criterion.
#[derive(Default)]
struct Checks {
    items: Vec<(String, bool, String)>,
}

impl Checks {
    /// Record `value <= tol`.
    fn within(&mut self, label: &str, value: f64, tol: f64) {
        let ok = value <= tol;
        self.items
            .push((label.into(), ok, format!("{value:.3e} (tol {tol:.0e})")));
    }

    fn holds(&mut self, label: &str, ok: bool, detail: String) {
        self.items.push((label.into(), ok, detail));
    }

    fn runtime(&mut self, start: Instant, limit: Duration) {
        let e = start.elapsed();
        self.items.push((
            "runtime".into(),
            e <= limit,
            format!("{:.3} s (limit {} s)", e.as_secs_f64(), limit.as_secs()),
        ));
    }
}

fn criterion(number: usize, title: &str, body: impl FnOnce(&mut Checks) -> Result<()>) -> bool {
    let mut checks = Checks::default();
    let outcome = body(&mut checks);
    let mut ok = checks.items.iter().all(|(_, ok, _)| *ok);
    if let Err(e) = &outcome {
        ok = false;
        checks.holds("library call", false, e.to_string());
    }
    println!("{} criterion {number}: {title}", if ok { "PASS" } else { "FAIL" });
    for (label, item_ok, detail) in &checks.items {
        println!("    [{}] {label}: {detail}", if *item_ok { "ok" } else { "FAIL" });
    }
    ok
}

// ---------------------------------------------------------------------------
// Random inputs
// ---------------------------------------------------------------------------

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let m = CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&m + m.adjoint()) * c(0.5, 0.0)
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let m = CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = &m * m.adjoint();
    let tr = rho.trace();
    rho / tr
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> CVector {
    let v = CVector::from_fn(d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / c(n, 0.0)
}

fn random_bombardment(rng: &mut ChaCha8Rng, da: usize) -> BombardmentSpec {
    let terms = rng.random_range(1..=2);
    BombardmentSpec {
        h_s: random_hermitian(rng, 2),
        h_a: random_hermitian(rng, da),
        terms: (0..terms)
            .map(|_| (random_hermitian(rng, 2), random_hermitian(rng, da)))
            .collect(),
        rho_a: random_density(rng, da),
    }
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
    let m = RMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&m + m.transpose()) * 0.5
}

fn random_rvector(rng: &mut ChaCha8Rng, n: usize) -> RVector {
    RVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

fn random_gaussian_spec(rng: &mut ChaCha8Rng, ns: usize, na: usize) -> GaussianBombardment {
    let (ds, da) = (2 * ns, 2 * na);
    let nu = rng.random_range(1.0..3.0);
    let ancilla = GaussianState::new(random_rvector(rng, da), RMatrix::identity(da, da) * nu).unwrap();
    GaussianBombardment::new(
        random_symmetric(rng, ds),
        random_symmetric(rng, da),
        RMatrix::from_fn(ds, da, |_, _| rng.random_range(-1.0..1.0)),
        random_rvector(rng, ds),
        random_rvector(rng, da),
        ancilla,
    )
    .unwrap()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn traceless(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    m - numkit::eye(n) * (m.trace() / c(n as f64, 0.0))
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// Taylor coefficients in `t` of `Log(1 - b t - a t²)`, by power-series arithmetic.
fn scalar_log_coefficients(a: f64, b: f64, count: usize) -> Vec<f64> {
    let mut x = vec![0.0; count + 1];
    x[1] = b;
    if count >= 2 {
        x[2] = a;
    }
    let mut power = x.clone();
    let mut out = vec![0.0; count + 1];
    for n in 1..=count {
        for k in 0..=count {
            out[k] -= power[k] / n as f64;
        }
        let mut next = vec![0.0; count + 1];
        for i in 0..=count {
            for j in 0..=count - i {
                next[i + j] += power[i] * x[j];
            }
        }
        power = next;
    }
    out
}

fn criterion_1(ch: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let (a, b) = (10.0, 1.0);
    let series = scalar_toy(a, b)?;
    let gs = generator_series(&series, 3)?;
    let golden = [-1.0, -10.5, -31.0 / 3.0, -60.25];
    let oracle = scalar_log_coefficients(a, b, 5);
    for m in 0..4 {
        let got = gs.coefficients[m][(0, 0)];
        ch.within(&format!("L_{m} vs golden"), (got - c(golden[m], 0.0)).norm(), 1e-12);
        ch.within(
            &format!("L_{m} vs scalar-log oracle"),
            (got.re - oracle[m + 1]).abs(),
            1e-12,
        );
    }
    let l = generator_exact(&series.evaluate(0.1)?, 0.1)?;
    ch.within(
        "exact generator at dt=0.1",
        (l[(0, 0)] - c(0.8f64.ln() / 0.1, 0.0)).norm(),
        1e-12,
    );
    let root = (-b + (b * b + 4.0 * a).sqrt()) / (2.0 * a);
    let div = locate_branch_failure(&series, 0.3, 300, 1e-12)?;
    match div {
        Some(d) => ch.within(&format!("divergence at {:.6}", d.dt), (d.dt - root).abs(), 1e-6),
        None => ch.holds("divergence located", false, "no failure found".into()),
    }
    ch.runtime(start, Duration::from_secs(1));
    Ok(())
}

fn criterion_2(ch: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dts = [0.05, 0.2];
    let mut families: Vec<(&str, UpdateMapSeries, CVector)> = Vec::new();
    families.push((
        "scalar toy",
        scalar_toy(10.0, 1.0)?,
        CVector::from_element(1, c(1.0, 0.0)),
    ));
    let h = random_hermitian(&mut rng, 3);
    families.push(("unitary", unitary_map(&h)?, random_vector(&mut rng, 3)));
    let hs = [
        random_hermitian(&mut rng, 2),
        random_hermitian(&mut rng, 2),
        random_hermitian(&mut rng, 2),
    ];
    for conv in [DysonConvention::ClockReset, DysonConvention::DurationScaled] {
        families.push((
            "dyson",
            dyson_family(&hs[0], &hs[1], &hs[2], conv)?,
            random_vector(&mut rng, 2),
        ));
    }
    let ens = EnsembleSpec {
        probabilities: vec![0.3, 0.7],
        hamiltonians: vec![random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 2)],
    };
    families.push((
        "mixed unitary",
        mixed_unitary(&ens)?.series,
        numkit::vec(&random_density(&mut rng, 2)),
    ));
    families.push((
        "partial swap",
        PartialSwap::new(1.1, 0.6)?.series(),
        CVector::from_vec(vec![c(1.0, 0.0), c(0.3, 0.0), c(-0.2, 0.0), c(0.5, 0.0)]),
    ));
    let basis: Vec<CMatrix> = (0..3)
        .map(|k| {
            let mut p = CMatrix::zeros(3, 3);
            p[(k, k)] = c(1.0, 0.0);
            p
        })
        .collect();
    let hz = random_hermitian(&mut rng, 3);
    families.push((
        "zeno",
        zeno_transfer(&hz, &basis)?.series,
        CVector::from_vec(vec![c(0.5, 0.0), c(0.3, 0.0), c(0.2, 0.0)]),
    ));
    let spec = random_bombardment(&mut rng, 2);
    families.push((
        "bombardment",
        ancillary_bombardment(&spec)?.series,
        numkit::vec(&random_density(&mut rng, 2)),
    ));

    for (name, series, v0) in &families {
        let worst = dts
            .iter()
            .map(|&dt| stroboscopic_residual(series, dt, 50, v0))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        ch.within(name, worst, 1e-9);
    }

    let gspec = random_gaussian_spec(&mut rng, 1, 1);
    let s0 = GaussianState::squeezed(2.0, 0.5)?;
    let mut worst: f64 = 0.0;
    for &dt in &dts {
        let channel = gspec.dilate_reduce(dt)?;
        let g = gspec.generator_exact(dt)?;
        let mut discrete = s0.clone();
        for n in 1..=50 {
            discrete = channel.apply(&discrete)?;
            let flowed = g.flow(n as f64 * dt)?.apply(&s0)?;
            let scale = 1.0 + discrete.cov.norm();
            worst = worst
                .max((&flowed.mean - &discrete.mean).norm() / scale)
                .max((&flowed.cov - &discrete.cov).norm() / scale);
        }
    }
    ch.within("gaussian bombardment (relative)", worst, 1e-9);
    ch.runtime(start, Duration::from_secs(10));
    Ok(())
}

fn criterion_3(ch: &mut Checks) -> Result<()> {
    let toy_grid: Vec<f64> = (0..6).map(|k| 0.005 * 1.5f64.powi(k)).collect();
    let swap_grid: Vec<f64> = (0..6).map(|k| 0.02 * 1.5f64.powi(k)).collect();
    let toy = scalar_toy(10.0, 1.0)?;
    let swap = PartialSwap::new(1.0, 0.5)?.series();
    for (name, series, grid) in [("toy", &toy, &toy_grid), ("partial swap", &swap, &swap_grid)] {
        for k in 0..=2 {
            let fit = convergence_order_fit(series, k, grid)?;
            ch.within(
                &format!("{name} K={k} slope {:.3}", fit.slope),
                (fit.slope - (k as f64 + 1.0)).abs(),
                0.2,
            );
        }
    }
    Ok(())
}

fn criterion_4(ch: &mut Checks) -> Result<()> {
    let mut worst_gold: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for omega in [0.7, 1.3, -2.1] {
        for r in [0.0, 0.5, 1.0] {
            let ps = PartialSwap::new(omega, r)?;
            let gold = ps.golden();
            let gs = generator_series(&ps.series(), 2)?;
            // Independent extraction: fit the exact augmented generator on both sides of zero.
            let fd = numkit::taylor_fit(
                |t| {
                    let m = numkit::to_complex(&collint::affine::augment(&ps.map(t)));
                    Ok(numkit::logm_principal(&m)? / c(t, 0.0))
                },
                2,
                TaylorFitOptions {
                    half_width: 0.05,
                    nodes: 24,
                },
            )?;
            for m in 0..3 {
                let g = generator_from_complex_augmented(&gs.coefficients[m], 1e-12)?;
                worst_gold = worst_gold
                    .max((&g.a - &gold.a[m]).amax())
                    .max((&g.b - &gold.b[m]).amax());
                let f = generator_from_complex_augmented(&fd[m], 1e-8)?;
                worst_fd = worst_fd.max((&f.a - &gold.a[m]).amax()).max((&f.b - &gold.b[m]).amax());
            }
        }
    }
    ch.within("series vs closed forms", worst_gold, 1e-10);
    ch.within("two-sided generator fit vs closed forms", worst_fd, 1e-8);
    Ok(())
}

fn criterion_5(ch: &mut Checks) -> Result<()> {
    let mu = 1.3;
    let probs = vec![0.2, 0.5, 0.3];
    let fields = [0.4, 1.0, -0.7];
    let spec = EnsembleSpec {
        probabilities: probs.clone(),
        hamiltonians: fields.iter().map(|&b| sigma_z() * c(mu * b / 2.0, 0.0)).collect(),
    };
    let ens = mixed_unitary(&spec)?;
    let mean: f64 = probs.iter().zip(&fields).map(|(p, b)| p * b).sum();
    let var: f64 = probs.iter().zip(&fields).map(|(p, b)| p * (b - mean).powi(2)).sum();
    ch.holds(
        "single mode",
        ens.modes.len() == 1,
        format!("{} modes", ens.modes.len()),
    );
    if let Some(m) = ens.modes.first() {
        let coeff = (&m.operator * sigma_z()).trace() / c(2.0, 0.0);
        ch.within(
            "mode proportional to sigma_z",
            max_abs(&(&m.operator - sigma_z() * coeff)),
            1e-10,
        );
        ch.within(
            "rate mu^2 var(B) / 4",
            (m.rate * coeff.norm_sqr() - mu * mu * var / 4.0).abs(),
            1e-10,
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_trace: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    for _ in 0..50 {
        let n = rng.random_range(2..=5);
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let spec = EnsembleSpec {
            probabilities: p.clone(),
            hamiltonians: (0..n).map(|_| random_hermitian(&mut rng, 2)).collect(),
        };
        let q = spec.q_matrix();
        let eig = q.clone().symmetric_eigen().eigenvalues.min();
        min_eig = min_eig.min(eig);
        let p2: f64 = p.iter().map(|x| x * x).sum();
        worst_trace = worst_trace.max((q.trace() - (1.0 - p2)).abs());
    }
    ch.within("Q PSD (negated min eigenvalue)", (-min_eig).max(0.0), 1e-12);
    ch.within("Tr Q = 1 - |p|^2", worst_trace, 1e-12);
    Ok(())
}

fn criterion_6(ch: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_l1: f64 = 0.0;
    let mut worst_col: f64 = 0.0;
    for d in 2..=5 {
        for _ in 0..3 {
            let h = random_hermitian(&mut rng, d);
            let basis: Vec<CMatrix> = (0..d)
                .map(|k| {
                    let mut p = CMatrix::zeros(d, d);
                    p[(k, k)] = c(1.0, 0.0);
                    p
                })
                .collect();
            let z = zeno_transfer(&h, &basis)?;
            let taylor = z.series.taylor.as_ref().expect("zeno carries Taylor data");
            let gs = generator_series(&z.series, 0)?;
            worst_l1 = worst_l1.max(max_abs(&taylor[0])).max(max_abs(&gs.coefficients[0]));
            for dt in [0.1, 0.7, 2.5] {
                let lam = z.series.evaluate(dt)?;
                for j in 0..d {
                    let s: f64 = lam.column(j).iter().map(|x| x.re).sum();
                    worst_col = worst_col.max((s - 1.0).abs());
                }
            }
        }
    }
    ch.within("Lambda_1 = 0 (random H, d <= 5)", worst_l1, 1e-10);
    ch.within("column sums", worst_col, 1e-12);

    let w = 1.7;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVector::from_vec(vec![c(s, 0.0), c(s, 0.0)]);
    let minus = CVector::from_vec(vec![c(s, 0.0), c(-s, 0.0)]);
    let z = zeno_transfer(
        &(sigma_z() * c(w / 2.0, 0.0)),
        &[&plus * plus.adjoint(), &minus * minus.adjoint()],
    )?;
    let gs = generator_series(&z.series, 1)?;
    let mut worst: f64 = 0.0;
    for dt in [1e-3, 1e-2, 0.05] {
        let l = gs.truncated(dt, 1);
        let contrast = CVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        let rate = -(l.transpose() * &contrast)[0].re;
        worst = worst.max((rate - dt * w * w / 2.0).abs());
    }
    ch.within("qubit contrast decay rate dt w^2/2", worst, 1e-8);
    Ok(())
}

fn criterion_7(ch: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_h: f64 = 0.0;
    let mut min_d = f64::INFINITY;
    for k in 0..20 {
        let da = 2 + k % 2;
        let spec = random_bombardment(&mut rng, da);
        let b = ancillary_bombardment(&spec)?;
        let form = lindblad_decompose(&b.generators[0], 1e-9)?;
        let avg = partial_trace_second(&(spec.interaction() * kron(&numkit::eye(2), &spec.rho_a)), 2, da)?;
        let expected = &spec.h_s + avg;
        worst_h = worst_h.max(max_abs(&traceless(&(&form.hamiltonian - expected))));
        let d = &b.d;
        let herm = (d + d.adjoint()) * c(0.5, 0.0);
        min_d = min_d.min(numkit::eigh(&herm)?.0[0]);
    }
    ch.within("L_0 Hamiltonian = H_S + Tr_A(H_SA rho_A)", worst_h, 1e-10);
    ch.within("D PSD on 20 specs (negated min eigenvalue)", (-min_d).max(0.0), 1e-12);

    let spec = BombardmentSpec {
        h_s: random_hermitian(&mut rng, 2),
        h_a: random_hermitian(&mut rng, 3),
        terms: vec![(random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 3))],
        rho_a: random_density(&mut rng, 3),
    };
    ch.within(
        "tensor-product coupling: L_1[1] = 0",
        max_abs(&purification_first_order(&spec)?),
        1e-10,
    );

    let w = 0.7;
    let n = 20;
    let (q, p) = oscillator_quadratures(n);
    let mut vac = CMatrix::zeros(n, n);
    vac[(0, 0)] = c(1.0, 0.0);
    let osc = BombardmentSpec {
        h_s: CMatrix::zeros(2, 2),
        h_a: CMatrix::zeros(n, n),
        terms: vec![(sigma_x() * c(w, 0.0), q), (sigma_y() * c(w, 0.0), p)],
        rho_a: vac,
    };
    let out = purification_first_order(&osc)?;
    ch.within(
        "oscillator: L_1[1] = 2 w^2 sigma_z",
        max_abs(&(out - sigma_z() * c(2.0 * w * w, 0.0))),
        1e-6,
    );

    let j = 0.3;
    let a = [0.2, -0.4, 0.5];
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let mut rho_a = numkit::eye(2);
    let mut dir = CMatrix::zeros(2, 2);
    for (ak, s) in a.iter().zip(&paulis) {
        rho_a += s * c(*ak, 0.0);
        dir += s * c(*ak, 0.0);
    }
    let iso = BombardmentSpec {
        h_s: CMatrix::zeros(2, 2),
        h_a: CMatrix::zeros(2, 2),
        terms: paulis.iter().map(|s| (s * c(j, 0.0), s.clone())).collect(),
        rho_a: rho_a * c(0.5, 0.0),
    };
    let out = purification_first_order(&iso)?;
    // Independent oracle: second-order defect of the raw dilated channel on the identity.
    let dt = 1e-3;
    let phi = ChannelOnStates::from_superop(2, system_channel(&iso, dt)?)?;
    let defect = (phi.apply(&numkit::eye(2))? - numkit::eye(2)) / c(dt * dt, 0.0);
    ch.within(
        "isotropic: L_1[1] vs dilated-channel defect",
        max_abs(&(&defect - &out)),
        1e-5,
    );
    let ratio = (&out * &dir).trace().re / (&dir * &dir).trace().re / (j * j);
    ch.holds(
        "isotropic: direction along <sigma_A>",
        max_abs(&(&out - &dir * c(ratio * j * j, 0.0))) < 1e-10,
        format!("observed coefficient {ratio:.12} J^2"),
    );
    ch.within(
        "isotropic: coefficient 2 J^2",
        max_abs(&(out - dir * c(2.0 * j * j, 0.0))),
        1e-10,
    );
    Ok(())
}

fn xx_family(g: impl Fn(f64) -> f64 + Sync) -> impl Fn(f64) -> Result<ChannelOnStates> + Sync {
    move |dt| {
        let mut ket0 = CMatrix::zeros(2, 2);
        ket0[(0, 0)] = c(1.0, 0.0);
        let spec = BombardmentSpec {
            h_s: CMatrix::zeros(2, 2),
            h_a: CMatrix::zeros(2, 2),
            terms: vec![(sigma_x() * c(g(dt), 0.0), sigma_x())],
            rho_a: ket0,
        };
        ChannelOnStates::from_superop(2, system_channel(&spec, dt)?)
    }
}

fn criterion_8(ch: &mut Checks) -> Result<()> {
    let grid: Vec<f64> = (0..8).map(|k| 1e-4 * 2f64.powi(k)).collect();
    let fixed = kraus_kind_classify(xx_family(|_| 1.3), &grid)?;
    ch.holds(
        "fixed coupling: all first kind",
        fixed.branches.iter().all(|b| b.kind == KrausKind::First),
        format!(
            "exponents {:?}",
            fixed
                .branches
                .iter()
                .map(|b| (b.exponent * 1e3).round() / 1e3)
                .collect::<Vec<_>>()
        ),
    );
    ch.holds(
        "fixed coupling: unitary limit",
        fixed.continuum_is_unitary(1e-10),
        String::new(),
    );

    let kappa = 0.8;
    let tuned = kraus_kind_classify(xx_family(move |dt| (kappa / dt).sqrt()), &grid)?;
    let second: Vec<_> = tuned.branches.iter().filter(|b| b.kind == KrausKind::Second).collect();
    ch.holds(
        "fine-tuned: one second-kind operator",
        second.len() == 1,
        format!("{}", second.len()),
    );
    if let Some(b) = second.first() {
        ch.within(
            "A_1/2 = sqrt(kappa) sigma_x",
            max_abs(&(&b.limit - sigma_x() * c(kappa.sqrt(), 0.0))),
            1e-3,
        );
    }
    let modes = &tuned.continuum_lindblad.modes;
    ch.holds(
        "fine-tuned: one continuum mode",
        modes.len() == 1,
        format!("{}", modes.len()),
    );
    if let Some(m) = modes.first() {
        let coeff = (m * sigma_x()).trace() / c(2.0, 0.0);
        ch.within(
            "continuum mode proportional to sigma_x",
            max_abs(&(m - sigma_x() * coeff)),
            1e-3,
        );
    }
    Ok(())
}

fn criterion_9(ch: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut worst01, mut least2) = (0.0f64, f64::INFINITY);
    let mut orders_ok = true;
    for _ in 0..10 {
        let h_a = random_hermitian(&mut rng, 2);
        let beta = rng.random_range(0.3..2.0);
        let spec = BombardmentSpec {
            h_s: random_hermitian(&mut rng, 2),
            h_a: h_a.clone(),
            terms: vec![
                (random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 2)),
                (random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 2)),
            ],
            rho_a: thermal_state(&h_a, beta)?,
        };
        let rep = energy_scale_sensitivity(&spec, beta, 1.0, 1e-6)?;
        worst01 = worst01.max(rep.derivative_norms[0]).max(rep.derivative_norms[1]);
        least2 = least2.min(rep.derivative_norms[2]);
        orders_ok &= rep.first_sensitive_order == Some(2);
    }
    ch.within("d/dlambda of L_0, L_1", worst01, 1e-8);
    ch.holds(
        "d/dlambda of L_2 exceeds 1e-4",
        least2 > 1e-4,
        format!("min {least2:.3e}"),
    );
    ch.holds("first sensitive order = 2", orders_ok, String::new());
    Ok(())
}

fn criterion_10(ch: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=3);
        let h = QuadraticHamiltonian::new(random_symmetric(&mut rng, 2 * n), RVector::zeros(2 * n))?;
        let (s, _) = symplectic_evolve(&h, rng.random_range(0.0..2.0))?;
        let o = symplectic_form(n);
        worst = worst.max((&s * &o * s.transpose() - &o).amax());
    }
    ch.within("S Omega S^T = Omega (1000 random F)", worst, 1e-10);

    let mut min_eig = f64::INFINITY;
    for (ns, na) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
        for _ in 0..4 {
            let spec = random_gaussian_spec(&mut rng, ns, na);
            for dt in [0.05, 0.3, 1.0, 2.5] {
                min_eig = min_eig.min(gaussian_cp_check(&spec.dilate_reduce(dt)?, GAUSSIAN_CP_TOL)?.min_eigenvalue);
            }
        }
    }
    ch.holds(
        "dilated channels pass CP check",
        min_eig >= -GAUSSIAN_CP_TOL,
        format!("min eigenvalue {min_eig:.3e}"),
    );

    let (mut worst_fd, mut printed_dev) = (0.0f64, 0.0f64);
    for (ns, na) in [(1, 1), (2, 1), (1, 2)] {
        let spec = random_gaussian_spec(&mut rng, ns, na);
        let closed = gaussian_generator_series(&spec, 2)?;
        let fd = gaussian_generator_series_numeric(&spec, 2)?;
        worst_fd = worst_fd.max(closed.max_difference(&fd).into_iter().fold(0.0, f64::max));
        printed_dev = printed_dev.max((printed_b2(&spec) - &fd.b[2]).amax());
    }
    ch.within(
        "A_0..C_2 vs finite-difference extraction (corrected b_2)",
        worst_fd,
        1e-6,
    );
    ch.holds(
        "printed b_2 deviates from extraction when the ancilla is driven",
        printed_dev > 1e-6,
        format!("{printed_dev:.3e}"),
    );

    let u = random_rvector(&mut rng, 2);
    let v = random_rvector(&mut rng, 2);
    let rank_one = GaussianBombardment::new(
        random_symmetric(&mut rng, 2),
        random_symmetric(&mut rng, 2),
        &u * v.transpose(),
        random_rvector(&mut rng, 2),
        random_rvector(&mut rng, 2),
        GaussianState::thermal_single(1.7)?,
    )?;
    let s = gaussian_generator_series(&rank_one, 1)?;
    ch.within(
        "rank-one G: Tr(Omega_S A_1)",
        (symplectic_form(1) * &s.a[1]).trace().abs(),
        1e-14,
    );

    // Purity rate against the integrated determinant: the forward-difference
    // error must shrink linearly with the step.
    let spec = random_gaussian_spec(&mut rng, 2, 1);
    let g = spec.generator_exact(0.1)?;
    let s0 = GaussianState::squeezed(1.6, 0.625)?;
    let s0 = GaussianState::new(RVector::zeros(4), {
        let mut cov = RMatrix::identity(4, 4);
        cov.view_mut((0, 0), (2, 2)).copy_from(&s0.cov);
        cov[(2, 2)] = 2.0;
        cov[(3, 3)] = 2.0;
        cov
    })?;
    let rate = purity_rate(&s0, &g)?;
    let det0 = s0.cov.determinant();
    let err = |h: f64| -> Result<f64> {
        let det = g.flow(h)?.apply(&s0)?.cov.determinant();
        Ok(((det - det0) / h - rate).abs())
    };
    let (e1, e2) = (err(1e-3)?, err(5e-4)?);
    ch.holds(
        "purity-rate formula matches integrated det sigma to first order",
        (e1 / e2 - 2.0).abs() < 0.1 && e1 < 1e-2 * rate.abs().max(1.0),
        format!("rate {rate:.6}, errors {e1:.3e} / {e2:.3e}"),
    );

    let omega = symplectic_form(1);
    let single = |a: RMatrix, b: RVector, cm: RMatrix| GaussianGenerator::new(a, b, cm);
    let canon = [
        (
            single(RMatrix::identity(2, 2), RVector::zeros(2), RMatrix::zeros(2, 2))?,
            DynamicsKind::SingleModeRotation,
        ),
        (
            single(
                RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
                RVector::zeros(2),
                RMatrix::zeros(2, 2),
            )?,
            DynamicsKind::SingleModeSqueezing,
        ),
        (
            single(
                RMatrix::zeros(2, 2),
                RVector::from_vec(vec![0.3, -0.2]),
                RMatrix::zeros(2, 2),
            )?,
            DynamicsKind::Displacement,
        ),
        (
            single(&omega * 0.4, RVector::zeros(2), RMatrix::zeros(2, 2))?,
            DynamicsKind::AmplificationRelaxation,
        ),
        (
            single(RMatrix::zeros(2, 2), RVector::zeros(2), RMatrix::identity(2, 2) * 1.5)?,
            DynamicsKind::FreeThermalNoise,
        ),
    ];
    let expected_names = [
        "Single-mode Rotation",
        "Single-mode Squeezing",
        "Displacement",
        "Amplification/Relaxation",
        "Free Thermal Noise",
    ];
    let mut names_ok = true;
    let mut seen = Vec::new();
    for ((g, kind), name) in canon.iter().zip(expected_names) {
        let present = classify_dynamics(g)?.present(1e-12);
        names_ok &= present == vec![*kind] && kind.name() == name;
        seen.push(present.iter().map(|k| k.name()).collect::<Vec<_>>().join("+"));
    }
    ch.holds("canonical generator names", names_ok, seen.join(", "));

    let mut impossible = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let a = RMatrix::from_fn(2 * n, 2 * n, |_, _| rng.random_range(-1.0..1.0));
        let cm = RMatrix::from_fn(2 * n, 2 * n, |_, _| rng.random_range(-1.0..1.0));
        let g = GaussianGenerator::new(a, random_rvector(&mut rng, 2 * n), &cm * cm.transpose())?;
        for k in classify_dynamics(&g)?.present(1e-12) {
            if IMPOSSIBLE_CELLS.contains(&k.labels()) {
                impossible += 1;
            }
        }
    }
    ch.holds(
        "no impossible cells on 200 random generators",
        impossible == 0,
        format!("{impossible} hits"),
    );
    ch.runtime(start, Duration::from_secs(30));
    Ok(())
}

fn criterion_11(ch: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for (ns, na) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for _ in 0..3 {
            let da = 2 * na;
            // Positive-definite ancilla Hamiltonian so that the Gibbs state exists.
            let m = RMatrix::from_fn(da, da, |_, _| rng.random_range(-1.0..1.0));
            let f_a = &m * m.transpose() + RMatrix::identity(da, da) * 0.5;
            let alpha_a = random_rvector(&mut rng, da);
            let beta = rng.random_range(0.3..2.0);
            let ancilla = GaussianState::thermal(&QuadraticHamiltonian::new(f_a.clone(), alpha_a.clone())?, beta)?;
            let spec = GaussianBombardment::new(
                random_symmetric(&mut rng, 2 * ns),
                f_a,
                RMatrix::from_fn(2 * ns, da, |_, _| rng.random_range(-1.0..1.0)),
                random_rvector(&mut rng, 2 * ns),
                alpha_a,
                ancilla,
            )?;
            let s = gaussian_generator_series(&spec, 1)?;
            worst = worst.max(s.b[1].amax());
        }
    }
    ch.within("b_1 with stationary thermal ancilla", worst, 1e-12);
    Ok(())
}

fn main() {
    let criteria: [(&str, fn(&mut Checks) -> Result<()>); 11] = [
        ("toy-model golden values", criterion_1),
        ("stroboscopic matching", criterion_2),
        ("truncation-order fits", criterion_3),
        ("partial-swap golden series", criterion_4),
        ("mixed-unitary decoherence mode and Q matrix", criterion_5),
        ("Zeno transfer matrices", criterion_6),
        ("ancillary bombardment first orders", criterion_7),
        ("continuum-limit Kraus classification", criterion_8),
        ("energy-scale sensitivity", criterion_9),
        ("Gaussian suite", criterion_10),
        ("thermal-ancilla Gaussian stationarity", criterion_11),
    ];
    let mut failed = Vec::new();
    for (k, (title, body)) in criteria.iter().enumerate() {
        if !criterion(k + 1, title, body) {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria pass");
    } else {
        println!("acceptance: {} of 11 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
