// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use collint::diagnostics::{kraus_kind_classify, purification_first_order, unitality_defect};
use collint::interp::{generator_series, UpdateMapSeries};
use collint::numkit::{self, c, sigma_x, sigma_z, CMatrix, CVector, TaylorFitOptions};
use collint::scenarios::{
    ancillary_bombardment, dyson_family, interruption_comparison, mixed_unitary, scalar_toy, system_channel,
    unitary_map, zeno_transfer, BombardmentSpec, DysonConvention, EnsembleSpec, PartialSwap,
};
use collint::superop::{commutator_superop, cptp_check, dissipator_superop, ChannelOnStates};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `evaluator(0) = 1` and the symbolic Taylor data match a Chebyshev fit of the evaluator.
fn check_taylor_view(series: &UpdateMapSeries) {
    let d = series.dim;
    assert!(
        (series.evaluate(0.0).unwrap() - numkit::eye(d)).norm() < 1e-12,
        "{}",
        series.label
    );
    assert!(series.taylor.is_some(), "{} has symbolic Taylor data", series.label);
    let taylor = series.taylor_coefficients(4).unwrap();
    let fit = numkit::taylor_fit(
        |t| series.evaluate(t),
        5,
        TaylorFitOptions {
            half_width: 0.1,
            nodes: 24,
        },
    )
    .unwrap();
    for k in 1..=4 {
        let err = (&fit[k] - &taylor[k - 1]).norm();
        assert!(err < 1e-6, "{} coefficient {k}: {err}", series.label);
    }
}

fn computational_basis(d: usize) -> Vec<CMatrix> {
    (0..d)
        .map(|k| {
            let mut p = CMatrix::zeros(d, d);
            p[(k, k)] = c(1.0, 0.0);
            p
        })
        .collect()
}

#[test]
fn every_family_has_a_consistent_taylor_view() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    check_taylor_view(&scalar_toy(10.0, 1.0).unwrap());
    check_taylor_view(&unitary_map(&common::hermitian(&mut rng, 3)).unwrap());
    let hs: Vec<CMatrix> = (0..3).map(|_| common::hermitian(&mut rng, 2)).collect();
    for conv in [DysonConvention::ClockReset, DysonConvention::DurationScaled] {
        check_taylor_view(&dyson_family(&hs[0], &hs[1], &hs[2], conv).unwrap());
    }
    let ens = EnsembleSpec {
        probabilities: vec![0.25, 0.75],
        hamiltonians: vec![common::hermitian(&mut rng, 2), common::hermitian(&mut rng, 2)],
    };
    check_taylor_view(&mixed_unitary(&ens).unwrap().series);
    check_taylor_view(&PartialSwap::new(1.2, 0.4).unwrap().series());
    check_taylor_view(
        &zeno_transfer(&common::hermitian(&mut rng, 3), &computational_basis(3))
            .unwrap()
            .series,
    );
    check_taylor_view(
        &ancillary_bombardment(&common::bombardment(&mut rng, 2, 2))
            .unwrap()
            .series,
    );
}

#[test]
fn bombardment_channels_are_cptp() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..20 {
        let (ds, da) = (2 + k % 3, 2 + (k / 3) % 3);
        let spec = common::bombardment(&mut rng, ds, da);
        let ch = ChannelOnStates::from_superop(ds, system_channel(&spec, 0.4).unwrap()).unwrap();
        let rep = cptp_check(&ch, 1e-10).unwrap();
        assert!(rep.is_cp() && rep.is_tp(), "spec {k}: {rep:?}");
    }
}

#[test]
fn first_order_generator_from_phi_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let b = ancillary_bombardment(&common::bombardment(&mut rng, 2, 3)).unwrap();
        let expect = &b.phi[1] - &b.phi[0] * &b.phi[0] * c(0.5, 0.0);
        assert!((&b.generators[1] - &expect).norm() < 1e-12);
        let gs = generator_series(&b.series, 1).unwrap();
        assert!((&gs.coefficients[1] - &expect).norm() < 1e-10);
    }
}

#[test]
fn toy_interruption_bounces_between_collisions() {
    let series = scalar_toy(10.0, 1.0).unwrap();
    let dt = 0.1;
    let v0 = CVector::from_element(1, c(1.0, 0.0));
    let times: Vec<f64> = (0..=40).map(|k| k as f64 * dt / 4.0).collect();
    let samples = interruption_comparison(&series, dt, &v0, &times).unwrap();
    let mut max_between: f64 = 0.0;
    for (k, s) in samples.iter().enumerate() {
        let gap = (&s.exact - &s.interpolated).norm();
        if k % 4 == 0 {
            assert!(gap < 1e-12, "t = {}: {gap}", s.t);
        } else {
            max_between = max_between.max(gap);
        }
    }
    assert!(max_between > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn purification_is_hermitian_traceless_and_ignores_free_terms(seed in any::<u64>(), da in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = common::bombardment(&mut rng, 2, da);
        let out = purification_first_order(&spec).unwrap();
        prop_assert!((&out - out.adjoint()).norm() <= 1e-12);
        prop_assert!(out.trace().norm() <= 1e-12);
        let shifted = BombardmentSpec {
            h_s: common::hermitian(&mut rng, 2),
            h_a: common::hermitian(&mut rng, da),
            ..spec
        };
        prop_assert!((purification_first_order(&shifted).unwrap() - out).norm() <= 1e-12);
    }

    #[test]
    fn unital_generators_give_unital_maps(seed in any::<u64>(), d in 2usize..=3, dt in 0.01f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = commutator_superop(&common::hermitian(&mut rng, d)) + dissipator_superop(&common::hermitian(&mut rng, d));
        prop_assert!(unitality_defect(&l).unwrap() <= 1e-12);
        let m = numkit::expm(&(&l * c(dt, 0.0))).unwrap();
        let shift = m - numkit::eye(d * d);
        prop_assert!(unitality_defect(&shift).unwrap() <= 1e-12);
    }
}

#[test]
fn fixed_hamiltonian_families_have_no_half_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let grid: Vec<f64> = (0..8).map(|k| 1e-4 * 2f64.powi(k)).collect();
    for _ in 0..3 {
        let mut spec = common::bombardment(&mut rng, 2, 2);
        spec.rho_a = {
            let mut p = CMatrix::zeros(2, 2);
            p[(0, 0)] = c(1.0, 0.0);
            p
        };
        let family = move |dt: f64| ChannelOnStates::from_superop(2, system_channel(&spec, dt)?);
        let rep = kraus_kind_classify(family, &grid).unwrap();
        for b in &rep.branches {
            assert!(b.exponent.abs() < 0.1 || b.exponent > 0.9, "exponent {}", b.exponent);
        }
    }
}

#[test]
fn dephasing_ensemble_mode_is_sigma_z() {
    let spec = EnsembleSpec {
        probabilities: vec![0.5, 0.5],
        hamiltonians: vec![
            sigma_z() * c(0.4, 0.0) + sigma_x() * c(0.1, 0.0),
            sigma_z() * c(-0.4, 0.0) + sigma_x() * c(0.1, 0.0),
        ],
    };
    let mu = mixed_unitary(&spec).unwrap();
    assert_eq!(mu.modes.len(), 1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((&mu.modes[0].operator - sigma_z() * c(s, 0.0)).norm() < 1e-14);
}
