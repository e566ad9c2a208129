// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use collint::numkit::{self, c, CMatrix};
use collint::scenarios::ancillary_bombardment;
use collint::superop::{
    choi, commutator_superop, cptp_check, default_kraus_tol, dissipator_superop, kraus_from_choi, lindblad_decompose,
    ChannelOnStates, KrausSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(32)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn kraus_round_trip(seed in any::<u64>(), d in 1usize..=4, count in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops = KrausSet { operators: common::kraus(&mut rng, d, count) };
        let ch = ChannelOnStates::from_kraus(&ops).unwrap();
        let j = choi(&ch);
        let back = kraus_from_choi(&j, default_kraus_tol(&j)).unwrap();
        prop_assert!(back.tp_residual() <= 1e-10);
        let rebuilt = ChannelOnStates::from_kraus(&back).unwrap();
        prop_assert!((rebuilt.superop() - ch.superop()).norm() <= 1e-9);
        let rep = cptp_check(&ch, 1e-10).unwrap();
        prop_assert!(rep.is_cp() && rep.is_tp());
    }

    #[test]
    fn channels_preserve_trace(seed in any::<u64>(), d in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = ChannelOnStates::from_kraus(&KrausSet { operators: common::kraus(&mut rng, d, 3) }).unwrap();
        let rho = common::complex(&mut rng, d, d);
        prop_assert!((ch.apply(&rho).unwrap().trace() - rho.trace()).norm() <= 1e-10);
        let j = choi(&ch);
        prop_assert!((&j - j.adjoint()).norm() <= 1e-12);
    }

    #[test]
    fn lindblad_reconstruction_and_gauge(seed in any::<u64>(), d in 2usize..=4, modes in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut l = commutator_superop(&common::hermitian(&mut rng, d));
        for _ in 0..modes {
            let rate = rng.random_range(0.1..2.0);
            l += dissipator_superop(&common::complex(&mut rng, d, d)) * c(rate, 0.0);
        }
        let form = lindblad_decompose(&l, 1e-10).unwrap();
        prop_assert!((form.superoperator() - &l).norm() <= 1e-10 * (1.0 + l.norm()));
        prop_assert!((&form.hamiltonian - form.hamiltonian.adjoint()).norm() <= 1e-12);
        prop_assert!(form.hamiltonian.trace().norm() <= 1e-10);
        prop_assert!(form.completely_positive);
        for (a, fa) in form.modes.iter().enumerate() {
            prop_assert!(fa.trace().norm() <= 1e-10);
            for (b, fb) in form.modes.iter().enumerate() {
                let ip = (fa.adjoint() * fb).trace();
                let expect = if a == b { 1.0 } else { 0.0 };
                prop_assert!((ip - c(expect, 0.0)).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn first_order_bombardment_rates_are_nonnegative(seed in any::<u64>(), ds in 2usize..=3, da in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = common::bombardment(&mut rng, ds, da);
        let b = ancillary_bombardment(&spec).unwrap();
        let form = lindblad_decompose(&b.generators[1], 1e-10).unwrap();
        for r in &form.rates {
            prop_assert!(*r >= -1e-10, "rate {r}");
        }
    }
}

#[test]
fn kraus_round_trip_at_dimension_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let ops = KrausSet {
        operators: common::kraus(&mut rng, 6, 3),
    };
    let ch = ChannelOnStates::from_kraus(&ops).unwrap();
    let j = choi(&ch);
    let back = ChannelOnStates::from_kraus(&kraus_from_choi(&j, default_kraus_tol(&j)).unwrap()).unwrap();
    assert!((back.superop() - ch.superop()).norm() <= 1e-9);
}

#[test]
fn transpose_is_not_cp() {
    let d = 2;
    let mut s = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(i * d + j, j * d + i)] = c(1.0, 0.0);
        }
    }
    let ch = ChannelOnStates::from_superop(d, s).unwrap();
    let rep = cptp_check(&ch, 1e-10).unwrap();
    assert!(!rep.is_cp());
    assert!(rep.choi.min_eigenvalue < 0.0);
    assert!((numkit::eye(2) - ch.apply(&numkit::eye(2)).unwrap()).norm() < 1e-15);
}
