// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Random inputs shared by the integration tests.

#![allow(dead_code)]

use collint::numkit::{self, c, CMatrix, RMatrix, RVector};
use collint::scenarios::BombardmentSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let m = complex(rng, d, d);
    (&m + m.adjoint()) * c(0.5, 0.0)
}

pub fn density(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let m = complex(rng, d, d);
    let rho = &m * m.adjoint();
    let tr = rho.trace();
    rho / tr
}

pub fn real(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn symmetric(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
    let m = real(rng, n, n);
    (&m + m.transpose()) * 0.5
}

pub fn rvector(rng: &mut ChaCha8Rng, n: usize) -> RVector {
    RVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

/// Random Kraus set normalised so that `Σ A_k† A_k = 1`.
pub fn kraus(rng: &mut ChaCha8Rng, d: usize, count: usize) -> Vec<CMatrix> {
    let raw: Vec<CMatrix> = (0..count).map(|_| complex(rng, d, d)).collect();
    let s = raw.iter().fold(CMatrix::zeros(d, d), |acc, a| acc + a.adjoint() * a);
    let (vals, vecs) = numkit::eigh(&s).unwrap();
    let inv_sqrt = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        vals.iter().map(|&v| c(1.0 / v.sqrt(), 0.0)),
    ));
    let s_inv_half = &vecs * inv_sqrt * vecs.adjoint();
    raw.into_iter().map(|a| a * &s_inv_half).collect()
}

pub fn bombardment(rng: &mut ChaCha8Rng, ds: usize, da: usize) -> BombardmentSpec {
    let terms = rng.random_range(1..=2);
    BombardmentSpec {
        h_s: hermitian(rng, ds),
        h_a: hermitian(rng, da),
        terms: (0..terms).map(|_| (hermitian(rng, ds), hermitian(rng, da))).collect(),
        rho_a: density(rng, da),
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
