//! Random states, unitaries and Hamiltonians shared by the integration tests.
#![allow(dead_code)]

use qtherm::{CMatrix, DensityMatrix, QOperator, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(dim: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Full-rank mixed state `G G† / Tr(G G†)`.
pub fn random_state(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(QOperator::new(m / tr).unwrap()).unwrap()
}

/// Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> QOperator {
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    QOperator::new(q).unwrap()
}

pub fn random_hermitian(dim: usize, scale: f64, rng: &mut impl Rng) -> QOperator {
    let g = ginibre(dim, rng);
    QOperator::new((&g + g.adjoint()) * C64::new(0.5 * scale, 0.0)).unwrap()
}

pub fn random_operator(dim: usize, scale: f64, rng: &mut impl Rng) -> QOperator {
    QOperator::new(ginibre(dim, rng) * C64::new(scale, 0.0)).unwrap()
}

pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
        .collect()
}
