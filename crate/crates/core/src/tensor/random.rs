//! Seeded random sampling of kets, unitaries, states, Hamiltonians and
//! Kraus families.
//!
//! Every stream is derived from a master seed and a stream index, so work
//! split across threads draws the same numbers as a serial loop.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::layout::SystemLayout;
use super::linalg::{c, CMatrix, CVector, ONE};
use super::state::QState;

pub type SimRng = ChaCha8Rng;

/// Independent generator number `stream` under `master`.
pub fn stream_rng(master: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

/// Derive a child seed, for handing a whole sub-task its own master seed.
pub fn child_seed(master: u64, stream: u64) -> u64 {
    stream_rng(master, stream).random()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

/// Haar-random unit vector.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| c(gaussian(rng), gaussian(rng)));
    let n = v.norm();
    v.unscale(n)
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = ginibre(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random density matrix `GG†/Tr` with `G` of shape `n × rank`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, n, rank.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    m.unscale(tr)
}

/// Full-rank random state over `layout`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, layout: &SystemLayout) -> QState {
    let n = layout.total_dim();
    QState::from_parts_unchecked(random_density(rng, n, n), layout.clone())
}

pub fn random_state_rank<R: Rng + ?Sized>(rng: &mut R, layout: &SystemLayout, rank: usize) -> QState {
    QState::from_parts_unchecked(random_density(rng, layout.total_dim(), rank), layout.clone())
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, layout: &SystemLayout) -> QState {
    let psi = random_ket(rng, layout.total_dim());
    QState::from_parts_unchecked(&psi * psi.adjoint(), layout.clone())
}

/// GUE-distributed Hermitian matrix with entries of scale `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    let g = ginibre(rng, n, n);
    (&g + g.adjoint()).scale(0.5 * scale)
}

/// `count` Kraus operators on dimension `dim`, cut from a Haar isometry.
pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<CMatrix> {
    let count = count.max(1);
    let u = haar_unitary(rng, dim * count);
    (0..count)
        .map(|k| u.view((k * dim, 0), (dim, dim)).into_owned())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::{identity, max_abs, unitarity_error};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream_rng(7, 3).random();
        let b: u64 = stream_rng(7, 3).random();
        let other: u64 = stream_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, other);
    }

    #[test]
    fn samples_are_valid() {
        let mut rng = stream_rng(1, 0);
        assert!(unitarity_error(&haar_unitary(&mut rng, 6)) < 1e-12);
        let ks = random_kraus(&mut rng, 3, 4);
        let sum = ks.iter().fold(CMatrix::zeros(3, 3), |acc, k| acc + k.adjoint() * k);
        assert!(max_abs(&(sum - identity(3))) < 1e-12);
        let l = SystemLayout::bipartite(2, 3).unwrap();
        let s = random_state(&mut rng, &l);
        assert!(s.clone().validated().is_ok());
        assert!((random_ket(&mut rng, 5).norm() - 1.0).abs() < 1e-14);
    }
}
