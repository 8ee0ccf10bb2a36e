//! Dense complex helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    ops.into_iter().fold(identity(1), |acc, m| acc.kronecker(m))
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Max-abs deviation from self-adjointness.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut err = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            err = err.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    err
}

/// Max-abs deviation of `U†U` from the identity.
pub fn unitarity_error(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m.adjoint() * m - identity(m.nrows())))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Eigen-decomposition of the Hermitian part of `m`. Eigenvalues come back
/// in no particular order; columns of the second matrix are eigenvectors.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = hermitian_part(m).symmetric_eigen();
    (se.eigenvalues.iter().copied().collect(), se.eigenvectors)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect()
}

/// `V diag(f(λ)) V†` for Hermitian `m`.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let (vals, vecs) = eigh(m);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for j in 0..n {
        let fj = f(vals[j]);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    scaled * vecs.adjoint()
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    m.clone().singular_values().iter().copied().collect()
}

/// Outer product `|u⟩⟨v|`.
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

pub fn projector(psi: &CVector) -> CMatrix {
    outer(psi, psi)
}

/// Computational basis vector `|i⟩` in dimension `dim`.
pub fn basis_vector(dim: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[i] = ONE;
    v
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Exchange of two subsystems of dimensions `d1` (first factor) and `d2`
/// (second factor) on the overlap of their levels.
///
/// Basis states `|i⟩|j⟩` with `i, j < min(d1, d2)` map to `|j⟩|i⟩`; every
/// other basis state is left alone. For `d1 == d2` this is the usual SWAP.
pub fn partial_swap(d1: usize, d2: usize) -> CMatrix {
    let n = d1 * d2;
    let k = d1.min(d2);
    let mut m = CMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d2 {
            let src = i * d2 + j;
            let dst = if i < k && j < k { j * d2 + i } else { src };
            m[(dst, src)] = ONE;
        }
    }
    m
}

/// Maximally entangled vector `Σ_{i<k} |i⟩|i⟩ / √k` in `d1 × d2`.
pub fn max_entangled_vector(d1: usize, d2: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(d1 * d2);
    let amp = C64::from(1.0 / (k as f64).sqrt());
    for i in 0..k {
        v[i * d2 + i] = amp;
    }
    v
}

/// Householder reflection mapping unit vector `from` onto unit vector `to`.
pub fn reflection_between(from: &CVector, to: &CVector) -> CMatrix {
    let n = from.len();
    // fix the relative phase so the reflection is exact
    let overlap = from.dotc(to);
    let phase = if overlap.norm() > 1e-15 { overlap / overlap.norm() } else { ONE };
    let target = to.map(|z| z * phase.conj());
    let w = from - &target;
    let wn = w.norm();
    let mut h = identity(n);
    if wn > 1e-15 {
        let w = w.unscale(wn);
        h -= outer(&w, &w).scale(2.0);
    }
    // H maps `from` to `target = to · conj(phase)`; undo the phase.
    h * phase
}
