//! Standard and random interaction pairs `H_AM`, `H_BM`.

use rand::Rng;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::error::Result;
use crate::tensor::linalg::{self, c, kron, pauli_x, pauli_z, CMatrix};
use crate::tensor::random::{haar_unitary, random_hermitian};
use crate::tensor::{QOp, SystemLayout};

pub(crate) fn am_layout(d_a: usize, d_m: usize) -> Result<SystemLayout> {
    SystemLayout::new([("A", d_a), ("M", d_m)])
}

pub(crate) fn bm_layout(d_b: usize, d_m: usize) -> Result<SystemLayout> {
    SystemLayout::new([("B", d_b), ("M", d_m)])
}

/// `H_AM = (π/4) Z_A X_M`, `H_BM = (π/4) Z_B Z_M` on qubits.
pub fn one_way_hamiltonians() -> (QOp, QOp) {
    let h_am = kron(&pauli_z(), &pauli_x()).scale(FRAC_PI_4);
    let h_bm = kron(&pauli_z(), &pauli_z()).scale(FRAC_PI_4);
    (
        QOp::hermitian(h_am, am_layout(2, 2).expect("qubit layout")).expect("Hermitian"),
        QOp::hermitian(h_bm, bm_layout(2, 2).expect("qubit layout")).expect("Hermitian"),
    )
}

/// `U_AM = (I + i Z_A X_M)/√2` and `U_BM = (I + i Z_B Z_M)/√2`, whose
/// product `U_AM U_BM` has no decomposition with the `A`–`M` gate first.
pub fn one_way_unitaries() -> (QOp, QOp) {
    let gate = |p: CMatrix| (linalg::identity(4) + p.map(|z| z * c(0.0, 1.0))).scale(FRAC_1_SQRT_2);
    (
        QOp::unitary(gate(kron(&pauli_z(), &pauli_x())), am_layout(2, 2).expect("qubit layout")).expect("unitary"),
        QOp::unitary(gate(kron(&pauli_z(), &pauli_z())), bm_layout(2, 2).expect("qubit layout")).expect("unitary"),
    )
}

/// Independent GUE Hamiltonians on `(A, M)` and `(B, M)`.
pub fn random_pair<R: Rng + ?Sized>(
    rng: &mut R,
    d_a: usize,
    d_m: usize,
    d_b: usize,
    scale: f64,
) -> Result<(QOp, QOp)> {
    let h_am = random_hermitian(rng, d_a * d_m, scale);
    let h_bm = random_hermitian(rng, d_b * d_m, scale);
    Ok((QOp::hermitian(h_am, am_layout(d_a, d_m)?)?, QOp::hermitian(h_bm, bm_layout(d_b, d_m)?)?))
}

/// Commuting pair `Σ_k H_A^k ⊗ P_k` and `Σ_k H_B^k ⊗ P_k` for one random
/// orthonormal basis `{P_k}` of the mediator.
pub fn random_commuting_pair<R: Rng + ?Sized>(
    rng: &mut R,
    d_a: usize,
    d_m: usize,
    d_b: usize,
    scale: f64,
) -> Result<(QOp, QOp)> {
    let basis = haar_unitary(rng, d_m);
    let mut h_am = CMatrix::zeros(d_a * d_m, d_a * d_m);
    let mut h_bm = CMatrix::zeros(d_b * d_m, d_b * d_m);
    for k in 0..d_m {
        let p = linalg::projector(&basis.column(k).into_owned());
        h_am += kron(&random_hermitian(rng, d_a, scale), &p);
        h_bm += kron(&random_hermitian(rng, d_b, scale), &p);
    }
    Ok((QOp::hermitian(h_am, am_layout(d_a, d_m)?)?, QOp::hermitian(h_bm, bm_layout(d_b, d_m)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::max_abs;
    use crate::tensor::spectral::expm_hamiltonian;

    #[test]
    fn one_way_gates_are_exponentials() {
        // exp(+i(π/4)P) = (I + iP)/√2 for a Pauli string P
        let (h_am, h_bm) = one_way_hamiltonians();
        let (u_am, u_bm) = one_way_unitaries();
        let e_am = expm_hamiltonian(&h_am, -1.0).unwrap();
        let e_bm = expm_hamiltonian(&h_bm, -1.0).unwrap();
        assert!(max_abs(&(e_am.matrix() - u_am.matrix())) < 1e-14);
        assert!(max_abs(&(e_bm.matrix() - u_bm.matrix())) < 1e-14);
    }
}
