use serde::{Deserialize, Serialize};

use super::trotter::HamiltonianPair;
use crate::error::{Error, Result};
use crate::tensor::linalg::{self, CMatrix};
use crate::tensor::ops::embed_matrix;
use crate::tensor::spectral::spectral_norm;
use crate::tensor::{QOp, LABEL_M};

const PROJECTOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classicality {
    pub classical: bool,
    pub commutator_norm: f64,
}

/// Classical iff `‖[H_AM, H_BM]‖_∞ ≤ tol`.
pub fn classicality_check(h_am: &QOp, h_bm: &QOp, tol: f64) -> Result<Classicality> {
    let n = HamiltonianPair::new(h_am, h_bm)?.commutator_norm();
    Ok(Classicality { classical: n <= tol, commutator_norm: n })
}

/// Rank-one projectors onto the computational basis of dimension `d`.
pub fn computational_projectors(d: usize) -> Vec<CMatrix> {
    (0..d).map(|i| linalg::projector(&linalg::basis_vector(d, i))).collect()
}

/// Whether `‖H − Σ_k P_k H P_k‖_∞ ≤ tol`, the projectors acting on `M`.
pub fn dephasing_invariance(h: &QOp, projectors: &[CMatrix], tol: f64) -> Result<bool> {
    let d_m = h.layout().dim_of(LABEL_M)?;
    check_projectors(projectors, d_m)?;
    let mut dephased = CMatrix::zeros(h.dim(), h.dim());
    for p in projectors {
        let big = embed_matrix(p, &[d_m], &[LABEL_M], h.layout())?;
        dephased += &big * h.matrix() * &big;
    }
    Ok(spectral_norm(&(h.matrix() - dephased)) <= tol)
}

fn check_projectors(ps: &[CMatrix], d: usize) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidProjectors(m));
    if ps.is_empty() {
        return bad("empty family".into());
    }
    let mut sum = CMatrix::zeros(d, d);
    for (i, p) in ps.iter().enumerate() {
        if p.shape() != (d, d) {
            return bad(format!("projector {i} is {}x{}, mediator has dimension {d}", p.nrows(), p.ncols()));
        }
        let dev = linalg::hermiticity_error(p).max(linalg::max_abs(&(p * p - p)));
        if dev > PROJECTOR_TOL {
            return bad(format!("element {i} is not an orthogonal projector (deviation {dev:.3e})"));
        }
        for (j, q) in ps.iter().enumerate().skip(i + 1) {
            let dev = linalg::max_abs(&(p * q));
            if dev > PROJECTOR_TOL {
                return bad(format!("elements {i} and {j} are not orthogonal (deviation {dev:.3e})"));
            }
        }
        sum += p;
    }
    let dev = linalg::max_abs(&(sum - linalg::identity(d)));
    if dev > PROJECTOR_TOL {
        return bad(format!("projectors do not sum to the identity (deviation {dev:.3e})"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::hamiltonians::{am_layout, bm_layout, one_way_hamiltonians};
    use crate::tensor::linalg::{kron, pauli_x, pauli_z};
    use std::f64::consts::PI;

    fn zz(layout: crate::tensor::SystemLayout) -> QOp {
        QOp::hermitian(kron(&pauli_z(), &pauli_z()), layout).unwrap()
    }

    #[test]
    fn zz_pair_is_classical() {
        let r = classicality_check(&zz(am_layout(2, 2).unwrap()), &zz(bm_layout(2, 2).unwrap()), 1e-9).unwrap();
        assert!(r.classical);
        assert!(r.commutator_norm < 1e-12);
    }

    #[test]
    fn one_way_pair_is_not() {
        let (h_am, h_bm) = one_way_hamiltonians();
        let r = classicality_check(&h_am, &h_bm, 1e-9).unwrap();
        assert!(!r.classical);
        assert!((r.commutator_norm - PI * PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn dephasing_examples() {
        let ps = computational_projectors(2);
        assert!(dephasing_invariance(&zz(am_layout(2, 2).unwrap()), &ps, 1e-9).unwrap());
        let zx = QOp::hermitian(kron(&pauli_z(), &pauli_x()), am_layout(2, 2).unwrap()).unwrap();
        assert!(!dephasing_invariance(&zx, &ps, 1e-9).unwrap());
        assert!(matches!(
            dephasing_invariance(&zx, &ps[..1], 1e-9),
            Err(Error::InvalidProjectors(_))
        ));
        let overlapping = vec![ps[0].clone(), ps[0].clone()];
        assert!(dephasing_invariance(&zx, &overlapping, 1e-9).is_err());
    }
}
