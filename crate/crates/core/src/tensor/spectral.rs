use serde::{Deserialize, Serialize};

use super::linalg::{self, c, CMatrix};
use super::op::{OpKind, QOp};
use super::state::QState;
use crate::error::{Error, Result};

/// `e^{-itH}` through the eigendecomposition of `H`.
pub fn expm_hamiltonian(h: &QOp, t: f64) -> Result<QOp> {
    if h.kind() != OpKind::Hermitian {
        let dev = linalg::hermiticity_error(h.matrix());
        if dev > super::state::DEFAULT_TOL {
            return Err(Error::InvalidOperator { expected: "Hermitian", deviation: dev });
        }
    }
    let u = expm_hermitian_matrix(h.matrix(), t);
    Ok(QOp::from_parts_unchecked(u, h.layout().clone(), OpKind::Unitary))
}

pub(crate) fn expm_hermitian_matrix(h: &CMatrix, t: f64) -> CMatrix {
    linalg::hermitian_function(h, |l| c(0.0, -t * l).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub spectral: f64,
    pub trace: f64,
    pub frobenius: f64,
}

/// Schatten norms of an arbitrary complex matrix.
pub fn norms(m: &CMatrix) -> Norms {
    let sv = linalg::singular_values(m);
    Norms {
        spectral: sv.iter().copied().fold(0.0, f64::max),
        trace: sv.iter().sum(),
        frobenius: m.norm(),
    }
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    linalg::singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Spectral norm of `a - b`.
pub fn operator_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    same_shape(a, b)?;
    Ok(spectral_norm(&(a - b)))
}

/// `‖X‖₁` for Hermitian `X`, from its eigenvalues.
pub fn trace_norm_hermitian(m: &CMatrix) -> f64 {
    linalg::eigvalsh(m).iter().map(|l| l.abs()).sum()
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &QState, sigma: &QState) -> Result<f64> {
    same_shape(rho.matrix(), sigma.matrix())?;
    Ok(trace_distance_matrix(rho.matrix(), sigma.matrix()))
}

pub(crate) fn trace_distance_matrix(a: &CMatrix, b: &CMatrix) -> f64 {
    (0.5 * trace_norm_hermitian(&(a - b))).clamp(0.0, 1.0)
}

/// Largest eigenvalue magnitude of `ρ − σ`.
pub fn spectral_distance(rho: &QState, sigma: &QState) -> Result<f64> {
    same_shape(rho.matrix(), sigma.matrix())?;
    Ok(linalg::eigvalsh(&(rho.matrix() - sigma.matrix()))
        .into_iter()
        .fold(0.0, |m, l| m.max(l.abs())))
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(state: &QState) -> f64 {
    shannon_bits(state.spectrum())
}

/// Weights and eigenvalues below this are roundoff.
const SUPPORT_EPS: f64 = 1e-14;

/// `S(ρ‖σ)` in bits; infinite if the support of `ρ` leaves that of `σ`.
pub fn relative_entropy(rho: &QState, sigma: &QState) -> Result<f64> {
    same_shape(rho.matrix(), sigma.matrix())?;
    let (ls, vs) = linalg::eigh(sigma.matrix());
    let rho_in_sigma = vs.adjoint() * rho.matrix() * &vs;
    let mut cross = 0.0;
    for (k, &l) in ls.iter().enumerate() {
        let w = rho_in_sigma[(k, k)].re;
        if w <= SUPPORT_EPS {
            continue;
        }
        if l <= SUPPORT_EPS {
            return Ok(f64::INFINITY);
        }
        cross -= w * l.log2();
    }
    Ok((cross - vn_entropy(rho)).max(0.0))
}

fn same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "shapes {:?} and {:?} differ",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}
