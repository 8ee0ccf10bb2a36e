use serde::{Deserialize, Serialize};

use super::layout::SystemLayout;
use super::linalg::{self, CMatrix};
use super::ops;
use super::state::DEFAULT_TOL;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Hermitian,
    Unitary,
    General,
}

/// Square operator over a [`SystemLayout`], tagged with its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct QOp {
    matrix: CMatrix,
    layout: SystemLayout,
    kind: OpKind,
}

impl QOp {
    pub fn new(matrix: CMatrix, layout: SystemLayout, kind: OpKind) -> Result<Self> {
        Self::with_tol(matrix, layout, kind, DEFAULT_TOL)
    }

    pub fn with_tol(matrix: CMatrix, layout: SystemLayout, kind: OpKind, tol: f64) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, layout dimension is {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        match kind {
            OpKind::Hermitian => {
                let dev = linalg::hermiticity_error(&matrix);
                if dev > tol {
                    return Err(Error::InvalidOperator { expected: "Hermitian", deviation: dev });
                }
            }
            OpKind::Unitary => {
                let dev = linalg::unitarity_error(&matrix);
                if dev > tol {
                    return Err(Error::InvalidOperator { expected: "unitary", deviation: dev });
                }
            }
            OpKind::General => {}
        }
        Ok(Self { matrix, layout, kind })
    }

    pub fn hermitian(matrix: CMatrix, layout: SystemLayout) -> Result<Self> {
        Self::new(matrix, layout, OpKind::Hermitian)
    }

    pub fn unitary(matrix: CMatrix, layout: SystemLayout) -> Result<Self> {
        Self::new(matrix, layout, OpKind::Unitary)
    }

    pub fn general(matrix: CMatrix, layout: SystemLayout) -> Result<Self> {
        Self::new(matrix, layout, OpKind::General)
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let n = layout.total_dim();
        Self { matrix: linalg::identity(n), layout, kind: OpKind::Unitary }
    }

    pub(crate) fn from_parts_unchecked(matrix: CMatrix, layout: SystemLayout, kind: OpKind) -> Self {
        Self { matrix, layout, kind }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Lift onto `target`. `acting_on` names, in order, the target subsystem
    /// each factor of this operator's layout acts on; pass `None` to use this
    /// operator's own labels.
    pub fn embed(&self, acting_on: Option<&[&str]>, target: &SystemLayout) -> Result<QOp> {
        let own = self.layout.labels();
        let labels = acting_on.unwrap_or(&own);
        let m = ops::embed_matrix(&self.matrix, &self.layout.dims(), labels, target)?;
        Ok(Self { matrix: m, layout: target.clone(), kind: self.kind })
    }

    /// Product `self · other`; kind is unitary only if both factors are.
    pub fn compose(&self, other: &QOp) -> Result<QOp> {
        if !self.layout.same_as(&other.layout) {
            return Err(Error::LayoutMismatch("operators live on different layouts".into()));
        }
        let kind = match (self.kind, other.kind) {
            (OpKind::Unitary, OpKind::Unitary) => OpKind::Unitary,
            _ => OpKind::General,
        };
        Ok(Self { matrix: &self.matrix * &other.matrix, layout: self.layout.clone(), kind })
    }

    pub fn adjoint(&self) -> QOp {
        Self { matrix: self.matrix.adjoint(), layout: self.layout.clone(), kind: self.kind }
    }

    pub fn scaled(&self, alpha: f64) -> QOp {
        let kind = if self.kind == OpKind::Hermitian { OpKind::Hermitian } else { OpKind::General };
        Self { matrix: self.matrix.scale(alpha), layout: self.layout.clone(), kind }
    }

    /// Same operator with subsystems listed in `order`.
    pub fn permuted(&self, order: &[&str]) -> Result<QOp> {
        let (m, layout) = ops::permute_matrix(&self.matrix, &self.layout, order)?;
        Ok(Self { matrix: m, layout, kind: self.kind })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::{identity, kron, kron_all, max_abs, pauli_x, pauli_z, ONE};

    #[test]
    fn kind_checked() {
        let l = SystemLayout::single("A", 2).unwrap();
        assert!(QOp::unitary(identity(2).scale(2.0), l.clone()).is_err());
        let mut m = pauli_x();
        m[(0, 1)] = ONE * 2.0;
        assert!(QOp::hermitian(m.clone(), l.clone()).is_err());
        assert!(QOp::general(m, l).is_ok());
    }

    #[test]
    fn embed_uses_own_labels_and_reorders() {
        let target = SystemLayout::tripartite(2, 2, 2).unwrap();
        let bm = SystemLayout::new([("B", 2), ("M", 2)]).unwrap();
        let op = QOp::hermitian(kron(&pauli_x(), &pauli_z()), bm).unwrap();
        let e = op.embed(None, &target).unwrap();
        let expected = kron_all([&identity(2), &pauli_z(), &pauli_x()]);
        assert!(max_abs(&(e.matrix() - expected)) < 1e-15);
    }
}
