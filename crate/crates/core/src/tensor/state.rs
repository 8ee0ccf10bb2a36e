use super::layout::SystemLayout;
use super::linalg::{self, CMatrix, CVector};
use super::ops;
use crate::error::{Error, Result};

/// Default validation tolerance for states and operators.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Density matrix over a [`SystemLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    matrix: CMatrix,
    layout: SystemLayout,
    tol: f64,
}

impl QState {
    pub fn new(matrix: CMatrix, layout: SystemLayout) -> Result<Self> {
        Self::with_tol(matrix, layout, DEFAULT_TOL)
    }

    /// Validates Hermiticity, unit trace and positivity up to `tol`, then
    /// stores the Hermitian part.
    pub fn with_tol(matrix: CMatrix, layout: SystemLayout, tol: f64) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "density matrix is {}x{}, layout dimension is {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = linalg::hermiticity_error(&matrix);
        if herm > tol {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let matrix = linalg::hermitian_part(&matrix);
        let min = linalg::eigvalsh(&matrix).into_iter().fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix, layout, tol })
    }

    /// Skips validation; callers guarantee a valid density matrix.
    pub(crate) fn from_parts_unchecked(matrix: CMatrix, layout: SystemLayout) -> Self {
        Self { matrix, layout, tol: DEFAULT_TOL }
    }

    /// `|ψ⟩⟨ψ|` after normalizing `psi`.
    pub fn from_ket(psi: &CVector, layout: SystemLayout) -> Result<Self> {
        let norm = psi.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(linalg::projector(&psi.unscale(norm)), layout)
    }

    /// Computational basis state with the given digit per subsystem.
    pub fn basis(layout: SystemLayout, digits: &[usize]) -> Result<Self> {
        if digits.len() != layout.len() || digits.iter().zip(layout.dims()).any(|(d, n)| *d >= n) {
            return Err(Error::InvalidArgument(format!("basis digits {digits:?} do not fit layout")));
        }
        let idx = layout.compose(digits);
        let psi = linalg::basis_vector(layout.total_dim(), idx);
        Self::from_ket(&psi, layout)
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let n = layout.total_dim();
        Self::from_parts_unchecked(linalg::identity(n).unscale(n as f64), layout)
    }

    /// Tensor product of states; labels must be disjoint.
    pub fn product(states: &[&QState]) -> Result<Self> {
        let mut parts = Vec::new();
        for s in states {
            parts.extend(s.layout.parts().iter().map(|p| (p.label.clone(), p.dim)));
        }
        let layout = SystemLayout::new(parts)?;
        let m = linalg::kron_all(states.iter().map(|s| &s.matrix));
        Ok(Self::from_parts_unchecked(m, layout))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Reduced state on `keep`, listed in this layout's order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<QState> {
        let (m, layout) = ops::partial_trace_matrix(&self.matrix, &self.layout, keep)?;
        Ok(Self { matrix: linalg::hermitian_part(&m), layout, tol: self.tol })
    }

    pub fn partial_transpose(&self, on: &[&str]) -> Result<CMatrix> {
        ops::partial_transpose_matrix(&self.matrix, &self.layout, on)
    }

    /// Same state with subsystems listed in `order`.
    pub fn permuted(&self, order: &[&str]) -> Result<QState> {
        let (m, layout) = ops::permute_matrix(&self.matrix, &self.layout, order)?;
        Ok(Self { matrix: m, layout, tol: self.tol })
    }

    /// Relabel subsystems position-wise; dimensions must agree.
    pub fn relabeled(&self, layout: SystemLayout) -> Result<QState> {
        if layout.dims() != self.layout.dims() {
            return Err(Error::LayoutMismatch(format!(
                "cannot relabel {:?} as {:?}",
                self.layout.dims(),
                layout.dims()
            )));
        }
        Ok(Self { matrix: self.matrix.clone(), layout, tol: self.tol })
    }

    /// Eigenvalues with values in `[-tol, 0)` clamped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
            .into_iter()
            .map(|l| if l < 0.0 && l >= -self.tol { 0.0 } else { l })
            .collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `U ρ U†` for a unitary `u` on the full layout.
    pub fn conjugate(&self, u: &CMatrix) -> Result<QState> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch("unitary does not match state".into()));
        }
        let m = u * &self.matrix * u.adjoint();
        Ok(Self { matrix: linalg::hermitian_part(&m), layout: self.layout.clone(), tol: self.tol })
    }

    /// Re-validate after numerically accumulated operations.
    pub fn validated(self) -> Result<QState> {
        let tol = self.tol;
        Self::with_tol(self.matrix, self.layout, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::{c, max_entangled_vector};

    #[test]
    fn rejects_invalid_matrices() {
        let l = SystemLayout::single("A", 2);
        let l = l.unwrap();
        let not_unit = linalg::identity(2);
        assert!(QState::new(not_unit, l.clone()).is_err());
        let neg = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(QState::new(neg, l.clone()).is_err());
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(QState::new(non_herm, l).is_err());
    }

    #[test]
    fn bell_marginal_is_mixed() {
        let l = SystemLayout::bipartite(2, 2).unwrap();
        let bell = QState::from_ket(&max_entangled_vector(2, 2, 2), l).unwrap();
        let ra = bell.partial_trace(&["A"]).unwrap();
        assert!(linalg::max_abs(&(ra.matrix() - linalg::identity(2).scale(0.5))) < 1e-15);
    }

    #[test]
    fn product_of_basis_states() {
        let a = QState::basis(SystemLayout::single("A", 2).unwrap(), &[1]).unwrap();
        let b = QState::basis(SystemLayout::single("B", 3).unwrap(), &[2]).unwrap();
        let ab = QState::product(&[&a, &b]).unwrap();
        let direct = QState::basis(SystemLayout::bipartite(2, 3).unwrap(), &[1, 2]).unwrap();
        assert_eq!(ab.matrix(), direct.matrix());
        assert!(QState::product(&[&a, &a]).is_err());
    }
}
