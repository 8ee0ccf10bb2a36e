use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the total Hilbert-space dimension of a layout.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Canonical tripartite labels, in canonical order.
pub const LABEL_A: &str = "A";
pub const LABEL_M: &str = "M";
pub const LABEL_B: &str = "B";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labelled subsystems.
///
/// Composite basis indices are row-major: the first subsystem is the most
/// significant digit. The canonical tripartite order is `(A, M, B)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Subsystem>", into = "Vec<Subsystem>")]
pub struct SystemLayout {
    parts: Vec<Subsystem>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl TryFrom<Vec<Subsystem>> for SystemLayout {
    type Error = Error;

    fn try_from(parts: Vec<Subsystem>) -> Result<Self> {
        Self::new(parts.into_iter().map(|p| (p.label, p.dim)))
    }
}

impl From<SystemLayout> for Vec<Subsystem> {
    fn from(l: SystemLayout) -> Self {
        l.parts
    }
}

impl SystemLayout {
    pub fn new<I, S>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Self::with_cap(parts, DEFAULT_MAX_DIM)
    }

    pub fn with_cap<I, S>(parts: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let parts: Vec<Subsystem> = parts
            .into_iter()
            .map(|(label, dim)| Subsystem { label: label.into(), dim })
            .collect();
        for (i, p) in parts.iter().enumerate() {
            if p.dim == 0 {
                return Err(Error::ZeroDimension(p.label.clone()));
            }
            if parts[..i].iter().any(|q| q.label == p.label) {
                return Err(Error::DuplicateLabel(p.label.clone()));
            }
        }
        let mut total: usize = 1;
        for p in &parts {
            total = total.checked_mul(p.dim).ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
        }
        if total > cap {
            return Err(Error::DimensionCap { dim: total, cap });
        }
        let mut strides = vec![1; parts.len()];
        for i in (0..parts.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * parts[i + 1].dim;
        }
        Ok(Self { parts, strides, total_dim: total })
    }

    /// Canonical `(A, M, B)` layout.
    pub fn tripartite(d_a: usize, d_m: usize, d_b: usize) -> Result<Self> {
        Self::new([(LABEL_A, d_a), (LABEL_M, d_m), (LABEL_B, d_b)])
    }

    /// `(A, B)` layout used for mediator-free marginals.
    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new([(LABEL_A, d_a), (LABEL_B, d_b)])
    }

    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::new([(label, dim)])
    }

    pub fn parts(&self) -> &[Subsystem] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn labels(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.label.as_str()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim).collect()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.parts.iter().any(|p| p.label == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.parts[self.position(label)?].dim)
    }

    /// Product of the dimensions of the named subsystems.
    pub fn dim_of_set(&self, labels: &[&str]) -> Result<usize> {
        labels.iter().try_fold(1, |acc, l| Ok(acc * self.dim_of(l)?))
    }

    /// Sub-layout holding `keep`, in this layout's order.
    pub fn restrict(&self, keep: &[&str]) -> Result<SystemLayout> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("empty subsystem selection".into()));
        }
        for (i, l) in keep.iter().enumerate() {
            self.position(l)?;
            if keep[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        Self::with_cap(
            self.parts
                .iter()
                .filter(|p| keep.contains(&p.label.as_str()))
                .map(|p| (p.label.clone(), p.dim)),
            usize::MAX,
        )
    }

    /// Same subsystems listed in `order`.
    pub fn reordered(&self, order: &[&str]) -> Result<SystemLayout> {
        if order.len() != self.len() {
            return Err(Error::LayoutMismatch(format!(
                "reordering lists {} labels, layout has {}",
                order.len(),
                self.len()
            )));
        }
        let parts = order
            .iter()
            .map(|l| self.dim_of(l).map(|d| (l.to_string(), d)))
            .collect::<Result<Vec<_>>>()?;
        Self::with_cap(parts, usize::MAX)
    }

    /// Whether the layout is `(A, M, B)` exactly, by label order.
    pub fn is_canonical_tripartite(&self) -> bool {
        self.labels() == [LABEL_A, LABEL_M, LABEL_B]
    }

    /// Permutation taking this layout to canonical order: entry `i` is the
    /// position in `self` of the `i`-th canonical subsystem. Only defined for
    /// layouts whose labels are a subset of `{A, M, B}`.
    pub fn canonical_permutation(&self) -> Result<Vec<usize>> {
        let mut perm = Vec::with_capacity(self.len());
        for l in [LABEL_A, LABEL_M, LABEL_B] {
            if let Ok(p) = self.position(l) {
                perm.push(p);
            }
        }
        if perm.len() != self.len() {
            return Err(Error::LayoutMismatch(format!(
                "layout {:?} is not over the canonical labels A, M, B",
                self.labels()
            )));
        }
        Ok(perm)
    }

    /// Same labels and dimensions, in the same order.
    pub fn same_as(&self, other: &SystemLayout) -> bool {
        self.parts == other.parts
    }

    /// Digit of subsystem `pos` in composite index `index`.
    #[inline]
    pub(crate) fn digit(&self, index: usize, pos: usize) -> usize {
        (index / self.strides[pos]) % self.parts[pos].dim
    }

    #[inline]
    pub(crate) fn stride(&self, pos: usize) -> usize {
        self.strides[pos]
    }

    #[cfg(test)]
    pub(crate) fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.len()).map(|p| self.digit(index, p)).collect()
    }

    pub(crate) fn compose(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_dim_is_product() {
        let l = SystemLayout::tripartite(2, 3, 4).unwrap();
        assert_eq!(l.total_dim(), 24);
        assert_eq!(l.labels(), vec!["A", "M", "B"]);
        assert!(l.is_canonical_tripartite());
    }

    #[test]
    fn rejects_duplicate_and_zero() {
        assert!(matches!(
            SystemLayout::new([("A", 2), ("A", 2)]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(SystemLayout::new([("A", 0)]), Err(Error::ZeroDimension(_))));
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            SystemLayout::new([("A", 64), ("B", 128)]),
            Err(Error::DimensionCap { dim: 8192, cap: 4096 })
        ));
    }

    #[test]
    fn digits_round_trip() {
        let l = SystemLayout::tripartite(2, 3, 4).unwrap();
        for i in 0..l.total_dim() {
            assert_eq!(l.compose(&l.digits(i)), i);
        }
        // row-major: A is the most significant digit
        assert_eq!(l.digits(12), vec![1, 0, 0]);
    }

    #[test]
    fn restrict_keeps_layout_order() {
        let l = SystemLayout::tripartite(2, 3, 4).unwrap();
        let r = l.restrict(&["B", "A"]).unwrap();
        assert_eq!(r.labels(), vec!["A", "B"]);
        assert!(l.restrict(&["C"]).is_err());
    }

    #[test]
    fn canonical_permutation_of_shuffled_layout() {
        let l = SystemLayout::new([("B", 2), ("A", 3), ("M", 2)]).unwrap();
        assert_eq!(l.canonical_permutation().unwrap(), vec![1, 2, 0]);
        let odd = SystemLayout::new([("X", 2)]).unwrap();
        assert!(odd.canonical_permutation().is_err());
    }
}
