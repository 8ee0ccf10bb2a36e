//! Correlation quantifiers, the total-correlation functional, continuity
//! functions and correlation capacities.

mod audit;
mod continuity;
mod measures;
mod total;
pub mod ree;
mod spec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, QState, SystemLayout};

pub use audit::{audit_continuity, AuditOptions, AuditReport};
pub use continuity::ContinuityFn;
pub use measures::{evaluate, log_negativity, mutual_information, negativity};
pub use ree::{rel_ent_entanglement, ReeOptions};
pub use total::{total_correlations, TotalCorrOptions};
pub use spec::{capacity, capacity_search, Capacity, Distance, MeasureSpec, Quantifier};


/// How much an optimized quantity can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptStatus {
    /// Closed form or direct evaluation.
    Exact,
    /// Iterative optimum with its gap estimate within tolerance.
    Converged,
    /// Iteration budget or stall reached before the gap closed.
    BestEffort,
}

impl OptStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            OptStatus::Exact => "exact",
            OptStatus::Converged => "converged",
            OptStatus::BestEffort => "best-effort",
        }
    }

    /// The weaker of two statuses.
    pub fn worst(self, other: OptStatus) -> OptStatus {
        use OptStatus::*;
        match (self, other) {
            (BestEffort, _) | (_, BestEffort) => BestEffort,
            (Converged, _) | (_, Converged) => Converged,
            _ => Exact,
        }
    }
}

/// A value together with its optimizer status and gap estimate.
///
/// For minimizations the value is an upper estimate and `gap` bounds how far
/// above the true optimum it may sit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub status: OptStatus,
    pub gap: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, status: OptStatus::Exact, gap: 0.0 }
    }
}

/// A split `X : Y` of a layout's labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl Bipartition {
    pub fn new(x: &[&str], y: &[&str]) -> Self {
        Self {
            x: x.iter().map(|s| s.to_string()).collect(),
            y: y.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn x_labels(&self) -> Vec<&str> {
        self.x.iter().map(String::as_str).collect()
    }

    pub fn y_labels(&self) -> Vec<&str> {
        self.y.iter().map(String::as_str).collect()
    }

    /// Check the split covers `layout` exactly; returns `(d_X, d_Y)`.
    pub fn dims(&self, layout: &SystemLayout) -> Result<(usize, usize)> {
        if self.x.is_empty() || self.y.is_empty() {
            return Err(Error::InvalidBipartition("both sides must be nonempty".into()));
        }
        for l in self.x.iter().chain(&self.y) {
            if !layout.contains(l) {
                return Err(Error::InvalidBipartition(format!("label `{l}` not in layout")));
            }
        }
        if self.x.iter().any(|l| self.y.contains(l)) {
            return Err(Error::InvalidBipartition("sides overlap".into()));
        }
        let mut all: Vec<&str> = self.x.iter().chain(&self.y).map(String::as_str).collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != layout.len() || all.len() != self.x.len() + self.y.len() {
            return Err(Error::InvalidBipartition(format!(
                "{:?} : {:?} does not cover layout {:?}",
                self.x,
                self.y,
                layout.labels()
            )));
        }
        Ok((layout.dim_of_set(&self.x_labels())?, layout.dim_of_set(&self.y_labels())?))
    }

    /// State matrix reordered as `X ⊗ Y`, with the two side dimensions.
    pub(crate) fn as_bipartite(&self, state: &QState) -> Result<(CMatrix, usize, usize)> {
        let (dx, dy) = self.dims(state.layout())?;
        let order: Vec<&str> = self.x_labels().into_iter().chain(self.y_labels()).collect();
        let permuted = state.permuted(&order)?;
        Ok((permuted.into_matrix(), dx, dy))
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.x.concat(), self.y.concat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartition_validation() {
        let l = SystemLayout::tripartite(2, 3, 4).unwrap();
        assert_eq!(Bipartition::new(&["A"], &["M", "B"]).dims(&l).unwrap(), (2, 12));
        assert_eq!(Bipartition::new(&["B", "A"], &["M"]).dims(&l).unwrap(), (8, 3));
        assert!(Bipartition::new(&["A"], &["B"]).dims(&l).is_err());
        assert!(Bipartition::new(&["A", "M"], &["M", "B"]).dims(&l).is_err());
        assert!(Bipartition::new(&[], &["A", "M", "B"]).dims(&l).is_err());
        assert_eq!(Bipartition::new(&["A", "M"], &["B"]).to_string(), "AM:B");
    }

    #[test]
    fn status_ordering() {
        use OptStatus::*;
        assert_eq!(Exact.worst(Converged), Converged);
        assert_eq!(BestEffort.worst(Exact), BestEffort);
        assert_eq!(Exact.worst(Exact), Exact);
    }
}
