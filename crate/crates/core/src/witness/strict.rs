//! A map that needs a mediator of dimension exactly `m`.

use serde::{Deserialize, Serialize};

use super::report::{witness_inaccessible, WitnessOptions, WitnessReport};
use crate::correlations::{rel_ent_entanglement, Bipartition, MeasureSpec};
use crate::dynamics::{marginal_of_dilation, DecomposableSpec, DilationSpec, Order};
use crate::error::{Error, Result};
use crate::tensor::linalg::{basis_vector, max_entangled_vector, partial_swap, reflection_between};
use crate::tensor::{QOp, QState, SystemLayout, DEFAULT_MAX_DIM, LABEL_A, LABEL_B, LABEL_M};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictInclusion {
    pub m: usize,
    pub d: usize,
    /// `E_{A:B}` of the output on `|00⟩`.
    pub entanglement: f64,
    /// Witness with an assumed mediator of dimension `m − 1`.
    pub below: WitnessReport,
    /// Witness with an assumed mediator of dimension `m`.
    pub at: WitnessReport,
}

/// The dilation `Tr_M SWAP_BM Λ_AM(· ⊗ |0⟩⟨0|_M)` with `Λ_AM` taking
/// `|00⟩` to a maximally entangled state of Schmidt rank `m`.
pub fn strict_inclusion_dilation(m: usize, d: usize) -> Result<DilationSpec> {
    let am = SystemLayout::new([(LABEL_A, d), (LABEL_M, m)])?;
    let bm = SystemLayout::new([(LABEL_B, d), (LABEL_M, m)])?;
    let entangler = reflection_between(&basis_vector(d * m, 0), &max_entangled_vector(d, m, m));
    let body = DecomposableSpec::from_unitaries(
        &QOp::unitary(entangler, am)?,
        &QOp::unitary(partial_swap(d, m), bm)?,
        Order::AmThenBm,
    )?;
    DilationSpec::new(QState::basis(SystemLayout::single(LABEL_M, m)?, &[0])?, body)
}

/// Runs the construction on `|00⟩` with REE and evaluates the inaccessible
/// witness with caps `m − 1` and `m`.
pub fn strict_inclusion_demo(m: usize, d: usize, opts: &WitnessOptions) -> Result<StrictInclusion> {
    if m < 2 || d < m {
        return Err(Error::InvalidArgument(format!("need m ≥ 2 and d ≥ m, got m = {m}, d = {d}")));
    }
    let total = d.checked_mul(d).and_then(|x| x.checked_mul(m)).unwrap_or(usize::MAX);
    if total > DEFAULT_MAX_DIM {
        return Err(Error::DimensionCap { dim: total, cap: DEFAULT_MAX_DIM });
    }
    let dil = strict_inclusion_dilation(m, d)?;
    let layout = SystemLayout::bipartite(d, d)?;
    let rho0 = QState::basis(layout, &[0, 0])?;
    let rho_t = marginal_of_dilation(&dil, &rho0)?;
    let e = rel_ent_entanglement(&rho_t, &Bipartition::new(&[LABEL_A], &[LABEL_B]), &opts.ree)?;
    let spec = MeasureSpec::ree();
    let below = witness_inaccessible(&rho0, &rho_t, &spec, m - 1, opts)?;
    let at = witness_inaccessible(&rho0, &rho_t, &spec, m, opts)?;
    Ok(StrictInclusion { m, d, entanglement: e.value, below, at })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_mediator() {
        let r = strict_inclusion_demo(2, 4, &Default::default()).unwrap();
        assert!((r.entanglement - 1.0).abs() < 1e-6, "{}", r.entanglement);
        assert!((r.below.violation - 1.0).abs() < 1e-6);
        assert_eq!(r.below.capacity, 0.0);
        assert_eq!(r.at.violation, 0.0);
    }

    #[test]
    fn qutrit_mediator() {
        let r = strict_inclusion_demo(3, 4, &Default::default()).unwrap();
        let expected = 3f64.log2() - 1.0;
        assert!((r.below.violation - expected).abs() < 1e-6, "{}", r.below.violation);
        assert_eq!(r.at.violation, 0.0);
    }

    #[test]
    fn preconditions() {
        assert!(strict_inclusion_demo(1, 4, &Default::default()).is_err());
        assert!(strict_inclusion_demo(3, 2, &Default::default()).is_err());
        assert!(strict_inclusion_demo(8, 32, &Default::default()).is_err());
    }
}
