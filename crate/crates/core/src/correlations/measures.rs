use super::ree::{rel_ent_entanglement, ReeOptions};
use super::spec::Quantifier;
use super::{Bipartition, Estimate};
use crate::error::Result;
use crate::tensor::spectral::trace_norm_hermitian;
use crate::tensor::{vn_entropy, QState};

fn pt_trace_norm(state: &QState, bip: &Bipartition) -> Result<f64> {
    bip.dims(state.layout())?;
    let pt = state.partial_transpose(&bip.x_labels())?;
    Ok(trace_norm_hermitian(&pt).max(1.0))
}

/// `(‖ρ^{T_X}‖₁ − 1) / 2`.
pub fn negativity(state: &QState, bip: &Bipartition) -> Result<f64> {
    Ok((pt_trace_norm(state, bip)? - 1.0) / 2.0)
}

/// `log₂ ‖ρ^{T_X}‖₁` in bits.
pub fn log_negativity(state: &QState, bip: &Bipartition) -> Result<f64> {
    Ok(pt_trace_norm(state, bip)?.log2())
}

/// `S(X) + S(Y) − S(XY)` in bits.
pub fn mutual_information(state: &QState, bip: &Bipartition) -> Result<f64> {
    bip.dims(state.layout())?;
    let sx = vn_entropy(&state.partial_trace(&bip.x_labels())?);
    let sy = vn_entropy(&state.partial_trace(&bip.y_labels())?);
    Ok((sx + sy - vn_entropy(state)).max(0.0))
}

/// Evaluate any quantifier across `bip`.
pub fn evaluate(q: Quantifier, state: &QState, bip: &Bipartition, ree: &ReeOptions) -> Result<Estimate> {
    match q {
        Quantifier::Negativity => negativity(state, bip).map(Estimate::exact),
        Quantifier::LogNegativity => log_negativity(state, bip).map(Estimate::exact),
        Quantifier::MutualInformation => mutual_information(state, bip).map(Estimate::exact),
        Quantifier::RelEntEntanglement => rel_ent_entanglement(state, bip, ree),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::{basis_vector, c, max_entangled_vector, outer, CMatrix};
    use crate::tensor::SystemLayout;

    fn ab() -> Bipartition {
        Bipartition::new(&["A"], &["B"])
    }

    fn bell() -> QState {
        QState::from_ket(&max_entangled_vector(2, 2, 2), SystemLayout::bipartite(2, 2).unwrap()).unwrap()
    }

    #[test]
    fn bell_values() {
        assert!((negativity(&bell(), &ab()).unwrap() - 0.5).abs() < 1e-12);
        assert!((log_negativity(&bell(), &ab()).unwrap() - 1.0).abs() < 1e-12);
        assert!((mutual_information(&bell(), &ab()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn werner_half() {
        // p |Ψ⁻⟩⟨Ψ⁻| + (1 − p) I/4 at p = 1/2
        let s = 0.5_f64.sqrt();
        let mut psi = basis_vector(4, 1) * c(s, 0.0);
        psi[2] = c(-s, 0.0);
        let m = outer(&psi, &psi).scale(0.5) + CMatrix::identity(4, 4).scale(0.125);
        let w = QState::new(m, SystemLayout::bipartite(2, 2).unwrap()).unwrap();
        assert!((negativity(&w, &ab()).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn classical_correlation_one_bit() {
        let m = outer(&basis_vector(4, 0), &basis_vector(4, 0)).scale(0.5)
            + outer(&basis_vector(4, 3), &basis_vector(4, 3)).scale(0.5);
        let s = QState::new(m, SystemLayout::bipartite(2, 2).unwrap()).unwrap();
        assert!((mutual_information(&s, &ab()).unwrap() - 1.0).abs() < 1e-12);
        assert!(negativity(&s, &ab()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn invalid_bipartition_rejected() {
        let l = SystemLayout::tripartite(2, 2, 2).unwrap();
        let s = QState::maximally_mixed(l);
        assert!(negativity(&s, &ab()).is_err());
        assert!(mutual_information(&s, &ab()).is_err());
    }
}
