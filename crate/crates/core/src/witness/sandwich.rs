//! Correlation lower bound against the single-step Trotter upper bound.

use serde::{Deserialize, Serialize};

use super::report::{witness_accessible, WitnessOptions, WitnessReport};
use crate::correlations::{ContinuityFn, Distance, MeasureSpec};
use crate::dynamics::HamiltonianPair;
use crate::error::{Error, Result};
use crate::tensor::spectral::spectral_norm;
use crate::tensor::QState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    /// Witness lower bound on the spectral-distance non-decomposability.
    pub lower: f64,
    /// `2‖U − U_BM U_AM‖_∞`, the `A–M` factor acting first.
    pub upper: f64,
    /// `2‖U − U_AM U_BM‖_∞`, for reference.
    pub upper_reversed: f64,
    pub consistent: bool,
    pub report: WitnessReport,
}

/// Spectral-distance version of `spec`: a user `g` given for trace distance
/// is rescaled by `T ≤ (D/2)·d∞`.
fn spectral_spec(spec: &MeasureSpec, total_dim: usize) -> Result<MeasureSpec> {
    let g = match (&spec.g, spec.distance) {
        (_, Distance::RelativeEntropy) => {
            return Err(Error::InvalidArgument("the sandwich check needs a trace or spectral distance".into()))
        }
        (None, _) => None,
        (Some(g), Distance::Spectral) => Some(g.clone()),
        (Some(g), Distance::Trace) => Some(ContinuityFn::scaled(total_dim as f64 / 2.0, g.clone())),
    };
    let mut out = MeasureSpec::new(spec.quantifier, Distance::Spectral);
    out.g = g;
    Ok(out)
}

/// Evolves `rho0` for time `t` under `H_AM + H_BM` and checks that the
/// accessible-witness lower bound does not exceed the distance to the
/// one-step product `U_BM U_AM`.
pub fn sandwich_check(
    pair: &HamiltonianPair,
    t: f64,
    rho0: &QState,
    spec: &MeasureSpec,
    opts: &WitnessOptions,
) -> Result<SandwichCheck> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    if !rho0.layout().same_as(pair.layout()) {
        return Err(Error::LayoutMismatch(format!(
            "state on {:?}, Hamiltonians on {:?}",
            rho0.layout().labels(),
            pair.layout().labels()
        )));
    }
    let spec = spectral_spec(spec, pair.layout().total_dim())?;
    let u = pair.exact(t);
    let (u_am, u_bm) = (pair.u_am(t), pair.u_bm(t));
    let rho_t = rho0.conjugate(&u)?;
    let report = witness_accessible(rho0, &rho_t, &spec, opts)?;
    let upper = 2.0 * spectral_norm(&(&u - &u_bm * &u_am));
    let upper_reversed = 2.0 * spectral_norm(&(&u - &u_am * &u_bm));
    let lower = report.nd_lower_bound;
    Ok(SandwichCheck { lower, upper, upper_reversed, consistent: lower <= upper + 1e-9, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::hamiltonians::{one_way_hamiltonians, random_commuting_pair};
    use crate::tensor::random::stream_rng;
    use crate::tensor::SystemLayout;

    #[test]
    fn commuting_pair_is_zero_zero() {
        let mut rng = stream_rng(4, 0);
        let (h_am, h_bm) = random_commuting_pair(&mut rng, 2, 2, 2, 1.0).unwrap();
        let pair = HamiltonianPair::new(&h_am, &h_bm).unwrap();
        let rho0 = QState::basis(SystemLayout::tripartite(2, 2, 2).unwrap(), &[0, 0, 0]).unwrap();
        let s = sandwich_check(&pair, 1.0, &rho0, &MeasureSpec::ree(), &Default::default()).unwrap();
        assert!(s.upper < 1e-12 && s.lower == 0.0 && s.consistent, "{s:?}");
    }

    #[test]
    fn one_way_pair_is_consistent() {
        let (h_am, h_bm) = one_way_hamiltonians();
        let pair = HamiltonianPair::new(&h_am, &h_bm).unwrap();
        let rho0 = QState::basis(pair.layout().clone(), &[0, 0, 0]).unwrap();
        let s = sandwich_check(&pair, 1.0, &rho0, &MeasureSpec::log_negativity(), &Default::default()).unwrap();
        assert!(s.consistent && s.upper > 0.1, "{s:?}");
        assert_eq!(s.report.distance, Distance::Spectral);
    }

    #[test]
    fn relative_entropy_rejected() {
        let (h_am, h_bm) = one_way_hamiltonians();
        let pair = HamiltonianPair::new(&h_am, &h_bm).unwrap();
        let rho0 = QState::basis(pair.layout().clone(), &[0, 0, 0]).unwrap();
        let spec = MeasureSpec::new(crate::correlations::Quantifier::RelEntEntanglement, Distance::RelativeEntropy);
        assert!(sandwich_check(&pair, 1.0, &rho0, &spec, &Default::default()).is_err());
    }
}
