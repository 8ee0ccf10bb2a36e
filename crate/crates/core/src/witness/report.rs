use serde::{Deserialize, Serialize};

use crate::correlations::{
    capacity, evaluate, total_correlations, Bipartition, Distance, Estimate, MeasureSpec, OptStatus, ReeOptions,
    TotalCorrOptions,
};
use crate::error::{Error, Result};
use crate::tensor::{QState, SystemLayout, LABEL_A, LABEL_B, LABEL_M};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessOptions {
    pub ree: ReeOptions,
    pub total: TotalCorrOptions,
    /// Only decide whether the inequality is violated: the REE solver stops
    /// as soon as its upper estimate drops below the bound, so `lhs` may
    /// then sit above the true value.
    pub decide_only: bool,
}

/// One evaluation of a correlation witness `Q(ρ_t) ≤ capacity + total_corr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Cut `Q` is measured across, e.g. `A:MB`.
    pub cut: String,
    pub lhs: f64,
    pub lhs_status: OptStatus,
    /// How far `lhs` may sit above the true value.
    pub lhs_gap: f64,
    pub capacity: f64,
    pub capacity_status: OptStatus,
    pub total_corr: f64,
    pub total_corr_status: OptStatus,
    pub bound: f64,
    /// `max(0, lhs − bound)`.
    pub violation: f64,
    /// `max(0, violation − lhs_gap)`.
    pub certified_violation: f64,
    pub certified: bool,
    /// `g⁻¹(certified_violation)`: lower bound on the distance, in the
    /// state distance `distance`, between the evolution and the class.
    pub nd_lower_bound: f64,
    pub mediator_dim_assumed: usize,
    pub measure: String,
    pub distance: Distance,
    pub continuity: String,
}

impl WitnessReport {
    /// Weakest optimizer status among the three terms.
    pub fn status(&self) -> OptStatus {
        self.lhs_status.worst(self.capacity_status).worst(self.total_corr_status)
    }
}

struct Parts<'a> {
    cut: &'a Bipartition,
    lhs: Estimate,
    capacity: Estimate,
    total: Estimate,
    mediator_dim: usize,
    spec: &'a MeasureSpec,
}

/// Relative excess treated as round-off rather than a violation.
const ROUNDOFF: f64 = 1e-12;

fn assemble(p: Parts<'_>) -> Result<WitnessReport> {
    let g = p.spec.g.clone().ok_or_else(|| Error::InvalidArgument("continuity function not resolved".into()))?;
    let bound = p.capacity.value + p.total.value;
    let excess = p.lhs.value - bound;
    let violation = if excess > ROUNDOFF * bound.abs().max(1.0) { excess } else { 0.0 };
    let certified_violation = (violation - p.lhs.gap).max(0.0);
    Ok(WitnessReport {
        cut: p.cut.to_string(),
        lhs: p.lhs.value,
        lhs_status: p.lhs.status,
        lhs_gap: p.lhs.gap,
        capacity: p.capacity.value,
        capacity_status: p.capacity.status,
        total_corr: p.total.value,
        total_corr_status: p.total.status,
        bound,
        violation,
        certified_violation,
        certified: certified_violation > 0.0,
        nd_lower_bound: g.inv_clamped(certified_violation),
        mediator_dim_assumed: p.mediator_dim,
        measure: p.spec.id(),
        distance: p.spec.distance,
        continuity: g.describe(),
    })
}

fn tripartite_dims(layout: &SystemLayout) -> Result<(usize, usize, usize)> {
    let mut labels = layout.labels();
    labels.sort_unstable();
    if labels != [LABEL_A, LABEL_B, LABEL_M] {
        return Err(Error::LayoutMismatch(format!("expected subsystems A, M, B, got {:?}", layout.labels())));
    }
    Ok((layout.dim_of(LABEL_A)?, layout.dim_of(LABEL_M)?, layout.dim_of(LABEL_B)?))
}

fn same_layout(a: &QState, b: &QState) -> Result<()> {
    if !a.layout().same_as(b.layout()) {
        return Err(Error::LayoutMismatch(format!(
            "initial state on {:?}, final state on {:?}",
            a.layout().labels(),
            b.layout().labels()
        )));
    }
    Ok(())
}

fn lhs_options(opts: &WitnessOptions, bound: f64) -> ReeOptions {
    ReeOptions { stop_below: opts.decide_only.then_some(bound), ..opts.ree.clone() }
}

/// `Q_{A:MB}(ρ_t) ≤ sup Q_{A:M} + I_{AM:B}(ρ₀)` with the mediator measured.
///
/// `g` is resolved once for the `A:MB` cut and used for both the total
/// correlations and the inversion.
pub fn witness_accessible(
    rho0: &QState,
    rho_t: &QState,
    spec: &MeasureSpec,
    opts: &WitnessOptions,
) -> Result<WitnessReport> {
    same_layout(rho0, rho_t)?;
    let (da, dm, db) = tripartite_dims(rho0.layout())?;
    let g = spec.g_for(da.min(dm * db), da * dm * db);
    g.validate()?;
    let spec = spec.clone().with_g(g);

    let cap = capacity(&spec, da, dm);
    let total = total_correlations(rho0, &Bipartition::new(&[LABEL_A, LABEL_M], &[LABEL_B]), &spec, &opts.total)?;
    let cut = Bipartition::new(&[LABEL_A], &[LABEL_M, LABEL_B]);
    let ree = lhs_options(opts, cap.value + total.value);
    let lhs = evaluate(spec.quantifier, rho_t, &cut, &ree)?;
    assemble(Parts {
        cut: &cut,
        lhs,
        capacity: Estimate { value: cap.value, status: cap.status, gap: 0.0 },
        total,
        mediator_dim: dm,
        spec: &spec,
    })
}

/// `Q_{A:B}(ρ_t) ≤ sup Q_{A:M} + I_{A:B}(ρ₀)` for an unseen mediator of
/// dimension at most `m`.
pub fn witness_inaccessible(
    rho0: &QState,
    rho_t: &QState,
    spec: &MeasureSpec,
    m: usize,
    opts: &WitnessOptions,
) -> Result<WitnessReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("mediator dimension must be at least 1".into()));
    }
    same_layout(rho0, rho_t)?;
    let layout = rho0.layout();
    let mut labels = layout.labels();
    labels.sort_unstable();
    if labels != [LABEL_A, LABEL_B] {
        return Err(Error::LayoutMismatch(format!("expected subsystems A, B, got {:?}", layout.labels())));
    }
    let (da, db) = (layout.dim_of(LABEL_A)?, layout.dim_of(LABEL_B)?);
    // continuity is used on A ⊗ M ⊗ B, so size g for the dilated space
    let g = spec.g_for(da.min(m * db), da * m * db);
    g.validate()?;
    let spec = spec.clone().with_g(g);

    let cut = Bipartition::new(&[LABEL_A], &[LABEL_B]);
    let cap = capacity(&spec, da, m);
    let total = total_correlations(rho0, &cut, &spec, &opts.total)?;
    let ree = lhs_options(opts, cap.value + total.value);
    let lhs = evaluate(spec.quantifier, rho_t, &cut, &ree)?;
    assemble(Parts {
        cut: &cut,
        lhs,
        capacity: Estimate { value: cap.value, status: cap.status, gap: 0.0 },
        total,
        mediator_dim: m,
        spec: &spec,
    })
}

/// Smallest mediator dimension `m` with `log₂ m ≥ e_obs`; every smaller
/// mediator is excluded. `2^e` within `1e-4` of an integer snaps to it, so
/// rounded inputs such as `1.585` give `3`.
pub fn excluded_mediator_dim(e_obs: f64) -> Result<u64> {
    if !(e_obs >= 0.0) {
        return Err(Error::InvalidArgument(format!("observed correlation must be ≥ 0, got {e_obs}")));
    }
    let p = e_obs.exp2();
    if !(p < 2f64.powi(63)) {
        return Err(Error::InvalidArgument(format!("2^{e_obs} does not fit a dimension")));
    }
    let near = p.round();
    let m = if (p - near).abs() <= 1e-4 { near } else { p.ceil() };
    Ok((m as u64).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::ContinuityFn;
    use crate::tensor::linalg::max_entangled_vector;

    #[test]
    fn mediator_dim_examples() {
        assert_eq!(excluded_mediator_dim(5.0).unwrap(), 32);
        assert_eq!(excluded_mediator_dim(0.0).unwrap(), 1);
        assert_eq!(excluded_mediator_dim(1.585).unwrap(), 3);
        assert_eq!(excluded_mediator_dim(1.5).unwrap(), 3);
        assert_eq!(excluded_mediator_dim(3.0f64.log2()).unwrap(), 3);
        assert!(excluded_mediator_dim(-0.1).is_err());
        assert!(excluded_mediator_dim(f64::NAN).is_err());
    }

    fn ab(d: usize) -> SystemLayout {
        SystemLayout::bipartite(d, d).unwrap()
    }

    #[test]
    fn inaccessible_max_entangled() {
        let rho0 = QState::basis(ab(4), &[0, 0]).unwrap();
        let rho_t = QState::from_ket(&max_entangled_vector(4, 4, 4), ab(4)).unwrap();
        let r = witness_inaccessible(&rho0, &rho_t, &MeasureSpec::ree(), 2, &Default::default()).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-4, "{r:?}");
        assert_eq!(r.capacity, 1.0);
        assert!(r.total_corr.abs() < 1e-12);
        assert!((r.violation - 1.0).abs() < 1e-4);
        assert!(r.certified && r.nd_lower_bound > 0.0);

        let r = witness_inaccessible(&rho0, &rho_t, &MeasureSpec::ree(), 4, &Default::default()).unwrap();
        assert_eq!(r.violation, 0.0);
        assert_eq!(r.nd_lower_bound, 0.0);
        assert!(!r.certified);
    }

    #[test]
    fn swap_on_product_is_silent() {
        let rho0 = QState::basis(ab(2), &[0, 1]).unwrap();
        let rho_t = QState::basis(ab(2), &[1, 0]).unwrap();
        let r = witness_inaccessible(&rho0, &rho_t, &MeasureSpec::ree(), 2, &Default::default()).unwrap();
        assert!(r.lhs.abs() < 1e-9 && r.violation == 0.0);
    }

    #[test]
    fn correlated_start_shifts_bound_by_total_correlations() {
        let l = SystemLayout::tripartite(2, 2, 2).unwrap();
        // |0⟩_A ⊗ Bell_{MB}: AM:B carries two bits of mutual information
        let mut psi = crate::tensor::CVector::zeros(8);
        psi[0] = crate::tensor::linalg::c(0.5f64.sqrt(), 0.0);
        psi[3] = crate::tensor::linalg::c(0.5f64.sqrt(), 0.0);
        let rho0 = QState::from_ket(&psi, l.clone()).unwrap();
        let spec = MeasureSpec::new(crate::correlations::Quantifier::MutualInformation, Distance::RelativeEntropy)
            .with_g(ContinuityFn::identity());
        let r = witness_accessible(&rho0, &rho0, &spec, &Default::default()).unwrap();
        assert!((r.total_corr - 2.0).abs() < 1e-12);
        assert!((r.bound - (r.capacity + r.total_corr)).abs() < 1e-15);
        assert_eq!(r.capacity, 2.0);
    }

    #[test]
    fn layouts_are_checked() {
        let rho0 = QState::basis(SystemLayout::tripartite(2, 2, 2).unwrap(), &[0, 0, 0]).unwrap();
        let other = QState::basis(SystemLayout::tripartite(2, 2, 3).unwrap(), &[0, 0, 0]).unwrap();
        assert!(witness_accessible(&rho0, &other, &MeasureSpec::ree(), &Default::default()).is_err());
        let ab0 = QState::basis(ab(2), &[0, 0]).unwrap();
        assert!(witness_inaccessible(&ab0, &ab0, &MeasureSpec::ree(), 0, &Default::default()).is_err());
        assert!(witness_accessible(&ab0, &ab0, &MeasureSpec::ree(), &Default::default()).is_err());
    }
}
