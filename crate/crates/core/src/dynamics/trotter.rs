use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::linalg::{self, CMatrix};
use crate::tensor::spectral::{expm_hermitian_matrix, spectral_norm};
use crate::tensor::{OpKind, QOp, SystemLayout, LABEL_A, LABEL_B, LABEL_M};

/// Default cap on the number of Trotter steps `min_steps` will try.
pub const DEFAULT_STEP_CAP: u64 = 1 << 20;

const HERMITIAN_TOL: f64 = 1e-8;

/// A pair `H_AM`, `H_BM` lifted onto the canonical `(A, M, B)` layout.
#[derive(Debug, Clone)]
pub struct HamiltonianPair {
    layout: SystemLayout,
    am: CMatrix,
    bm: CMatrix,
}

impl HamiltonianPair {
    pub fn new(h_am: &QOp, h_bm: &QOp) -> Result<Self> {
        check_subset(h_am, [LABEL_A, LABEL_M])?;
        check_subset(h_bm, [LABEL_B, LABEL_M])?;
        for h in [h_am, h_bm] {
            let dev = linalg::hermiticity_error(h.matrix());
            if dev > HERMITIAN_TOL {
                return Err(Error::InvalidOperator { expected: "Hermitian", deviation: dev });
            }
        }
        let dm = h_am.layout().dim_of(LABEL_M)?;
        if h_bm.layout().dim_of(LABEL_M)? != dm {
            return Err(Error::DimensionMismatch("H_AM and H_BM disagree on the mediator dimension".into()));
        }
        let layout = SystemLayout::tripartite(h_am.layout().dim_of(LABEL_A)?, dm, h_bm.layout().dim_of(LABEL_B)?)?;
        let am = h_am.embed(None, &layout)?.into_matrix();
        let bm = h_bm.embed(None, &layout)?.into_matrix();
        Ok(Self { layout, am, bm })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    /// `H_AM` on the full layout.
    pub fn h_am(&self) -> &CMatrix {
        &self.am
    }

    pub fn h_bm(&self) -> &CMatrix {
        &self.bm
    }

    pub fn total(&self) -> CMatrix {
        &self.am + &self.bm
    }

    /// `exp(−itH)` for `H = H_AM + H_BM`.
    pub fn exact(&self, t: f64) -> CMatrix {
        expm_hermitian_matrix(&self.total(), t)
    }

    pub fn u_am(&self, t: f64) -> CMatrix {
        expm_hermitian_matrix(&self.am, t)
    }

    pub fn u_bm(&self, t: f64) -> CMatrix {
        expm_hermitian_matrix(&self.bm, t)
    }

    /// `(exp(−i(t/r)H_AM) exp(−i(t/r)H_BM))^r`.
    pub fn trotter(&self, t: f64, r: u64) -> Result<CMatrix> {
        if r == 0 {
            return Err(Error::InvalidArgument("Trotter step count must be at least 1".into()));
        }
        let dt = t / r as f64;
        Ok(matrix_power(&(self.u_am(dt) * self.u_bm(dt)), r))
    }

    pub fn commutator_norm(&self) -> f64 {
        spectral_norm(&linalg::commutator(&self.am, &self.bm))
    }

    pub fn trotter_error(&self, t: f64, r: u64) -> Result<f64> {
        Ok(spectral_norm(&(self.exact(t) - self.trotter(t, r)?)))
    }

    /// See [`min_steps`].
    pub fn min_steps(&self, t: f64, eps: f64, cap: u64) -> Result<StepCount> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("target error must be positive, got {eps}")));
        }
        if cap == 0 {
            return Err(Error::InvalidArgument("step cap must be at least 1".into()));
        }
        let exact = self.exact(t);
        let error_at = |r: u64| -> Result<f64> { Ok(spectral_norm(&(&exact - self.trotter(t, r)?))) };
        let r_bound = first_order_steps(t, self.commutator_norm(), eps);

        let mut hi = 1;
        let mut err_hi = error_at(1)?;
        if err_hi <= eps {
            return Ok(StepCount { steps: 1, error: err_hi, r_bound });
        }
        loop {
            if hi >= cap {
                return Err(Error::StepCapExceeded { cap, eps, error: err_hi });
            }
            let next = (hi * 2).min(cap);
            let e = error_at(next)?;
            if e <= eps {
                let mut lo = hi;
                hi = next;
                err_hi = e;
                // invariant: error(lo) > eps, error(hi) ≤ eps
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    let e = error_at(mid)?;
                    if e <= eps {
                        hi = mid;
                        err_hi = e;
                    } else {
                        lo = mid;
                    }
                }
                return Ok(StepCount { steps: hi, error: err_hi, r_bound });
            }
            hi = next;
            err_hi = e;
        }
    }
}

fn check_subset(h: &QOp, want: [&str; 2]) -> Result<()> {
    let mut own = h.layout().labels();
    own.sort_unstable();
    let mut w = want.to_vec();
    w.sort_unstable();
    if own != w {
        return Err(Error::LayoutMismatch(format!("operator acts on {:?}, expected {:?}", h.layout().labels(), want)));
    }
    Ok(())
}

fn matrix_power(m: &CMatrix, mut r: u64) -> CMatrix {
    let mut base = m.clone();
    let mut acc = linalg::identity(m.nrows());
    while r > 0 {
        if r & 1 == 1 {
            acc = &acc * &base;
        }
        r >>= 1;
        if r > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// `⌈t²‖[H_AM, H_BM]‖ / (2ε)⌉`, at least 1.
pub fn first_order_steps(t: f64, comm_norm: f64, eps: f64) -> u64 {
    let r = (t * t * comm_norm / (2.0 * eps)).ceil();
    if r.is_finite() {
        (r as u64).max(1)
    } else {
        u64::MAX
    }
}

/// Result of [`min_steps`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepCount {
    /// Smallest `r` found with error at most `ε`.
    pub steps: u64,
    /// Trotter error at `steps`.
    pub error: f64,
    /// First-order estimate `⌈t²‖[H_AM, H_BM]‖ / (2ε)⌉`.
    pub r_bound: u64,
}

/// Trotter product on the canonical `(A, M, B)` layout.
pub fn trotter_unitary(h_am: &QOp, h_bm: &QOp, t: f64, r: u64) -> Result<QOp> {
    let pair = HamiltonianPair::new(h_am, h_bm)?;
    let u = pair.trotter(t, r)?;
    QOp::new(u, pair.layout, OpKind::Unitary)
}

/// `‖[H_AM, H_BM]‖_∞` on the full space.
pub fn commutator_norm(h_am: &QOp, h_bm: &QOp) -> Result<f64> {
    Ok(HamiltonianPair::new(h_am, h_bm)?.commutator_norm())
}

/// `‖exp(−itH) − trotter_unitary(H_AM, H_BM, t, r)‖_∞`.
pub fn trotter_error(h_am: &QOp, h_bm: &QOp, t: f64, r: u64) -> Result<f64> {
    HamiltonianPair::new(h_am, h_bm)?.trotter_error(t, r)
}

/// Smallest step count with Trotter error at most `eps`, by doubling and
/// then bisection, up to [`DEFAULT_STEP_CAP`].
pub fn min_steps(h_am: &QOp, h_bm: &QOp, t: f64, eps: f64) -> Result<StepCount> {
    HamiltonianPair::new(h_am, h_bm)?.min_steps(t, eps, DEFAULT_STEP_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::hamiltonians::{one_way_hamiltonians, random_commuting_pair, random_pair};
    use crate::tensor::linalg::max_abs;
    use crate::tensor::random::stream_rng;
    use std::f64::consts::PI;

    #[test]
    fn one_way_commutator_norm() {
        let (h_am, h_bm) = one_way_hamiltonians();
        let n = commutator_norm(&h_am, &h_bm).unwrap();
        assert!((n - PI * PI / 8.0).abs() < 1e-12, "{n}");
        let n2 = commutator_norm(&h_am.scaled(2.0), &h_bm.scaled(0.5)).unwrap();
        assert!((n2 - n).abs() < 1e-12);
        let n3 = commutator_norm(&h_am.scaled(3.0), &h_bm.scaled(0.5)).unwrap();
        assert!((n3 - 1.5 * n).abs() < 1e-12);
    }

    #[test]
    fn commuting_pair_is_exact() {
        let mut rng = stream_rng(1, 0);
        let (h_am, h_bm) = random_commuting_pair(&mut rng, 2, 3, 2, 1.0).unwrap();
        assert!(commutator_norm(&h_am, &h_bm).unwrap() < 1e-12);
        for t in [0.3, 1.0, 2.0] {
            assert!(trotter_error(&h_am, &h_bm, t, 1).unwrap() < 1e-9);
        }
        let s = min_steps(&h_am, &h_bm, 1.0, 1e-6).unwrap();
        assert_eq!(s.steps, 1);
    }

    #[test]
    fn single_step_bound_and_monotone_sweep() {
        let (h_am, h_bm) = one_way_hamiltonians();
        let pair = HamiltonianPair::new(&h_am, &h_bm).unwrap();
        let e1 = pair.trotter_error(1.0, 1).unwrap();
        assert!(e1 <= 0.5 * PI * PI / 8.0 + 1e-12, "{e1}");
        for t in [0.25, 0.5, 1.0, 1.5] {
            let mut prev = f64::INFINITY;
            for r in [1, 4, 16, 64] {
                let e = pair.trotter_error(t, r).unwrap();
                assert!(e <= prev + 1e-12, "t {t} r {r}: {e} > {prev}");
                prev = e;
            }
        }
    }

    #[test]
    fn trotter_product_is_unitary() {
        let mut rng = stream_rng(2, 0);
        let (h_am, h_bm) = random_pair(&mut rng, 2, 2, 3, 1.0).unwrap();
        let u = trotter_unitary(&h_am, &h_bm, 1.3, 7).unwrap();
        assert!(linalg::unitarity_error(u.matrix()) < 1e-9);
        assert_eq!(u.layout().labels(), vec!["A", "M", "B"]);
    }

    #[test]
    fn power_matches_repeated_product() {
        let mut rng = stream_rng(3, 0);
        let (h_am, h_bm) = random_pair(&mut rng, 2, 2, 2, 1.0).unwrap();
        let pair = HamiltonianPair::new(&h_am, &h_bm).unwrap();
        let step = pair.u_am(0.1) * pair.u_bm(0.1);
        let mut direct = linalg::identity(8);
        for _ in 0..13 {
            direct = &direct * &step;
        }
        assert!(max_abs(&(pair.trotter(1.3, 13).unwrap() - direct)) < 1e-12);
    }

    #[test]
    fn min_steps_is_minimal() {
        let (h_am, h_bm) = one_way_hamiltonians();
        let pair = HamiltonianPair::new(&h_am, &h_bm).unwrap();
        let s = pair.min_steps(1.0, 1e-2, DEFAULT_STEP_CAP).unwrap();
        assert!(s.error <= 1e-2);
        assert!(pair.trotter_error(1.0, s.steps - 1).unwrap() > 1e-2);
        assert!(s.r_bound >= 1);
    }

    #[test]
    fn step_cap_is_reported() {
        let (h_am, h_bm) = one_way_hamiltonians();
        let pair = HamiltonianPair::new(&h_am, &h_bm).unwrap();
        assert!(matches!(pair.min_steps(1.0, 1e-9, 64), Err(Error::StepCapExceeded { cap: 64, .. })));
        assert!(pair.min_steps(1.0, 0.0, 64).is_err());
        assert!(pair.trotter(1.0, 0).is_err());
    }

    #[test]
    fn wrong_subsets_rejected() {
        let (h_am, h_bm) = one_way_hamiltonians();
        assert!(commutator_norm(&h_bm, &h_am).is_err());
    }
}
