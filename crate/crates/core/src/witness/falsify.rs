//! Numerical search for a decomposition `U ≈ V_second V_first`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::unitary_param::{hermitian_from_params, polar_unitary};
use crate::correlations::OptStatus;
use crate::dynamics::Order;
use crate::error::{Error, Result};
use crate::optim::nelder_mead;
use crate::tensor::linalg::CMatrix;
use crate::tensor::ops::{embed_matrix, partial_trace_matrix, permute_matrix};
use crate::tensor::random::{haar_unitary, stream_rng};
use crate::tensor::spectral::{expm_hermitian_matrix, spectral_norm};
use crate::tensor::{OpKind, QOp, SystemLayout, LABEL_A, LABEL_B, LABEL_M};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FalsifyOptions {
    pub restarts: usize,
    /// Nelder–Mead iteration cap for the spectral-norm refinement.
    pub max_iter: u64,
    pub seed: u64,
}

impl Default for FalsifyOptions {
    fn default() -> Self {
        Self { restarts: 64, max_iter: 3000, seed: 0 }
    }
}

/// Upper edges of the best-distance histogram bins; the last bin is open.
pub const HISTOGRAM_EDGES: [f64; 8] = [1e-6, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct FalsifyResult {
    /// Smallest `‖U − V_second V_first‖_∞` found: an upper bound on the
    /// distance to the decomposable set for `order`.
    pub best_distance: f64,
    pub order: Order,
    pub restarts: usize,
    /// Best distance of each restart, ascending.
    pub distances: Vec<f64>,
    /// Counts per bin of [`HISTOGRAM_EDGES`], plus one overflow bin.
    pub histogram: Vec<usize>,
    pub v_am: QOp,
    pub v_bm: QOp,
    pub status: OptStatus,
}

struct Problem {
    layout: SystemLayout,
    target: CMatrix,
    /// Layouts of the operator applied second and first.
    outer: SystemLayout,
    inner: SystemLayout,
}

impl Problem {
    fn lift(&self, m: &CMatrix, on: &SystemLayout) -> CMatrix {
        embed_matrix(m, &on.dims(), &on.labels(), &self.layout).expect("layouts checked")
    }

    fn product(&self, outer: &CMatrix, inner: &CMatrix) -> CMatrix {
        self.lift(outer, &self.outer) * self.lift(inner, &self.inner)
    }

    fn distance(&self, outer: &CMatrix, inner: &CMatrix) -> f64 {
        spectral_norm(&(&self.target - self.product(outer, inner)))
    }

    /// Partial trace of `x` onto `on`, in `on`'s factor order.
    fn reduce(&self, x: &CMatrix, on: &SystemLayout) -> CMatrix {
        let labels = on.labels();
        let (m, l) = partial_trace_matrix(x, &self.layout, &labels).expect("layouts checked");
        permute_matrix(&m, &l, &labels).expect("same labels").0
    }

    /// Alternating maximization of `Re Tr(U† V_outer V_inner)`.
    fn procrustes(&self, mut outer: CMatrix, mut inner: CMatrix) -> (CMatrix, CMatrix) {
        let mut last = f64::NEG_INFINITY;
        for _ in 0..500 {
            let x = self.lift(&outer, &self.outer).adjoint() * &self.target;
            inner = polar_unitary(&self.reduce(&x, &self.inner));
            let x = &self.target * self.lift(&inner, &self.inner).adjoint();
            outer = polar_unitary(&self.reduce(&x, &self.outer));
            let overlap = (self.target.adjoint() * self.product(&outer, &inner)).trace().re;
            if overlap - last <= 1e-13 * overlap.abs().max(1.0) {
                break;
            }
            last = overlap;
        }
        (outer, inner)
    }

    fn refine(&self, outer: &CMatrix, inner: &CMatrix, max_iter: u64) -> Result<(f64, CMatrix, CMatrix, bool)> {
        let (n1, n2) = (outer.nrows(), inner.nrows());
        let build = |p: &[f64]| {
            let a = outer * expm_hermitian_matrix(&hermitian_from_params(&p[..n1 * n1], n1), -1.0);
            let b = inner * expm_hermitian_matrix(&hermitian_from_params(&p[n1 * n1..], n2), -1.0);
            (a, b)
        };
        let f = |p: &[f64]| {
            let (a, b) = build(p);
            self.distance(&a, &b)
        };
        let x0 = vec![0.0; n1 * n1 + n2 * n2];
        let m = nelder_mead(f, &x0, 0.05, max_iter, 1e-13)?;
        let (a, b) = build(&m.x);
        Ok((m.value, a, b, m.converged))
    }
}

/// Multi-start search for unitaries with `U ≈ V_BM V_AM` (`AmThenBm`) or
/// `U ≈ V_AM V_BM` (`BmThenAm`), minimizing the spectral-norm distance.
///
/// Each restart starts from Haar-random unitaries, runs alternating polar
/// updates on the Frobenius objective, then refines the spectral norm with
/// Nelder–Mead. A small result exhibits a decomposition; a large one is
/// evidence, not proof, that none exists.
pub fn falsify_decomposition(target: &QOp, order: Order, opts: &FalsifyOptions) -> Result<FalsifyResult> {
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    let mut labels = target.layout().labels();
    labels.sort_unstable();
    if labels != [LABEL_A, LABEL_B, LABEL_M] {
        return Err(Error::LayoutMismatch(format!("expected subsystems A, M, B, got {:?}", target.layout().labels())));
    }
    let canonical = target.permuted(&[LABEL_A, LABEL_M, LABEL_B])?;
    let layout = canonical.layout().clone();
    let (da, dm, db) = (layout.dim_of(LABEL_A)?, layout.dim_of(LABEL_M)?, layout.dim_of(LABEL_B)?);
    let am = SystemLayout::new([(LABEL_A, da), (LABEL_M, dm)])?;
    let bm = SystemLayout::new([(LABEL_B, db), (LABEL_M, dm)])?;
    let (outer, inner) = match order {
        Order::AmThenBm => (bm.clone(), am.clone()),
        Order::BmThenAm => (am.clone(), bm.clone()),
    };
    let problem = Problem { layout, target: canonical.into_matrix(), outer, inner };

    let runs: Vec<(f64, CMatrix, CMatrix, bool)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(opts.seed, r as u64);
            let o0 = haar_unitary(&mut rng, problem.outer.total_dim());
            let i0 = haar_unitary(&mut rng, problem.inner.total_dim());
            let (o, i) = problem.procrustes(o0, i0);
            let d = problem.distance(&o, &i);
            if d <= 1e-10 {
                return Ok((d, o, i, true));
            }
            let (d2, o2, i2, conv) = problem.refine(&o, &i, opts.max_iter)?;
            Ok(if d2 < d { (d2, o2, i2, conv) } else { (d, o, i, conv) })
        })
        .collect::<Result<_>>()?;

    let mut distances: Vec<f64> = runs.iter().map(|r| r.0).collect();
    distances.sort_by(f64::total_cmp);
    let mut histogram = vec![0; HISTOGRAM_EDGES.len() + 1];
    for d in &distances {
        let bin = HISTOGRAM_EDGES.iter().position(|e| d <= e).unwrap_or(HISTOGRAM_EDGES.len());
        histogram[bin] += 1;
    }
    let best = runs.into_iter().min_by(|a, b| a.0.total_cmp(&b.0)).expect("at least one restart");
    let (v_outer, v_inner) = (best.1, best.2);
    let (v_am, v_bm) = match order {
        Order::AmThenBm => (v_inner, v_outer),
        Order::BmThenAm => (v_outer, v_inner),
    };
    Ok(FalsifyResult {
        best_distance: best.0,
        order,
        restarts: opts.restarts,
        distances,
        histogram,
        v_am: QOp::new(v_am, am, OpKind::Unitary)?,
        v_bm: QOp::new(v_bm, bm, OpKind::Unitary)?,
        status: if best.3 { OptStatus::Converged } else { OptStatus::BestEffort },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::hamiltonians::{one_way_unitaries, random_commuting_pair};
    use crate::tensor::spectral::expm_hamiltonian;

    fn full() -> SystemLayout {
        SystemLayout::tripartite(2, 2, 2).unwrap()
    }

    #[test]
    fn exact_product_is_found() {
        let (u_am, u_bm) = one_way_unitaries();
        let a = u_am.embed(None, &full()).unwrap();
        let b = u_bm.embed(None, &full()).unwrap();
        // U_AM U_BM: the B–M gate acts first
        let target = a.compose(&b).unwrap();
        let opts = FalsifyOptions { restarts: 4, ..Default::default() };
        let r = falsify_decomposition(&target, Order::BmThenAm, &opts).unwrap();
        assert!(r.best_distance <= 1e-6, "{}", r.best_distance);
        assert_eq!(r.histogram.iter().sum::<usize>(), 4);
        let rebuilt = r.v_am.embed(None, &full()).unwrap().compose(&r.v_bm.embed(None, &full()).unwrap()).unwrap();
        assert!(spectral_norm(&(rebuilt.matrix() - target.matrix())) <= 1e-6);
    }

    #[test]
    fn commuting_pair_either_order() {
        let mut rng = stream_rng(9, 0);
        let (h_am, h_bm) = random_commuting_pair(&mut rng, 2, 2, 2, 1.0).unwrap();
        let a = expm_hamiltonian(&h_am, 0.8).unwrap().embed(None, &full()).unwrap();
        let b = expm_hamiltonian(&h_bm, 0.8).unwrap().embed(None, &full()).unwrap();
        let target = b.compose(&a).unwrap();
        let opts = FalsifyOptions { restarts: 4, ..Default::default() };
        for order in [Order::AmThenBm, Order::BmThenAm] {
            let r = falsify_decomposition(&target, order, &opts).unwrap();
            assert!(r.best_distance <= 1e-6, "{order:?}: {}", r.best_distance);
        }
    }
}
