use serde::{Deserialize, Serialize};

use super::measures::mutual_information;
use super::spec::{Distance, MeasureSpec};
use super::{Bipartition, Estimate, OptStatus};
use crate::error::Result;
use crate::optim::nelder_mead;
use crate::tensor::linalg::{self, c, CMatrix};
use crate::tensor::random::stream_rng;
use crate::tensor::spectral::trace_distance_matrix;
use crate::tensor::QState;

use rand::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TotalCorrOptions {
    pub max_iter: u64,
    pub restarts: usize,
    pub seed: u64,
    /// Distances below this count as an exact product state.
    pub zero_tol: f64,
}

impl Default for TotalCorrOptions {
    fn default() -> Self {
        Self { max_iter: 4000, restarts: 3, seed: 0, zero_tol: 1e-12 }
    }
}

/// `inf_{σ_X ⊗ σ_Y} g(d(ρ, σ_X ⊗ σ_Y))`.
///
/// Relative-entropy distance has its infimum at the marginals, so the
/// result is `g(I(X:Y))` exactly. For trace and spectral distance a local
/// search over product states starts from the marginals; the value is then
/// an upper estimate, which only loosens a witness bound built on it.
pub fn total_correlations(
    state: &QState,
    bip: &Bipartition,
    spec: &MeasureSpec,
    opts: &TotalCorrOptions,
) -> Result<Estimate> {
    let (dx, dy) = bip.dims(state.layout())?;
    let g = spec.g_for(dx.min(dy), dx * dy);
    g.validate()?;
    if spec.distance == Distance::RelativeEntropy {
        // S(ρ‖ρ_X ⊗ ρ_Y) is the mutual information
        let mi = mutual_information(state, bip)?;
        if mi <= opts.zero_tol {
            return Ok(Estimate::exact(0.0));
        }
        return Ok(Estimate::exact(g.eval(mi.min(g.domain_max()))?));
    }
    let (rho, _, _) = bip.as_bipartite(state)?;
    let rx = state.partial_trace(&bip.x_labels())?;
    let ry = state.partial_trace(&bip.y_labels())?;
    // partial_trace keeps layout order, so reorder the X and Y sides as listed
    let rx = rx.permuted(&bip.x_labels())?.into_matrix();
    let ry = ry.permuted(&bip.y_labels())?.into_matrix();

    let dist = |s: &CMatrix| match spec.distance {
        Distance::Trace => trace_distance_matrix(&rho, s),
        _ => linalg::eigvalsh(&(&rho - s)).into_iter().fold(0.0_f64, |m, l| m.max(l.abs())),
    };
    let d0 = dist(&linalg::kron(&rx, &ry));
    if d0 <= opts.zero_tol {
        return Ok(Estimate::exact(g.eval(0.0)?));
    }

    let x_root = linalg::hermitian_function(&rx, |l| c(l.max(0.0).sqrt(), 0.0));
    let y_root = linalg::hermitian_function(&ry, |l| c(l.max(0.0).sqrt(), 0.0));
    let mut start = flatten(&x_root);
    start.extend(flatten(&y_root));
    let objective = |p: &[f64]| {
        let sx = density_from(&p[..2 * dx * dx], dx);
        let sy = density_from(&p[2 * dx * dx..], dy);
        match (sx, sy) {
            (Some(sx), Some(sy)) => dist(&linalg::kron(&sx, &sy)),
            _ => f64::INFINITY,
        }
    };

    let mut best = d0;
    let mut all_converged = true;
    for r in 0..opts.restarts.max(1) {
        let mut rng = stream_rng(opts.seed, r as u64);
        let x0: Vec<f64> = if r == 0 {
            start.clone()
        } else {
            start.iter().map(|v| v + 0.2 * (rng.random::<f64>() - 0.5)).collect()
        };
        let m = nelder_mead(objective, &x0, 0.1, opts.max_iter, 1e-12)?;
        // polish from the best point with a smaller simplex
        let m = nelder_mead(objective, &m.x, 0.01, opts.max_iter, 1e-13)?;
        all_converged &= m.converged;
        best = best.min(m.value);
    }
    let max = g.domain_max();
    Ok(Estimate {
        value: g.eval(best.min(max))?,
        status: if all_converged { OptStatus::Converged } else { OptStatus::BestEffort },
        gap: 0.0,
    })
}

fn flatten(m: &CMatrix) -> Vec<f64> {
    m.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// `GG† / Tr` for `G` read column-major from `p`.
fn density_from(p: &[f64], d: usize) -> Option<CMatrix> {
    let g = CMatrix::from_fn(d, d, |i, j| {
        let k = 2 * (j * d + i);
        c(p[k], p[k + 1])
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    (tr > 1e-300).then(|| m.unscale(tr))
}
