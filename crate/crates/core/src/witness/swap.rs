//! Probing two-qubit dilations against the SWAP.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::unitary_param::{density_from_params, hermitian_from_params};
use crate::correlations::OptStatus;
use crate::dynamics::{marginal_of_dilation, DecomposableSpec, DilationSpec, KrausMap, Order};
use crate::error::{Error, Result};
use crate::optim::nelder_mead;
use crate::tensor::random::{haar_unitary, random_density, random_kraus, stream_rng};
use crate::tensor::spectral::{expm_hermitian_matrix, trace_distance_matrix};
use crate::tensor::{QState, SystemLayout, LABEL_A, LABEL_B, LABEL_M};

/// AB map the dilation is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeTarget {
    Swap,
    Identity,
}

/// Largest trace distance between a probed marginal of the dilation's output
/// and the target's.
///
/// For `AmThenBm` the probes are `|00⟩, |01⟩` and the `A` marginal is read;
/// `BmThenAm` uses the mirrored probes `|00⟩, |10⟩` and the `B` marginal.
/// Against the SWAP the result is at least 1/2 for every dilation.
pub fn swap_dilation_test(dil: &DilationSpec, target: ProbeTarget) -> Result<f64> {
    let (da, _, db) = dil.body().dims();
    if (da, db) != (2, 2) {
        return Err(Error::DimensionMismatch(format!("SWAP probes need d_A = d_B = 2, got {da} and {db}")));
    }
    let layout = SystemLayout::bipartite(2, 2)?;
    let (probes, read): ([[usize; 2]; 2], &str) = match dil.body().order() {
        Order::AmThenBm => ([[0, 0], [0, 1]], LABEL_A),
        Order::BmThenAm => ([[0, 0], [1, 0]], LABEL_B),
    };
    let mut worst: f64 = 0.0;
    for p in probes {
        let input = QState::basis(layout.clone(), &p)?;
        let out = marginal_of_dilation(dil, &input)?.partial_trace(&[read])?;
        let expected = match target {
            ProbeTarget::Swap => QState::basis(layout.clone(), &[p[1], p[0]])?,
            ProbeTarget::Identity => input,
        };
        let expected = expected.partial_trace(&[read])?;
        worst = worst.max(trace_distance_matrix(out.matrix(), expected.matrix()));
    }
    Ok(worst)
}

fn two_qubit_body(m: usize) -> Result<(SystemLayout, SystemLayout, SystemLayout)> {
    if m == 0 {
        return Err(Error::InvalidArgument("mediator dimension must be at least 1".into()));
    }
    Ok((
        SystemLayout::new([(LABEL_A, 2), (LABEL_M, m)])?,
        SystemLayout::new([(LABEL_B, 2), (LABEL_M, m)])?,
        SystemLayout::single(LABEL_M, m)?,
    ))
}

/// Dilation of a two-qubit map with random Kraus maps (1 to 4 operators) on
/// `AM` and `BM` and a random mediator state of dimension `m`.
pub fn random_dilation<R: Rng + ?Sized>(rng: &mut R, m: usize, order: Order) -> Result<DilationSpec> {
    let (am, bm, ml) = two_qubit_body(m)?;
    let k1 = rng.random_range(1..=4);
    let k2 = rng.random_range(1..=4);
    let first = KrausMap::new(random_kraus(rng, 2 * m, k1), am)?;
    let second = KrausMap::new(random_kraus(rng, 2 * m, k2), bm)?;
    let rank = rng.random_range(1..=m);
    let sigma = QState::new(random_density(rng, m, rank), ml)?;
    DilationSpec::new(sigma, DecomposableSpec::new(first, second, order)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwapSearchOptions {
    pub max_iter: u64,
    pub seed: u64,
}

impl Default for SwapSearchOptions {
    fn default() -> Self {
        Self { max_iter: 1500, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapSearch {
    /// Smallest SWAP deviation reached.
    pub deviation: f64,
    pub dilation: DilationSpec,
    pub status: OptStatus,
}

/// Nelder–Mead over unitary dilations with mediator dimension `m`, trying to
/// drive [`swap_dilation_test`] as low as possible.
pub fn adversarial_swap_search(m: usize, order: Order, opts: &SwapSearchOptions) -> Result<SwapSearch> {
    let (am, bm, ml) = two_qubit_body(m)?;
    let n = 2 * m;
    let mut rng = stream_rng(opts.seed, m as u64);
    let u0 = haar_unitary(&mut rng, n);
    let v0 = haar_unitary(&mut rng, n);
    let build = |p: &[f64]| -> Result<DilationSpec> {
        let (pu, rest) = p.split_at(n * n);
        let (pv, ps) = rest.split_at(n * n);
        let u = &u0 * expm_hermitian_matrix(&hermitian_from_params(pu, n), -1.0);
        let v = &v0 * expm_hermitian_matrix(&hermitian_from_params(pv, n), -1.0);
        let sigma = density_from_params(ps, m).ok_or_else(|| Error::Optimizer("degenerate mediator state".into()))?;
        let body = DecomposableSpec::new(KrausMap::new(vec![u], am.clone())?, KrausMap::new(vec![v], bm.clone())?, order)?;
        DilationSpec::new(QState::from_parts_unchecked(sigma, ml.clone()), body)
    };
    let cost = |p: &[f64]| build(p).and_then(|d| swap_dilation_test(&d, ProbeTarget::Swap)).unwrap_or(f64::INFINITY);

    let mut x0 = vec![0.0; 2 * n * n + 2 * m * m];
    for v in &mut x0[2 * n * n..] {
        *v = rng.random::<f64>() - 0.5;
    }
    let best = nelder_mead(cost, &x0, 0.3, opts.max_iter, 1e-12)?;
    let dilation = build(&best.x)?;
    let deviation = swap_dilation_test(&dilation, ProbeTarget::Swap)?;
    Ok(SwapSearch {
        deviation,
        dilation,
        status: if best.converged { OptStatus::Converged } else { OptStatus::BestEffort },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::partial_swap;
    use crate::tensor::QOp;

    fn swap_body(m: usize) -> DecomposableSpec {
        let (am, bm, _) = two_qubit_body(m).unwrap();
        let s_am = QOp::unitary(partial_swap(2, m), am).unwrap();
        let s_bm = QOp::unitary(partial_swap(2, m), bm).unwrap();
        DecomposableSpec::from_unitaries(&s_am, &s_bm, Order::AmThenBm).unwrap()
    }

    #[test]
    fn swap_swap_dilation_misses_by_half() {
        let sigma = QState::basis(SystemLayout::single(LABEL_M, 2).unwrap(), &[0]).unwrap();
        let dil = DilationSpec::new(sigma, swap_body(2)).unwrap();
        // A always ends in σ_M = |0⟩, so the |01⟩ probe is off by one
        let d = swap_dilation_test(&dil, ProbeTarget::Swap).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn identity_negative_control() {
        let (am, bm, ml) = two_qubit_body(3).unwrap();
        let body = DecomposableSpec::new(KrausMap::identity(am), KrausMap::identity(bm), Order::AmThenBm).unwrap();
        let dil = DilationSpec::new(QState::basis(ml, &[1]).unwrap(), body).unwrap();
        assert!(swap_dilation_test(&dil, ProbeTarget::Identity).unwrap() < 1e-14);
        assert!(swap_dilation_test(&dil, ProbeTarget::Swap).unwrap() >= 0.5);
    }

    #[test]
    fn random_dilations_both_orders() {
        let mut rng = stream_rng(3, 0);
        for k in 0..12 {
            let order = if k % 2 == 0 { Order::AmThenBm } else { Order::BmThenAm };
            let dil = random_dilation(&mut rng, 2 + k % 3, order).unwrap();
            assert!(swap_dilation_test(&dil, ProbeTarget::Swap).unwrap() >= 0.5 - 1e-12);
        }
    }

    #[test]
    fn adversary_stays_above_half() {
        let r = adversarial_swap_search(2, Order::AmThenBm, &SwapSearchOptions { max_iter: 300, seed: 1 }).unwrap();
        assert!(r.deviation >= 0.5 - 1e-9 && r.deviation < 1.0 + 1e-12, "{}", r.deviation);
    }

    #[test]
    fn wrong_dimensions_rejected() {
        let l = |d| SystemLayout::new([(LABEL_A, d), (LABEL_M, 2)]).unwrap();
        let bm = SystemLayout::new([(LABEL_B, 2), (LABEL_M, 2)]).unwrap();
        let body = DecomposableSpec::new(KrausMap::identity(l(3)), KrausMap::identity(bm), Order::AmThenBm).unwrap();
        let dil = DilationSpec::new(QState::basis(SystemLayout::single(LABEL_M, 2).unwrap(), &[0]).unwrap(), body).unwrap();
        assert!(swap_dilation_test(&dil, ProbeTarget::Swap).is_err());
    }
}
