//! Sampled lower estimates of the operator distance between two maps.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maps::QuantumMap;
use crate::correlations::{Distance, OptStatus};
use crate::error::{Error, Result};
use crate::tensor::linalg::CVector;
use crate::tensor::random::{random_density, random_ket, stream_rng};
use crate::tensor::spectral::{spectral_norm, trace_distance_matrix};
use crate::tensor::{QState, SystemLayout};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapDistanceOptions {
    pub samples: usize,
    /// Hill-climbing steps over pure inputs from the best sample.
    pub refine_steps: usize,
    pub seed: u64,
}

impl Default for MapDistanceOptions {
    fn default() -> Self {
        Self { samples: 512, refine_steps: 64, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapDistance {
    /// Largest `d(Λ₁(ρ), Λ₂(ρ))` found; a lower estimate of the supremum.
    pub value: f64,
    pub samples: usize,
    pub status: OptStatus,
}

/// `sup_ρ d(Λ₁(ρ), Λ₂(ρ))` estimated over random pure and mixed inputs on
/// `layout`, followed by a local search over pure inputs.
pub fn sampled_map_distance(
    a: &dyn QuantumMap,
    b: &dyn QuantumMap,
    layout: &SystemLayout,
    distance: Distance,
    opts: &MapDistanceOptions,
) -> Result<MapDistance> {
    if distance == Distance::RelativeEntropy {
        return Err(Error::InvalidArgument("map distance supports trace and spectral distance only".into()));
    }
    if opts.samples == 0 {
        return Err(Error::InvalidArgument("map distance needs at least one sample".into()));
    }
    let d = layout.total_dim();
    let gap = |rho: QState| -> Result<f64> {
        let x = a.apply(&rho)?;
        let y = b.apply(&rho)?;
        Ok(match distance {
            Distance::Trace => trace_distance_matrix(x.matrix(), y.matrix()),
            _ => spectral_norm(&(x.matrix() - y.matrix())),
        })
    };
    let pure = |psi: &CVector| QState::from_ket(psi, layout.clone());

    let sampled: Vec<(f64, Option<CVector>)> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(opts.seed, i as u64);
            if i % 2 == 0 {
                let psi = random_ket(&mut rng, d);
                Ok((gap(pure(&psi)?)?, Some(psi)))
            } else {
                let rank = 1 + rng.random_range(0..d);
                let rho = QState::from_parts_unchecked(random_density(&mut rng, d, rank), layout.clone());
                Ok((gap(rho)?, None))
            }
        })
        .collect::<Result<_>>()?;

    let mut best = sampled.iter().map(|s| s.0).fold(0.0, f64::max);
    // the supremum of a convex function sits on pure states
    let start = sampled
        .iter()
        .filter_map(|(v, p)| p.as_ref().map(|p| (*v, p)))
        .max_by(|x, y| x.0.total_cmp(&y.0));
    if let Some((mut val, psi)) = start {
        let mut psi = psi.clone();
        let mut rng = stream_rng(opts.seed, opts.samples as u64);
        let mut step = 0.3;
        for _ in 0..opts.refine_steps {
            let kick = random_ket(&mut rng, d);
            let cand = &psi + kick.scale(step);
            let cand = cand.unscale(cand.norm());
            let v = gap(pure(&cand)?)?;
            if v > val {
                val = v;
                psi = cand;
                step = (step * 1.5).min(1.0);
            } else {
                step = (step * 0.7).max(1e-4);
            }
        }
        best = best.max(val);
    }
    Ok(MapDistance { value: best, samples: opts.samples, status: OptStatus::BestEffort })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::random::haar_unitary;
    use crate::tensor::spectral::operator_distance;
    use crate::tensor::QOp;

    #[test]
    fn unitary_pairs_respect_twice_operator_norm() {
        let layout = SystemLayout::bipartite(2, 2).unwrap();
        let mut rng = stream_rng(7, 0);
        for k in 0..5 {
            let u = QOp::unitary(haar_unitary(&mut rng, 4), layout.clone()).unwrap();
            let v = QOp::unitary(haar_unitary(&mut rng, 4), layout.clone()).unwrap();
            let opts = MapDistanceOptions { samples: 64, seed: k, ..Default::default() };
            let d = sampled_map_distance(&u, &v, &layout, Distance::Spectral, &opts).unwrap();
            let bound = 2.0 * operator_distance(u.matrix(), v.matrix()).unwrap();
            assert!(d.value <= bound + 1e-12 && d.value > 0.0, "{} vs {bound}", d.value);
        }
    }

    #[test]
    fn identical_maps_are_zero() {
        let layout = SystemLayout::bipartite(2, 2).unwrap();
        let u = QOp::identity(layout.clone());
        let opts = MapDistanceOptions { samples: 16, ..Default::default() };
        let d = sampled_map_distance(&u, &u, &layout, Distance::Trace, &opts).unwrap();
        assert!(d.value < 1e-14);
        assert!(sampled_map_distance(&u, &u, &layout, Distance::RelativeEntropy, &opts).is_err());
    }
}
