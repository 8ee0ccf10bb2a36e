//! Sampling check of `|Q(ρ) − Q(σ)| ≤ g(d(ρ, σ))` for a measure spec.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measures::evaluate;
use super::ree::ReeOptions;
use super::spec::{Distance, MeasureSpec};
use super::Bipartition;
use crate::error::{Error, Result};
use crate::tensor::random::{random_hermitian, random_state_rank, stream_rng};
use crate::tensor::spectral::{expm_hermitian_matrix, relative_entropy, spectral_distance, trace_distance};
use crate::tensor::{QState, SystemLayout};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditOptions {
    pub pairs: usize,
    pub seed: u64,
    pub ree: ReeOptions,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self { pairs: 10_000, seed: 0, ree: ReeOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub spec_id: String,
    pub continuity: String,
    pub pairs: usize,
    /// Pairs whose excess `|ΔQ| − g(d)` is positive beyond the optimizer
    /// gaps of the two `Q` values.
    pub violations: usize,
    /// Largest `|ΔQ| − g(d)` seen, before subtracting gaps.
    pub worst_excess: f64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Audit `spec` on `d_x × d_y` states.
///
/// A quarter of the pairs are independent random states; the rest are close
/// pairs (mixed with noise, or rotated by a small unitary), where linear and
/// entropic bounds are tightest.
pub fn audit_continuity(spec: &MeasureSpec, d_x: usize, d_y: usize, opts: &AuditOptions) -> Result<AuditReport> {
    if opts.pairs == 0 {
        return Err(Error::InvalidArgument("audit needs at least one pair".into()));
    }
    let layout = SystemLayout::bipartite(d_x, d_y)?;
    let bip = Bipartition::new(&[layout.labels()[0]], &[layout.labels()[1]]);
    let dim = d_x * d_y;
    let g = spec.g_for(d_x.min(d_y), dim);
    g.validate()?;

    let excesses: Vec<(f64, bool)> = (0..opts.pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(opts.seed, i as u64);
            let rank = 1 + rng.random_range(0..dim);
            let rho = random_state_rank(&mut rng, &layout, rank);
            let sigma = match i % 4 {
                0 => {
                    let rank = 1 + rng.random_range(0..dim);
                    random_state_rank(&mut rng, &layout, rank)
                }
                1 | 2 => {
                    let eps = 10f64.powf(-4.0 * rng.random::<f64>());
                    let rank = 1 + rng.random_range(0..dim);
                    let noise = random_state_rank(&mut rng, &layout, rank);
                    let m = rho.matrix().scale(1.0 - eps) + noise.matrix().scale(eps);
                    QState::new(m, layout.clone())?
                }
                _ => {
                    let eps = 10f64.powf(-4.0 * rng.random::<f64>());
                    let u = expm_hermitian_matrix(&random_hermitian(&mut rng, dim, 1.0), eps);
                    rho.conjugate(&u)?
                }
            };
            let qr = evaluate(spec.quantifier, &rho, &bip, &opts.ree)?;
            let qs = evaluate(spec.quantifier, &sigma, &bip, &opts.ree)?;
            let d = match spec.distance {
                Distance::Trace => trace_distance(&rho, &sigma)?,
                Distance::Spectral => spectral_distance(&rho, &sigma)?,
                Distance::RelativeEntropy => relative_entropy(&rho, &sigma)?,
            };
            let bound = g.eval(d.min(g.domain_max()))?;
            let excess = (qr.value - qs.value).abs() - bound;
            Ok((excess, excess > qr.gap + qs.gap + 1e-10))
        })
        .collect::<Result<_>>()?;

    Ok(AuditReport {
        spec_id: spec.id(),
        continuity: g.describe(),
        pairs: opts.pairs,
        violations: excesses.iter().filter(|e| e.1).count(),
        worst_excess: excesses.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max),
    })
}
