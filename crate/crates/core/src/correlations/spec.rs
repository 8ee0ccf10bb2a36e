use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use super::continuity::ContinuityFn;
use super::measures::evaluate;
use super::ree::ReeOptions;
use super::{Bipartition, Estimate, OptStatus};
use crate::error::{Error, Result};
use crate::tensor::random::{random_pure_state, random_state_rank, stream_rng};
use crate::tensor::SystemLayout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    Negativity,
    LogNegativity,
    MutualInformation,
    RelEntEntanglement,
}

impl Quantifier {
    pub const ALL: [Quantifier; 4] = [
        Quantifier::Negativity,
        Quantifier::LogNegativity,
        Quantifier::MutualInformation,
        Quantifier::RelEntEntanglement,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Quantifier::Negativity => "negativity",
            Quantifier::LogNegativity => "log_negativity",
            Quantifier::MutualInformation => "mutual_information",
            Quantifier::RelEntEntanglement => "rel_ent_entanglement",
        }
    }
}

/// Distance on states used by the total-correlation functional and by the
/// induced operator distance the ND bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Trace,
    Spectral,
    RelativeEntropy,
}

impl Distance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Distance::Trace => "trace",
            Distance::Spectral => "spectral",
            Distance::RelativeEntropy => "relative_entropy",
        }
    }
}

/// A quantifier `Q`, a distance `d` and a continuity function `g`.
///
/// With `g = None` the default for the cut is derived when the measure is
/// used, from the dimensions of the state `Q` is evaluated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub quantifier: Quantifier,
    pub distance: Distance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ContinuityFn>,
}

impl MeasureSpec {
    pub fn new(quantifier: Quantifier, distance: Distance) -> Self {
        Self { quantifier, distance, g: None }
    }

    pub fn with_g(mut self, g: ContinuityFn) -> Self {
        self.g = Some(g);
        self
    }

    pub fn ree() -> Self {
        Self::new(Quantifier::RelEntEntanglement, Distance::Trace)
    }

    pub fn log_negativity() -> Self {
        Self::new(Quantifier::LogNegativity, Distance::Trace)
    }

    pub fn negativity() -> Self {
        Self::new(Quantifier::Negativity, Distance::Trace)
    }

    pub fn mutual_information() -> Self {
        Self::new(Quantifier::MutualInformation, Distance::Trace)
    }

    /// Short machine-readable id, e.g. `rel_ent_entanglement/trace`.
    pub fn id(&self) -> String {
        format!("{}/{}", self.quantifier.as_str(), self.distance.as_str())
    }

    /// Inverse of [`MeasureSpec::id`], e.g. `"rel_ent_entanglement/trace"`.
    pub fn from_id(id: &str) -> Result<Self> {
        let (q, d) = id
            .split_once('/')
            .ok_or_else(|| Error::InvalidArgument(format!("measure id `{id}` is not of the form quantifier/distance")))?;
        let quantifier = Quantifier::ALL
            .into_iter()
            .find(|x| x.as_str() == q)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown quantifier `{q}`")))?;
        let distance = [Distance::Trace, Distance::Spectral, Distance::RelativeEntropy]
            .into_iter()
            .find(|x| x.as_str() == d)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown distance `{d}`")))?;
        Ok(Self::new(quantifier, distance))
    }

    /// `g` for a cut with smaller side `d_min` on a space of dimension
    /// `total_dim`.
    pub fn g_for(&self, d_min: usize, total_dim: usize) -> ContinuityFn {
        if let Some(g) = &self.g {
            return g.clone();
        }
        default_g(self.quantifier, self.distance, d_min, total_dim)
    }
}

/// Continuity functions shipped as defaults; each passes the sampling audit.
pub fn default_g(q: Quantifier, d: Distance, d_min: usize, total_dim: usize) -> ContinuityFn {
    let dm = d_min.max(1) as f64;
    let trace_g = match q {
        // ‖X^Γ‖₁ ≤ d_min ‖X‖₁
        Quantifier::Negativity => ContinuityFn::linear_unit(dm),
        // log₂ is 1/ln2-Lipschitz above 1
        Quantifier::LogNegativity => ContinuityFn::linear_unit(2.0 * dm / LN_2),
        Quantifier::MutualInformation => ContinuityFn::entropic(4.0 * dm.log2(), 2.0),
        Quantifier::RelEntEntanglement => ContinuityFn::entropic(dm.log2(), 1.0),
    };
    match d {
        Distance::Trace => trace_g,
        // T ≤ (D/2)·d∞
        Distance::Spectral => ContinuityFn::scaled(total_dim as f64 / 2.0, trace_g),
        // Pinsker, with S in bits
        Distance::RelativeEntropy => ContinuityFn::root(LN_2 / 2.0, trace_g),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capacity {
    pub value: f64,
    pub status: OptStatus,
}

/// `sup_{σ_AM} Q_{A:M}(σ_AM)`, in closed form for every shipped quantifier.
pub fn capacity(spec: &MeasureSpec, d_a: usize, d_m: usize) -> Capacity {
    let k = d_a.min(d_m).max(1) as f64;
    let value = match spec.quantifier {
        Quantifier::RelEntEntanglement | Quantifier::LogNegativity => k.log2(),
        Quantifier::MutualInformation => 2.0 * k.log2(),
        Quantifier::Negativity => (k - 1.0) / 2.0,
    };
    Capacity { value, status: OptStatus::Exact }
}

/// Largest `Q_{A:M}` found over `samples` random states (half pure, half of
/// random rank). A lower estimate of the capacity.
pub fn capacity_search(
    q: Quantifier,
    d_a: usize,
    d_m: usize,
    samples: usize,
    seed: u64,
    ree: &ReeOptions,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("capacity search needs at least one sample".into()));
    }
    let layout = SystemLayout::new([("A", d_a), ("M", d_m)])?;
    let bip = Bipartition::new(&["A"], &["M"]);
    let values: Vec<Estimate> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let state = if i % 2 == 0 {
                random_pure_state(&mut rng, &layout)
            } else {
                let rank = 1 + i % layout.total_dim();
                random_state_rank(&mut rng, &layout, rank)
            };
            let opts = ReeOptions { seed: seed ^ i as u64, ..ree.clone() };
            evaluate(q, &state, &bip, &opts)
        })
        .collect::<Result<_>>()?;
    let best = values
        .into_iter()
        .fold(Estimate { value: f64::NEG_INFINITY, status: OptStatus::Exact, gap: 0.0 }, |acc, e| {
            if e.value > acc.value {
                e
            } else {
                acc
            }
        });
    Ok(Estimate { status: OptStatus::BestEffort, ..best })
}
