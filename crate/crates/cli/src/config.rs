//! Run configuration: JSON in, validated and fully defaulted config out.

use std::fmt;
use std::path::PathBuf;

use medwit::correlations::{ContinuityFn, MeasureSpec, ReeOptions, TotalCorrOptions};
use medwit::tensor::DEFAULT_MAX_DIM;
use medwit::witness::{FalsifyOptions, SwapSearchOptions};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    AppendixB,
    MaxEntangler,
    SwapDilation,
    StrictInclusion,
    TrotterSweep,
    GravityThreshold,
    ClassicalControl,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::AppendixB,
        Scenario::MaxEntangler,
        Scenario::SwapDilation,
        Scenario::StrictInclusion,
        Scenario::TrotterSweep,
        Scenario::GravityThreshold,
        Scenario::ClassicalControl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::AppendixB => "appendix-b",
            Scenario::MaxEntangler => "max-entangler",
            Scenario::SwapDilation => "swap-dilation",
            Scenario::StrictInclusion => "strict-inclusion",
            Scenario::TrotterSweep => "trotter-sweep",
            Scenario::GravityThreshold => "gravity-threshold",
            Scenario::ClassicalControl => "classical-control",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Scenario::AppendixB => "one-way qubit pair: decomposition search in both orders, Trotter step, sandwich",
            Scenario::MaxEntangler => "maximally entangling dynamics through a small mediator, both witnesses",
            Scenario::SwapDilation => "random and optimized dilations probed against the two-qubit SWAP",
            Scenario::StrictInclusion => "map needing a mediator of dimension m, witnessed with caps m-1 and m",
            Scenario::TrotterSweep => "first-order Trotter error against its commutator bound over t and r grids",
            Scenario::GravityThreshold => "smallest mediator dimension compatible with observed entanglement",
            Scenario::ClassicalControl => "commuting (classical) pairs; any certified violation is an error",
        }
    }

    /// Scenarios whose output depends on random draws.
    pub fn randomized(&self) -> bool {
        matches!(
            self,
            Scenario::AppendixB | Scenario::SwapDilation | Scenario::ClassicalControl | Scenario::TrotterSweep
        )
    }

    fn default_dims(&self) -> [usize; 3] {
        match self {
            Scenario::MaxEntangler => [4, 2, 4],
            Scenario::StrictInclusion => [4, 3, 4],
            Scenario::SwapDilation => [2, 4, 2],
            _ => [2, 2, 2],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Solver settings; seeds inside are replaced by streams of the master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub max_dim: usize,
    pub ree: ReeOptions,
    pub total: TotalCorrOptions,
    pub falsify: FalsifyOptions,
    pub swap: SwapSearchOptions,
    /// Slack allowed when checking an invariant inequality.
    pub invariant_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            ree: ReeOptions::default(),
            total: TotalCorrOptions::default(),
            falsify: FalsifyOptions::default(),
            swap: SwapSearchOptions::default(),
            invariant_slack: 1e-9,
        }
    }
}

/// A run as written by the user. Absent fields take scenario defaults in
/// [`parse_config`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `[d_A, d_M, d_B]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ContinuityFn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<Vec<u64>>,
    /// Mediator dimension assumed by inaccessible witnesses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Observed entanglement in bits (gravity-threshold).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_obs: Option<f64>,
    /// Number of random cases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Number of optimized SWAP dilations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversarial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax { line: usize, column: usize, message: String },
    Semantic { key: &'static str, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ConfigError::Semantic { key, message } => write!(f, "`{key}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn semantic(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Semantic { key, message: message.into() }
}

/// Deserializes without filling defaults.
pub fn parse_raw(text: &str) -> Result<ScenarioConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses, fills scenario defaults and validates.
#[cfg(test)]
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    parse_raw(text)?.resolved()
}

impl ScenarioConfig {
    #[cfg(test)]
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            seed: None,
            dims: None,
            measure: None,
            g: None,
            t_grid: None,
            r_grid: None,
            m: None,
            e_obs: None,
            samples: None,
            adversarial: None,
            output: None,
            tolerances: Tolerances::default(),
        }
    }

    /// Fills every defaulted field and checks the result.
    pub fn resolved(mut self) -> Result<Self, ConfigError> {
        let s = self.scenario;
        let dims = *self.dims.get_or_insert(s.default_dims());
        self.measure.get_or_insert_with(|| MeasureSpec::ree().id());
        self.t_grid.get_or_insert_with(|| match s {
            Scenario::TrotterSweep => (1..=20).map(|k| k as f64 / 10.0).collect(),
            Scenario::ClassicalControl => vec![0.5, 1.0, 2.0],
            _ => vec![1.0],
        });
        self.r_grid.get_or_insert_with(|| match s {
            Scenario::TrotterSweep => vec![1, 2, 4, 8, 16],
            _ => vec![1],
        });
        if matches!(s, Scenario::StrictInclusion | Scenario::MaxEntangler) {
            self.m.get_or_insert(dims[1]);
        }
        if s == Scenario::GravityThreshold {
            self.e_obs.get_or_insert(5.0);
        }
        match s {
            Scenario::SwapDilation => {
                self.samples.get_or_insert(100);
                self.adversarial.get_or_insert(10);
            }
            Scenario::ClassicalControl => {
                self.samples.get_or_insert(20);
            }
            Scenario::TrotterSweep => {
                self.samples.get_or_insert(0);
            }
            _ => {}
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let s = self.scenario;
        let tol = &self.tolerances;
        if tol.max_dim == 0 {
            return Err(semantic("tolerances.max_dim", "must be positive"));
        }
        if !(tol.invariant_slack >= 0.0) {
            return Err(semantic("tolerances.invariant_slack", "must be non-negative"));
        }
        if s.randomized() && self.seed.is_none() {
            return Err(semantic("seed", format!("scenario {s} is randomized and needs a seed")));
        }
        let [da, dm, db] = self.dims.expect("resolved");
        if da == 0 || dm == 0 || db == 0 {
            return Err(semantic("dims", "every dimension must be at least 1"));
        }
        let total = da.checked_mul(dm).and_then(|x| x.checked_mul(db));
        if total.is_none_or(|t| t > tol.max_dim) {
            return Err(semantic("dims", format!("{da}·{dm}·{db} exceeds the dimension cap {}", tol.max_dim)));
        }
        let measure = self.measure.as_deref().expect("resolved");
        MeasureSpec::from_id(measure).map_err(|e| semantic("measure", e.to_string()))?;
        if let Some(g) = &self.g {
            g.validate().map_err(|e| semantic("g", e.to_string()))?;
        }
        if let Some(ts) = &self.t_grid {
            if ts.is_empty() || ts.iter().any(|t| !t.is_finite() || *t < 0.0) {
                return Err(semantic("t_grid", "needs at least one finite, non-negative time"));
            }
        }
        if let Some(rs) = &self.r_grid {
            if rs.is_empty() || rs.contains(&0) {
                return Err(semantic("r_grid", "needs at least one step count, all ≥ 1"));
            }
        }
        if let Some(e) = self.e_obs {
            if !(e >= 0.0) || e > 62.0 {
                return Err(semantic("e_obs", "must lie in [0, 62] bits"));
            }
        }
        match s {
            Scenario::AppendixB | Scenario::SwapDilation if (da, db) != (2, 2) => {
                return Err(semantic("dims", format!("scenario {s} needs d_A = d_B = 2")));
            }
            Scenario::AppendixB if dm != 2 => return Err(semantic("dims", "scenario appendix-b needs d_M = 2")),
            Scenario::StrictInclusion => {
                let m = self.m.expect("resolved");
                if m < 2 || da != db || da < m {
                    return Err(semantic("m", "strict-inclusion needs m ≥ 2 and d_A = d_B ≥ m"));
                }
                if da * da * m > tol.max_dim {
                    return Err(semantic("m", "the dilated space exceeds the dimension cap"));
                }
            }
            _ => {}
        }
        if self.m == Some(0) {
            return Err(semantic("m", "must be at least 1"));
        }
        if s == Scenario::ClassicalControl && self.samples == Some(0) {
            return Err(semantic("samples", "classical-control needs at least one case"));
        }
        Ok(())
    }

    pub fn master_seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn measure_spec(&self) -> MeasureSpec {
        let id = self.measure.as_deref().expect("resolved");
        let spec = MeasureSpec::from_id(id).expect("validated");
        match &self.g {
            Some(g) => spec.with_g(g.clone()),
            None => spec,
        }
    }
}
