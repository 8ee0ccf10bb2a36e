//! The scenario catalog. Each scenario returns result rows and the outcome of
//! the invariants it is expected to satisfy.

use std::collections::BTreeMap;

use medwit::correlations::{Estimate, OptStatus, ReeOptions, TotalCorrOptions};
use medwit::dynamics::hamiltonians::{one_way_hamiltonians, one_way_unitaries, random_commuting_pair, random_pair};
use medwit::dynamics::{DecomposableSpec, DilationSpec, HamiltonianPair, KrausMap, Order};
use medwit::tensor::linalg::{basis_vector, c, reflection_between};
use medwit::tensor::random::{child_seed, random_pure_state, stream_rng};
use medwit::tensor::{CVector, QState, SystemLayout};
use medwit::witness::{
    adversarial_swap_search, excluded_mediator_dim, falsify_decomposition, random_dilation, sandwich_check,
    strict_inclusion_demo, swap_dilation_test, witness_accessible, witness_inaccessible, FalsifyOptions,
    ProbeTarget, SwapSearchOptions, WitnessOptions, WitnessReport,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Scenario, ScenarioConfig};

const STREAM_REE: u64 = 1;
const STREAM_TOTAL: u64 = 2;
const STREAM_FALSIFY: u64 = 3;
const STREAM_SWAP: u64 = 4;
const STREAM_CASES: u64 = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub scenario: &'static str,
    /// Anchor of the relation the row evaluates.
    pub paper_eq: &'static str,
    pub lhs: Option<f64>,
    pub capacity: Option<f64>,
    pub total_corr: Option<f64>,
    pub bound: Option<f64>,
    pub violation: Option<f64>,
    pub nd_lower_bound: Option<f64>,
    pub status: OptStatus,
    pub params: BTreeMap<&'static str, Value>,
}

impl Row {
    fn new(scenario: Scenario, paper_eq: &'static str, status: OptStatus) -> Self {
        Row {
            scenario: scenario.as_str(),
            paper_eq,
            lhs: None,
            capacity: None,
            total_corr: None,
            bound: None,
            violation: None,
            nd_lower_bound: None,
            status,
            params: BTreeMap::new(),
        }
    }

    fn witness(scenario: Scenario, paper_eq: &'static str, r: &WitnessReport) -> Self {
        let mut row = Row {
            lhs: Some(r.lhs),
            capacity: Some(r.capacity),
            total_corr: Some(r.total_corr),
            bound: Some(r.bound),
            violation: Some(r.violation),
            nd_lower_bound: Some(r.nd_lower_bound),
            ..Row::new(scenario, paper_eq, r.status())
        };
        row.param("cut", json!(r.cut))
            .param("certified_violation", json!(r.certified_violation))
            .param("lhs_gap", json!(r.lhs_gap))
            .param("mediator_dim_assumed", json!(r.mediator_dim_assumed))
            .param("measure", json!(r.measure))
            .param("continuity", json!(r.continuity));
        row
    }

    fn param(&mut self, key: &'static str, v: Value) -> &mut Self {
        self.params.insert(key, v);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub invariants: Vec<Invariant>,
}

impl Outcome {
    fn require(&mut self, name: &str, passed: bool, detail: String) {
        self.invariants.push(Invariant { name: name.into(), passed, detail });
    }
}

type Result<T> = std::result::Result<T, medwit::Error>;

fn witness_options(cfg: &ScenarioConfig) -> WitnessOptions {
    let seed = cfg.master_seed();
    WitnessOptions {
        ree: ReeOptions { seed: child_seed(seed, STREAM_REE), ..cfg.tolerances.ree.clone() },
        total: TotalCorrOptions { seed: child_seed(seed, STREAM_TOTAL), ..cfg.tolerances.total.clone() },
        decide_only: false,
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome> {
    match cfg.scenario {
        Scenario::AppendixB => appendix_b(cfg),
        Scenario::MaxEntangler => max_entangler(cfg),
        Scenario::SwapDilation => swap_dilation(cfg),
        Scenario::StrictInclusion => strict_inclusion(cfg),
        Scenario::TrotterSweep => trotter_sweep(cfg),
        Scenario::GravityThreshold => gravity_threshold(cfg),
        Scenario::ClassicalControl => classical_control(cfg),
    }
}

fn appendix_b(cfg: &ScenarioConfig) -> Result<Outcome> {
    let s = Scenario::AppendixB;
    let slack = cfg.tolerances.invariant_slack;
    let mut out = Outcome::default();
    let layout = SystemLayout::tripartite(2, 2, 2)?;
    let (u_am, u_bm) = one_way_unitaries();
    // U_AM U_BM: the B–M gate acts first
    let target = u_am.embed(None, &layout)?.compose(&u_bm.embed(None, &layout)?)?;
    let falsify = FalsifyOptions { seed: child_seed(cfg.master_seed(), STREAM_FALSIFY), ..cfg.tolerances.falsify.clone() };
    for order in [Order::AmThenBm, Order::BmThenAm] {
        let r = falsify_decomposition(&target, order, &falsify)?;
        let mut row = Row { lhs: Some(r.best_distance), ..Row::new(s, "one-way-decomposability", r.status) };
        row.param("order", json!(order.as_str()))
            .param("restarts", json!(r.restarts))
            .param("histogram", json!(r.histogram));
        out.rows.push(row);
        if order == Order::BmThenAm {
            out.require(
                "matching order recovers the exact decomposition",
                r.best_distance <= 1e-6,
                format!("best distance {:.3e}", r.best_distance),
            );
        }
    }

    let (h_am, h_bm) = one_way_hamiltonians();
    let pair = HamiltonianPair::new(&h_am, &h_bm)?;
    let comm = pair.commutator_norm();
    let spec = cfg.measure_spec();
    let opts = witness_options(cfg);
    // |+⟩_A |0⟩_M |+⟩_B: Z_A and Z_B must not act trivially
    let plus = CVector::from_element(2, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let ket = plus.kronecker(&basis_vector(2, 0)).kronecker(&plus);
    let rho0 = QState::from_ket(&ket, layout)?;
    for &t in cfg.t_grid.as_deref().unwrap_or_default() {
        let err = pair.trotter_error(t, 1)?;
        let bound = t * t / 2.0 * comm;
        let mut row = Row {
            lhs: Some(err),
            bound: Some(bound),
            violation: Some((err - bound).max(0.0)),
            ..Row::new(s, "trotter-single-step", OptStatus::Exact)
        };
        row.param("t", json!(t)).param("r", json!(1)).param("commutator_norm", json!(comm));
        out.rows.push(row);
        out.require("single-step Trotter bound", err <= bound + slack, format!("t = {t}: {err:.6e} vs {bound:.6e}"));

        let rho_t = rho0.conjugate(&pair.exact(t))?;
        let w = witness_accessible(&rho0, &rho_t, &spec, &opts)?;
        let mut row = Row::witness(s, "accessible-witness", &w);
        row.param("t", json!(t));
        out.rows.push(row);

        let sw = sandwich_check(&pair, t, &rho0, &spec, &opts)?;
        let mut row = Row {
            lhs: Some(sw.lower),
            bound: Some(sw.upper),
            violation: Some((sw.lower - sw.upper).max(0.0)),
            nd_lower_bound: Some(sw.lower),
            ..Row::new(s, "sandwich", sw.report.status())
        };
        row.param("t", json!(t)).param("upper_reversed", json!(sw.upper_reversed));
        out.rows.push(row);
        out.require("sandwich consistency", sw.consistent, format!("t = {t}: {:.6e} ≤ {:.6e}", sw.lower, sw.upper));
    }
    Ok(out)
}

/// `U|000⟩ = Φ_k ⊗ |0⟩_M` with `Φ_k` maximally entangled across A and B.
fn max_entangler_state(da: usize, dm: usize, db: usize) -> Result<(QState, QState)> {
    let layout = SystemLayout::tripartite(da, dm, db)?;
    let k = da.min(db);
    let mut target = CVector::zeros(da * dm * db);
    for i in 0..k {
        target[i * dm * db + i] = c(1.0 / (k as f64).sqrt(), 0.0);
    }
    let u = reflection_between(&basis_vector(da * dm * db, 0), &target);
    let rho0 = QState::basis(layout, &[0, 0, 0])?;
    let rho_t = rho0.conjugate(&u)?;
    Ok((rho0, rho_t))
}

fn max_entangler(cfg: &ScenarioConfig) -> Result<Outcome> {
    let s = Scenario::MaxEntangler;
    let [da, dm, db] = cfg.dims.expect("resolved");
    let (rho0, rho_t) = max_entangler_state(da, dm, db)?;
    let spec = cfg.measure_spec();
    let opts = witness_options(cfg);
    let mut out = Outcome::default();
    let acc = witness_accessible(&rho0, &rho_t, &spec, &opts)?;
    out.rows.push(Row::witness(s, "accessible-witness", &acc));
    let m = cfg.m.expect("resolved");
    let inacc = witness_inaccessible(&rho0.partial_trace(&["A", "B"])?, &rho_t.partial_trace(&["A", "B"])?, &spec, m, &opts)?;
    out.rows.push(Row::witness(s, "inaccessible-witness", &inacc));
    for r in [&acc, &inacc] {
        out.require(
            "bound is capacity plus initial correlations",
            (r.bound - r.capacity - r.total_corr).abs() <= 1e-12,
            format!("{}: {} vs {} + {}", r.cut, r.bound, r.capacity, r.total_corr),
        );
    }
    Ok(out)
}

fn swap_dilation(cfg: &ScenarioConfig) -> Result<Outcome> {
    let s = Scenario::SwapDilation;
    let max_m = cfg.dims.expect("resolved")[1];
    let master = child_seed(cfg.master_seed(), STREAM_SWAP);
    let mut out = Outcome::default();
    let mut worst = f64::INFINITY;
    let order_of = |k: usize| if k % 2 == 0 { Order::AmThenBm } else { Order::BmThenAm };
    // mediator dimensions cycle through 2..=d_M (just 1 when d_M = 1)
    let m_of = |k: usize| if max_m < 2 { 1 } else { 2 + k % (max_m - 1) };

    for k in 0..cfg.samples.expect("resolved") {
        let mut rng = stream_rng(master, k as u64);
        let (m, order) = (m_of(k), order_of(k));
        let dev = swap_dilation_test(&random_dilation(&mut rng, m, order)?, ProbeTarget::Swap)?;
        worst = worst.min(dev);
        let mut row = Row { lhs: Some(dev), bound: Some(0.5), ..Row::new(s, "swap-no-dilation", OptStatus::Exact) };
        row.param("kind", json!("random")).param("m", json!(m)).param("order", json!(order.as_str()));
        out.rows.push(row);
    }
    for k in 0..cfg.adversarial.expect("resolved") {
        let (m, order) = (m_of(k), order_of(k / 2));
        let opts = SwapSearchOptions { seed: child_seed(master, (1 << 32) + k as u64), ..cfg.tolerances.swap.clone() };
        let r = adversarial_swap_search(m, order, &opts)?;
        worst = worst.min(r.deviation);
        let mut row = Row { lhs: Some(r.deviation), bound: Some(0.5), ..Row::new(s, "swap-no-dilation", r.status) };
        row.param("kind", json!("optimized")).param("m", json!(m)).param("order", json!(order.as_str()));
        out.rows.push(row);
    }
    if worst.is_finite() {
        out.require("SWAP deviation stays at or above 1/2", worst >= 0.5 - 1e-6, format!("smallest deviation {worst:.9}"));
    }

    // negative control: the identity body reproduces the identity map
    let am = SystemLayout::new([("A", 2), ("M", max_m)])?;
    let bm = SystemLayout::new([("B", 2), ("M", max_m)])?;
    let body = DecomposableSpec::new(KrausMap::identity(am), KrausMap::identity(bm), Order::AmThenBm)?;
    let dil = DilationSpec::new(QState::basis(SystemLayout::single("M", max_m)?, &[0])?, body)?;
    let control = swap_dilation_test(&dil, ProbeTarget::Identity)?;
    let mut row = Row { lhs: Some(control), bound: Some(0.0), ..Row::new(s, "swap-no-dilation", OptStatus::Exact) };
    row.param("kind", json!("identity-control")).param("m", json!(max_m));
    out.rows.push(row);
    out.require("identity control is reproduced", control <= 1e-12, format!("deviation {control:.3e}"));
    Ok(out)
}

fn strict_inclusion(cfg: &ScenarioConfig) -> Result<Outcome> {
    let s = Scenario::StrictInclusion;
    let m = cfg.m.expect("resolved");
    let d = cfg.dims.expect("resolved")[0];
    let r = strict_inclusion_demo(m, d, &witness_options(cfg))?;
    let mut out = Outcome::default();
    for (w, cap) in [(&r.below, m - 1), (&r.at, m)] {
        let mut row = Row::witness(s, "strict-inclusion", w);
        row.param("m", json!(m)).param("cap", json!(cap)).param("entanglement", json!(r.entanglement));
        out.rows.push(row);
    }
    let expected = (m as f64).log2() - ((m - 1) as f64).log2();
    out.require(
        "cap m − 1 is violated by log m − log(m − 1)",
        (r.below.violation - expected).abs() <= 1e-6,
        format!("{:.9} vs {expected:.9}", r.below.violation),
    );
    out.require("cap m is not violated", r.at.violation == 0.0, format!("violation {:.3e}", r.at.violation));
    Ok(out)
}

fn trotter_sweep(cfg: &ScenarioConfig) -> Result<Outcome> {
    let s = Scenario::TrotterSweep;
    let [da, dm, db] = cfg.dims.expect("resolved");
    let slack = cfg.tolerances.invariant_slack;
    let mut pairs = vec![("appendix-b".to_string(), {
        let (a, b) = one_way_hamiltonians();
        HamiltonianPair::new(&a, &b)?
    })];
    let mut rng = stream_rng(cfg.master_seed(), STREAM_CASES);
    for k in 0..cfg.samples.expect("resolved") {
        let (a, b) = random_pair(&mut rng, da, dm, db, 1.0)?;
        pairs.push((format!("random-{k}"), HamiltonianPair::new(&a, &b)?));
    }
    let mut out = Outcome::default();
    let mut worst: f64 = f64::NEG_INFINITY;
    for (name, pair) in &pairs {
        let comm = pair.commutator_norm();
        for &r in cfg.r_grid.as_deref().unwrap_or_default() {
            for &t in cfg.t_grid.as_deref().unwrap_or_default() {
                let err = pair.trotter_error(t, r)?;
                let bound = t * t / (2.0 * r as f64) * comm;
                worst = worst.max(err - bound);
                let eq = if r == 1 { "trotter-single-step" } else { "trotter-step-scaling" };
                let mut row = Row {
                    lhs: Some(err),
                    bound: Some(bound),
                    violation: Some((err - bound).max(0.0)),
                    ..Row::new(s, eq, OptStatus::Exact)
                };
                row.param("pair", json!(name)).param("t", json!(t)).param("r", json!(r)).param("commutator_norm", json!(comm));
                out.rows.push(row);
            }
        }
    }
    out.require(
        "Trotter error within t²‖[H_AM, H_BM]‖/(2r)",
        worst <= slack,
        format!("largest excess {worst:.3e}"),
    );
    Ok(out)
}

fn gravity_threshold(cfg: &ScenarioConfig) -> Result<Outcome> {
    let e = cfg.e_obs.expect("resolved");
    let m_min = excluded_mediator_dim(e)?;
    let cap = (m_min as f64).log2();
    let mut row = Row {
        lhs: Some(e),
        capacity: Some(cap),
        total_corr: Some(0.0),
        bound: Some(cap),
        ..Row::new(Scenario::GravityThreshold, "mediator-dim-exclusion", OptStatus::Exact)
    };
    row.param("m_min", json!(m_min));
    let mut out = Outcome::default();
    out.rows.push(row);
    let below = if m_min > 1 { ((m_min - 1) as f64).log2() } else { f64::NEG_INFINITY };
    out.require(
        "m_min is the smallest admissible mediator",
        cap >= e - 1e-4 && below < e,
        format!("log₂ {m_min} = {cap:.6}, E = {e}"),
    );
    Ok(out)
}

fn classical_control(cfg: &ScenarioConfig) -> Result<Outcome> {
    let s = Scenario::ClassicalControl;
    let [da, dm, db] = cfg.dims.expect("resolved");
    let spec = cfg.measure_spec();
    let opts = witness_options(cfg);
    let master = child_seed(cfg.master_seed(), STREAM_CASES);
    let mut out = Outcome::default();
    let mut worst: f64 = 0.0;
    for k in 0..cfg.samples.expect("resolved") {
        let mut rng = stream_rng(master, k as u64);
        let (h_am, h_bm) = random_commuting_pair(&mut rng, da, dm, db, 1.0)?;
        let pair = HamiltonianPair::new(&h_am, &h_bm)?;
        let parts: Vec<QState> = [("A", da), ("M", dm), ("B", db)]
            .iter()
            .map(|&(l, d)| Ok(random_pure_state(&mut rng, &SystemLayout::single(l, d)?)))
            .collect::<Result<_>>()?;
        let rho0 = QState::product(&parts.iter().collect::<Vec<_>>())?;
        for &t in cfg.t_grid.as_deref().unwrap_or_default() {
            let rho_t = rho0.conjugate(&pair.exact(t))?;
            let w = witness_accessible(&rho0, &rho_t, &spec, &opts)?;
            worst = worst.max(w.certified_violation);
            let mut row = Row::witness(s, "accessible-witness", &w);
            row.param("case", json!(k)).param("t", json!(t)).param("commutator_norm", json!(pair.commutator_norm()));
            out.rows.push(row);
        }
    }
    out.require("classical dynamics never certify a violation", worst == 0.0, format!("largest certified violation {worst:.3e}"));
    Ok(out)
}

/// Worst status over all rows.
pub fn overall_status(rows: &[Row]) -> OptStatus {
    rows.iter().fold(Estimate::exact(0.0).status, |acc, r| acc.worst(r.status))
}
