//! Acceptance suite: one PASS/FAIL line per criterion, each under its
//! wall-clock budget. Runs without the libtest harness.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use medwit::correlations::{
    capacity_search, rel_ent_entanglement, Bipartition, ContinuityFn, MeasureSpec, OptStatus, Quantifier,
    ReeOptions,
};
use medwit::dynamics::hamiltonians::{one_way_hamiltonians, one_way_unitaries, random_pair};
use medwit::dynamics::{apply_map, DecomposableSpec, HamiltonianPair, KrausMap, Order, DEFAULT_STEP_CAP};
use medwit::tensor::linalg::{basis_vector, c, max_entangled_vector, reflection_between};
use medwit::tensor::random::{random_kraus, random_state, stream_rng};
use medwit::tensor::{CVector, QState, SystemLayout};
use medwit::witness::{
    adversarial_swap_search, excluded_mediator_dim, falsify_decomposition, random_dilation, sandwich_check,
    strict_inclusion_demo, swap_dilation_test, witness_accessible, witness_inaccessible, FalsifyOptions,
    ProbeTarget, SwapSearchOptions, WitnessOptions,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ab() -> Bipartition {
    Bipartition::new(&["A"], &["B"])
}

fn capacity_saturation() -> Outcome {
    let bell = ok(QState::from_ket(&max_entangled_vector(2, 2, 2), ok(SystemLayout::bipartite(2, 2))?))?;
    let e = ok(rel_ent_entanglement(&bell, &ab(), &ReeOptions::default()))?;
    check((e.value - 1.0).abs() <= 1e-4, format!("Bell REE {}", e.value))?;
    // estimates are upper bounds, so a shorter solve keeps the check sound
    let search = ReeOptions { max_iter: 300, restarts: 2, ..Default::default() };
    let mut worst: f64 = 0.0;
    for d_a in [2, 3] {
        let found = ok(capacity_search(Quantifier::RelEntEntanglement, d_a, 2, 120, 11, &search))?;
        worst = worst.max(found.value);
    }
    check(worst <= 1.0 + 1e-6, format!("search reached {worst}"))?;
    Ok(format!("E(Bell) = {:.6}, search max = {worst:.6}", e.value))
}

fn random_decomposable(seed: u64, dims: (usize, usize, usize)) -> Result<(QState, QState), String> {
    let (da, dm, db) = dims;
    let mut rng = stream_rng(seed, 0);
    let am = ok(SystemLayout::new([("A", da), ("M", dm)]))?;
    let bm = ok(SystemLayout::new([("B", db), ("M", dm)]))?;
    let k1 = 1 + (seed as usize) % 3;
    let k2 = 1 + (seed as usize / 3) % 3;
    let map = ok(DecomposableSpec::new(
        ok(KrausMap::new(random_kraus(&mut rng, da * dm, k1), am))?,
        ok(KrausMap::new(random_kraus(&mut rng, db * dm, k2), bm))?,
        Order::AmThenBm,
    ))?;
    let parts: Vec<QState> = [("A", da), ("M", dm), ("B", db)]
        .iter()
        .map(|&(l, d)| random_state(&mut rng, &SystemLayout::single(l, d).unwrap()))
        .collect();
    let rho0 = ok(QState::product(&parts.iter().collect::<Vec<_>>()))?;
    let rho_t = ok(apply_map(&rho0, &map))?;
    Ok((rho0, rho_t))
}

fn decomposable_soundness() -> Outcome {
    let opts = WitnessOptions { decide_only: true, ..Default::default() };
    let spec = MeasureSpec::ree();
    let mut worst: f64 = 0.0;
    for k in 0..200u64 {
        let dims = if k % 4 == 3 { (2, 3, 2) } else { (2, 2, 2) };
        let (rho0, rho_t) = random_decomposable(k, dims)?;
        let acc = ok(witness_accessible(&rho0, &rho_t, &spec, &opts))?;
        let ab0 = ok(rho0.partial_trace(&["A", "B"]))?;
        let abt = ok(rho_t.partial_trace(&["A", "B"]))?;
        let inacc = ok(witness_inaccessible(&ab0, &abt, &spec, dims.1, &opts))?;
        for r in [&acc, &inacc] {
            check(r.certified_violation == 0.0, format!("case {k} ({}): certified {}", r.cut, r.certified_violation))?;
            worst = worst.max(r.violation);
        }
    }
    Ok(format!("200 cases, largest raw violation {worst:.2e}"))
}

/// Independent inverse of a monotone `g` by bisection.
fn bisect_inverse(g: &ContinuityFn, v: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, g.domain_max());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g.eval(mid).unwrap() < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn max_entangler_witness() -> Outcome {
    let layout = ok(SystemLayout::tripartite(4, 2, 4))?;
    // |000⟩ ↦ Φ⁺_AB ⊗ |0⟩_M in the (A, M, B) ordering
    let mut target = CVector::zeros(32);
    for i in 0..4 {
        target[i * 8 + i] = c(0.5, 0.0);
    }
    let u = reflection_between(&basis_vector(32, 0), &target);
    let rho0 = ok(QState::basis(layout.clone(), &[0, 0, 0]))?;
    let rho_t = ok(rho0.conjugate(&u))?;
    let spec = MeasureSpec::ree();
    let r = ok(witness_accessible(&rho0, &rho_t, &spec, &Default::default()))?;
    check((r.lhs - 2.0).abs() <= 1e-3, format!("lhs {}", r.lhs))?;
    check((r.bound - 1.0).abs() <= 1e-12, format!("bound {}", r.bound))?;
    let expected = bisect_inverse(&spec.g_for(4, 32), 1.0);
    check(r.nd_lower_bound > 0.0, "nd_lower_bound not positive")?;
    check((r.nd_lower_bound - expected).abs() <= 1e-6 * expected.max(1e-12), format!("g⁻¹(1) {} vs {expected}", r.nd_lower_bound))?;
    Ok(format!("lhs = {:.6}, bound = {}, nd_lower_bound = {:.4e}", r.lhs, r.bound, r.nd_lower_bound))
}

fn exact_product_error(pair: &HamiltonianPair, t: f64) -> f64 {
    let i_t = c(0.0, -t);
    let exact = (pair.total() * i_t).exp();
    let step = (pair.h_am() * i_t).exp() * (pair.h_bm() * i_t).exp();
    let diff = exact - step;
    diff.singular_values().max()
}

fn single_step_trotter() -> Outcome {
    let (h_am, h_bm) = one_way_hamiltonians();
    let pair = ok(HamiltonianPair::new(&h_am, &h_bm))?;
    let comm = pair.commutator_norm();
    check((comm - PI * PI / 8.0).abs() <= 1e-9, format!("commutator {comm}"))?;
    let mut rng = stream_rng(4, 0);
    let mut tightest: f64 = f64::INFINITY;
    let mut pairs = vec![pair];
    for k in 0..20 {
        let dims = [(2, 2, 2), (2, 3, 2), (3, 2, 2)][k % 3];
        let (a, b) = ok(random_pair(&mut rng, dims.0, dims.1, dims.2, 1.0))?;
        pairs.push(ok(HamiltonianPair::new(&a, &b))?);
    }
    for (k, p) in pairs.iter().enumerate() {
        let comm = p.commutator_norm();
        for step in 1..=20 {
            let t = 0.1 * step as f64;
            let err = ok(p.trotter_error(t, 1))?;
            let oracle = exact_product_error(p, t);
            check((err - oracle).abs() <= 1e-10, format!("pair {k} t={t}: {err} vs oracle {oracle}"))?;
            let bound = t * t / 2.0 * comm;
            check(err <= bound + 1e-9, format!("pair {k} t={t}: {err} > {bound}"))?;
            tightest = tightest.min(bound - err);
        }
    }
    Ok(format!("21 pairs × 20 times, commutator = {comm:.12}, min slack {tightest:.2e}"))
}

fn step_scaling() -> Outcome {
    let (h_am, h_bm) = one_way_hamiltonians();
    let pair = ok(HamiltonianPair::new(&h_am, &h_bm))?;
    let (mut xs, mut ys) = (vec![], vec![]);
    for k in 0..13 {
        let eps = 10f64.powf(-2.0 - 0.25 * k as f64);
        let r = ok(pair.min_steps(1.0, eps, DEFAULT_STEP_CAP))?;
        xs.push((1.0 / eps).ln());
        ys.push((r.steps as f64).ln());
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    check((slope - 1.0).abs() <= 0.15, format!("slope {slope}"))?;
    Ok(format!("slope = {slope:.4} over ε ∈ [1e-5, 1e-2]"))
}

fn one_way_decomposability() -> Outcome {
    let layout = ok(SystemLayout::tripartite(2, 2, 2))?;
    let (u_am, u_bm) = one_way_unitaries();
    let target = ok(ok(u_am.embed(None, &layout))?.compose(&ok(u_bm.embed(None, &layout))?))?;
    let opts = FalsifyOptions { restarts: 64, seed: 2024, ..Default::default() };
    let forbidden = ok(falsify_decomposition(&target, Order::AmThenBm, &opts))?;
    check(forbidden.restarts >= 50, "too few restarts")?;
    check(forbidden.best_distance > 0.1, format!("forbidden order reached {}", forbidden.best_distance))?;
    let allowed = ok(falsify_decomposition(&target, Order::BmThenAm, &FalsifyOptions { restarts: 8, ..opts }))?;
    check(allowed.best_distance <= 1e-6, format!("allowed order stuck at {}", allowed.best_distance))?;
    Ok(format!(
        "forbidden best = {:.4} over {} restarts, allowed best = {:.2e}",
        forbidden.best_distance, forbidden.restarts, allowed.best_distance
    ))
}

fn swap_no_dilation() -> Outcome {
    let mut rng = stream_rng(77, 0);
    let mut worst = f64::INFINITY;
    for k in 0..100 {
        let order = if k % 2 == 0 { Order::AmThenBm } else { Order::BmThenAm };
        let dil = ok(random_dilation(&mut rng, 2 + k % 3, order))?;
        worst = worst.min(ok(swap_dilation_test(&dil, ProbeTarget::Swap))?);
    }
    let mut adversarial = f64::INFINITY;
    for k in 0..10u64 {
        let m = 2 + (k as usize) % 3;
        let order = if k < 5 { Order::AmThenBm } else { Order::BmThenAm };
        let r = ok(adversarial_swap_search(m, order, &SwapSearchOptions { max_iter: 1500, seed: k }))?;
        adversarial = adversarial.min(r.deviation);
    }
    check(worst >= 0.5 - 1e-6, format!("random dilation reached {worst}"))?;
    check(adversarial >= 0.5 - 1e-6, format!("optimized dilation reached {adversarial}"))?;
    Ok(format!("min deviation random = {worst:.6}, optimized = {adversarial:.6}"))
}

fn strict_inclusion() -> Outcome {
    let two = ok(strict_inclusion_demo(2, 4, &Default::default()))?;
    check((two.below.violation - 1.0).abs() <= 1e-4, format!("m = 2 violation {}", two.below.violation))?;
    check(two.below.capacity == 0.0 && two.below.mediator_dim_assumed == 1, "m = 2 cap")?;
    let three = ok(strict_inclusion_demo(3, 4, &Default::default()))?;
    check((three.below.violation - 0.585).abs() <= 1e-3, format!("m = 3 violation {}", three.below.violation))?;
    check(three.below.capacity == 1.0 && three.below.mediator_dim_assumed == 2, "m = 3 cap")?;
    check(two.at.violation == 0.0 && three.at.violation == 0.0, "cap m must not be violated")?;
    Ok(format!("violation m=2: {:.6}, m=3: {:.6}", two.below.violation, three.below.violation))
}

fn mediator_exclusion() -> Outcome {
    let m = ok(excluded_mediator_dim(5.0))?;
    check(m == 32, format!("got {m}"))?;
    Ok("m_min(5) = 32".into())
}

fn sandwich_consistency() -> Outcome {
    let mut rng = stream_rng(10, 0);
    let (h_am, h_bm) = one_way_hamiltonians();
    let mut pairs = vec![ok(HamiltonianPair::new(&h_am, &h_bm))?];
    for _ in 0..20 {
        let (a, b) = ok(random_pair(&mut rng, 4, 2, 2, 2.0))?;
        pairs.push(ok(HamiltonianPair::new(&a, &b))?);
    }
    let spec = MeasureSpec::ree();
    let mut max_ratio: f64 = 0.0;
    let mut positive = 0;
    for (k, pair) in pairs.iter().enumerate() {
        let d_a = pair.layout().dim_of("A").unwrap();
        let parts: Vec<QState> = [("A", d_a), ("M", 2), ("B", 2)]
            .iter()
            .map(|&(l, d)| medwit::tensor::random::random_pure_state(&mut rng, &SystemLayout::single(l, d).unwrap()))
            .collect();
        let rho0 = if k == 0 {
            ok(QState::basis(pair.layout().clone(), &[0, 0, 0]))?
        } else {
            ok(QState::product(&parts.iter().collect::<Vec<_>>()))?
        };
        let s = ok(sandwich_check(pair, 1.0, &rho0, &spec, &Default::default()))?;
        check(s.consistent, format!("pair {k}: lower {} > upper {}", s.lower, s.upper))?;
        check(s.report.status() != OptStatus::BestEffort || s.report.certified_violation == 0.0, "uncertified lower")?;
        positive += usize::from(s.lower > 0.0);
        if s.upper > 0.0 {
            max_ratio = max_ratio.max(s.lower / s.upper);
        }
    }
    Ok(format!("21 pairs consistent, {positive} with a positive lower bound, max lower/upper = {max_ratio:.3e}"))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 capacity saturation", capacity_saturation, 60),
        ("2 decomposable soundness", decomposable_soundness, 300),
        ("3 max-entangler witness", max_entangler_witness, 120),
        ("4 single-step Trotter bound", single_step_trotter, 60),
        ("5 Trotter step scaling", step_scaling, 120),
        ("6 one-way decomposability", one_way_decomposability, 300),
        ("7 SWAP no-dilation", swap_no_dilation, 300),
        ("8 strict inclusion", strict_inclusion, 120),
        ("9 mediator-dimension exclusion", mediator_exclusion, 5),
        ("10 sandwich consistency", sandwich_consistency, 180),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(budget) => {
                Err(format!("{detail}; over budget ({:.1}s > {budget}s)", took.as_secs_f64()))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{:.1}s]  {detail}", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  [{:.1}s]  {why}", took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
