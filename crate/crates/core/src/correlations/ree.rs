//! Relative entropy of entanglement by optimization over mixtures of
//! product states.
//!
//! The separable candidate is `σ = (1−δ) Σ_k w_k |a_k b_k⟩⟨a_k b_k| + δ I/D`
//! with a tiny `δ`, so `σ` is always separable and full rank and every
//! returned value is an upper bound on the true minimum. Each iteration
//! takes a Frank–Wolfe step towards the best product state, re-weights the
//! atoms multiplicatively and nudges the atom vectors along the gradient.
//! The Frank–Wolfe duality gap is the convergence certificate.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use super::{Bipartition, Estimate, OptStatus};
use crate::error::{Error, Result};
use crate::tensor::linalg::{self, CMatrix, CVector, ZERO};
use crate::tensor::random::{random_ket, stream_rng, SimRng};
use crate::tensor::ops::partial_transpose_matrix;
use crate::tensor::spectral::shannon_bits;
use crate::tensor::{QState, SystemLayout};

const DELTA: f64 = 1e-12;
const PPT_TOL: f64 = 1e-13;
/// Largest eigenvalue above which a state is treated as pure.
const PURE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReeOptions {
    pub max_iter: usize,
    /// Target duality gap in bits.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Largest allowed dimension of the smaller side of the cut.
    pub max_side: usize,
    /// Cap on mixture size; `None` means `(d_X d_Y)²`.
    pub max_atoms: Option<usize>,
    /// Stop as soon as the upper estimate is at or below this many bits.
    /// Useful when only "is the REE above a threshold" matters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_below: Option<f64>,
}

impl Default for ReeOptions {
    fn default() -> Self {
        Self { max_iter: 2000, tol: 1e-5, restarts: 8, seed: 0, max_side: 4, max_atoms: None, stop_below: None }
    }
}

/// REE of `state` across `bip`, in bits.
///
/// The value is an upper estimate; `gap` bounds its excess over the true
/// REE whenever the inner product-state maximization is exact.
pub fn rel_ent_entanglement(state: &QState, bip: &Bipartition, opts: &ReeOptions) -> Result<Estimate> {
    let (rho, dx, dy) = bip.as_bipartite(state)?;
    let side = dx.min(dy);
    if side > opts.max_side {
        return Err(Error::DimensionCap { dim: side, cap: opts.max_side });
    }
    if opts.tol <= 0.0 || opts.max_iter == 0 {
        return Err(Error::InvalidArgument("REE needs tol > 0 and max_iter ≥ 1".into()));
    }
    if side == 1 {
        return Ok(Estimate::exact(0.0));
    }
    // In 2×2 and 2×3 a positive partial transpose means separable.
    if dx * dy <= 6 {
        let layout = SystemLayout::bipartite(dx, dy)?;
        let pt = partial_transpose_matrix(&rho, &layout, &[layout.labels()[0]])?;
        if linalg::eigvalsh(&pt).into_iter().all(|l| l >= -PPT_TOL) {
            return Ok(Estimate::exact(0.0));
        }
    }
    // for pure states the REE is the entropy of either marginal
    let (vals, vecs) = linalg::eigh(&rho);
    let top = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).expect("non-empty");
    if vals[top] >= 1.0 - PURE_TOL {
        let psi = vecs.column(top);
        let coeffs = CMatrix::from_fn(dx, dy, |i, j| psi[i * dy + j]);
        let probs: Vec<f64> = linalg::singular_values(&coeffs).iter().map(|s| s * s).collect();
        return Ok(Estimate::exact(shannon_bits(probs)));
    }
    let solver = Solver::new(rho, dx, dy, opts);
    let mut best: Option<RunResult> = None;
    let mut idle = 0;
    for r in 0..opts.restarts.max(1) {
        let mut rng = stream_rng(opts.seed, r as u64);
        let init = solver.initial_atoms(r, &mut rng);
        let res = solver.run(init, &mut rng);
        let done = res.converged;
        let gain = best.as_ref().map_or(f64::INFINITY, |b| b.f - res.f);
        if best.as_ref().is_none_or(|b| better(&res, b)) {
            best = Some(res);
        }
        let below = best.as_ref().is_some_and(|b| solver.below(b.f));
        if done || below {
            break;
        }
        // stop once further starts keep landing on the same value
        idle = if gain > solver.tol { 0 } else { idle + 1 };
        if idle >= 2 {
            break;
        }
    }
    let best = best.expect("at least one restart");
    let dim = (dx * dy) as f64;
    let gap_bits = best.gap / LN_2 + DELTA * dim.log2();
    Ok(Estimate {
        value: (best.f / LN_2).max(0.0),
        status: if best.converged { OptStatus::Converged } else { OptStatus::BestEffort },
        gap: gap_bits.max(0.0),
    })
}

fn better(a: &RunResult, b: &RunResult) -> bool {
    match (a.converged, b.converged) {
        (true, false) => true,
        (false, true) => false,
        _ => a.f + a.gap < b.f + b.gap || (a.f + a.gap == b.f + b.gap && a.f < b.f),
    }
}

#[derive(Clone)]
struct Atoms {
    a: Vec<CVector>,
    b: Vec<CVector>,
    v: Vec<CVector>,
    w: Vec<f64>,
}

impl Atoms {
    fn empty() -> Self {
        Self { a: vec![], b: vec![], v: vec![], w: vec![] }
    }

    fn len(&self) -> usize {
        self.w.len()
    }

    fn push(&mut self, a: CVector, b: CVector, w: f64) {
        self.v.push(a.kronecker(&b));
        self.a.push(a);
        self.b.push(b);
        self.w.push(w);
    }

    fn normalize(&mut self) {
        let s: f64 = self.w.iter().sum();
        self.w.iter_mut().for_each(|w| *w /= s);
    }

    fn remove(&mut self, k: usize) {
        self.a.swap_remove(k);
        self.b.swap_remove(k);
        self.v.swap_remove(k);
        self.w.swap_remove(k);
    }

    /// Columns are the product vectors.
    fn matrix(&self, dim: usize) -> CMatrix {
        CMatrix::from_fn(dim, self.len(), |i, k| self.v[k][i])
    }

    /// `Σ w_k |v_k⟩⟨v_k|`.
    fn mixture(&self, dim: usize) -> CMatrix {
        let vm = self.matrix(dim);
        let mut scaled = vm.clone();
        for (k, w) in self.w.iter().enumerate() {
            scaled.column_mut(k).scale_mut(*w);
        }
        scaled * vm.adjoint()
    }

    /// `⟨v_k|M|v_k⟩` for every atom.
    fn quads(&self, m: &CMatrix, dim: usize) -> Vec<f64> {
        let vm = self.matrix(dim);
        let mv = m * &vm;
        (0..self.len()).map(|k| vm.column(k).dotc(&mv.column(k)).re).collect()
    }
}

struct Eval {
    f: f64,
    lam: Vec<f64>,
    v: CMatrix,
    r: CMatrix,
}

struct RunResult {
    f: f64,
    gap: f64,
    converged: bool,
}

struct Solver {
    rho: CMatrix,
    dx: usize,
    dy: usize,
    entropy: f64,
    max_iter: usize,
    tol: f64,
    max_atoms: usize,
    stop_below: Option<f64>,
}

impl Solver {
    fn new(rho: CMatrix, dx: usize, dy: usize, opts: &ReeOptions) -> Self {
        let entropy = linalg::eigvalsh(&rho)
            .into_iter()
            .filter(|&l| l > 0.0)
            .map(|l| -l * l.ln())
            .sum();
        let d = dx * dy;
        Self {
            rho,
            dx,
            dy,
            entropy,
            max_iter: opts.max_iter,
            tol: opts.tol * LN_2,
            max_atoms: opts.max_atoms.unwrap_or(d * d).max(1),
            stop_below: opts.stop_below,
        }
    }

    fn dim(&self) -> usize {
        self.dx * self.dy
    }

    fn below(&self, f: f64) -> bool {
        self.stop_below.is_some_and(|t| f / LN_2 <= t)
    }

    /// Objective at `σ = (1−δ) mix + δ I/D`.
    fn eval_mix(&self, mix: &CMatrix) -> Eval {
        let d = self.dim();
        let mut sigma = mix.scale(1.0 - DELTA);
        for i in 0..d {
            sigma[(i, i)] += crate::tensor::linalg::c(DELTA / d as f64, 0.0);
        }
        let (lam, v) = linalg::eigh(&sigma);
        let lam: Vec<f64> = lam.into_iter().map(|l| l.max(DELTA * 1e-3 / d as f64)).collect();
        let r = v.adjoint() * &self.rho * &v;
        let cross: f64 = lam.iter().enumerate().map(|(i, l)| r[(i, i)].re * l.ln()).sum();
        Eval { f: -self.entropy - cross, lam, v, r }
    }

    fn eval(&self, atoms: &Atoms) -> Eval {
        self.eval_mix(&atoms.mixture(self.dim()))
    }

    /// `M = D log σ [ρ]`; the gradient of the objective is `−M`.
    fn m(&self, e: &Eval) -> CMatrix {
        let n = e.lam.len();
        let mut x = e.r.clone();
        for i in 0..n {
            for j in 0..n {
                let (li, lj) = (e.lam[i], e.lam[j]);
                let l = if (li - lj).abs() <= 1e-12 * li.max(lj) {
                    2.0 / (li + lj)
                } else {
                    (li.ln() - lj.ln()) / (li - lj)
                };
                x[(i, j)] *= l;
            }
        }
        linalg::hermitian_part(&(&e.v * x * e.v.adjoint()))
    }

    fn initial_atoms(&self, restart: usize, rng: &mut SimRng) -> Atoms {
        let (ba, bb) = match restart {
            0 => self.schmidt_bases(),
            1 => (eigenbasis(&self.marginal(true)), eigenbasis(&self.marginal(false))),
            _ => (
                orthonormal_completion(&[random_ket(rng, self.dx)], self.dx),
                orthonormal_completion(&[random_ket(rng, self.dy)], self.dy),
            ),
        };
        let mut atoms = Atoms::empty();
        for a in &ba {
            for b in &bb {
                let v = a.kronecker(b);
                let p = (v.adjoint() * &self.rho * &v)[(0, 0)].re.max(0.0);
                let w = if restart < 2 { p + 1e-9 } else { p + rng.random::<f64>() * 0.1 };
                atoms.push(a.clone(), b.clone(), w);
            }
        }
        atoms.normalize();
        atoms
    }

    fn marginal(&self, x_side: bool) -> CMatrix {
        let (dx, dy) = (self.dx, self.dy);
        if x_side {
            CMatrix::from_fn(dx, dx, |i, k| (0..dy).map(|j| self.rho[(i * dy + j, k * dy + j)]).sum())
        } else {
            CMatrix::from_fn(dy, dy, |j, l| (0..dx).map(|i| self.rho[(i * dy + j, i * dy + l)]).sum())
        }
    }

    /// Local bases from the Schmidt decomposition of the dominant eigenvector.
    fn schmidt_bases(&self) -> (Vec<CVector>, Vec<CVector>) {
        let (lam, v) = linalg::eigh(&self.rho);
        let top = argmax(&lam);
        let psi = v.column(top).into_owned();
        schmidt_vectors(&psi, self.dx, self.dy)
    }

    /// Best product vector for `⟨ab|M|ab⟩` by alternating eigen-steps.
    fn best_product(&self, m: &CMatrix, atoms: &Atoms, n_random: usize, sweeps: usize, rng: &mut SimRng) -> (f64, CVector, CVector) {
        let (dx, dy) = (self.dx, self.dy);
        let mut starts: Vec<CVector> = Vec::new();
        let mut order: Vec<usize> = (0..atoms.len()).collect();
        order.sort_by(|&i, &j| atoms.w[j].total_cmp(&atoms.w[i]));
        starts.extend(order.iter().take(3).map(|&k| atoms.b[k].clone()));
        let (lam, v) = linalg::eigh(m);
        let (_, sb) = schmidt_vectors(&v.column(argmax(&lam)).into_owned(), dx, dy);
        starts.push(sb[0].clone());
        starts.extend((0..n_random).map(|_| random_ket(rng, dy)));

        let mut best = (f64::NEG_INFINITY, CVector::zeros(dx), CVector::zeros(dy));
        for mut b in starts {
            let mut a = CVector::zeros(dx);
            let mut val = f64::NEG_INFINITY;
            for _ in 0..sweeps {
                a = top_eig(&contract_y(m, &b, dx, dy)).1;
                let (vb, nb) = top_eig(&contract_x(m, &a, dx, dy));
                b = nb;
                let improved = vb - val;
                val = vb;
                if improved.abs() <= 1e-13 * val.abs().max(1.0) {
                    break;
                }
            }
            if val > best.0 {
                best = (val, a, b);
            }
        }
        best
    }

    fn gap_at(&self, m: &CMatrix, atoms: &Atoms, n_random: usize, sweeps: usize, rng: &mut SimRng) -> (f64, CVector, CVector) {
        let (mu, a, b) = self.best_product(m, atoms, n_random, sweeps, rng);
        let tr_ms: f64 = atoms.quads(m, self.dim()).iter().zip(&atoms.w).map(|(q, w)| q * w).sum();
        (((1.0 - DELTA) * (mu - tr_ms)).max(0.0), a, b)
    }

    fn run(&self, mut atoms: Atoms, rng: &mut SimRng) -> RunResult {
        let dim = self.dim();
        let mut ev = self.eval(&atoms);
        // gap already certified for the final iterate, if the loop ended on it
        let mut gap_here = 0.0;
        let mut stall = 0;
        let mut eta = 0.1;
        for _ in 0..self.max_iter {
            let f_start = ev.f;
            if self.below(ev.f) {
                break;
            }
            let m = self.m(&ev);
            let (g, pa, pb) = self.gap_at(&m, &atoms, 1, 40, rng);
            if g <= self.tol {
                gap_here = g;
                break;
            }

            // Frank–Wolfe step with golden-section line search.
            let mix = atoms.mixture(dim);
            let pv = pa.kronecker(&pb);
            let p = &pv * pv.adjoint();
            let at = |gamma: f64| mix.scale(1.0 - gamma) + p.scale(gamma);
            let gamma = golden_min(|g| self.eval_mix(&at(g)).f, 0.0, 1.0, 14);
            if gamma > 0.0 {
                let e2 = self.eval_mix(&at(gamma));
                if e2.f < ev.f {
                    atoms.w.iter_mut().for_each(|w| *w *= 1.0 - gamma);
                    atoms.push(pa, pb, gamma);
                    ev = e2;
                }
            }

            // Multiplicative re-weighting.
            for _ in 0..4 {
                let m = self.m(&ev);
                let c: Vec<f64> = atoms.quads(&m, dim).into_iter().map(|q| q.max(0.0)).collect();
                let norm: f64 = atoms.w.iter().zip(&c).map(|(w, c)| w * c).sum();
                if norm <= 0.0 {
                    break;
                }
                let em: Vec<f64> = atoms.w.iter().zip(&c).map(|(w, c)| w * c / norm).collect();
                let mut step = 1.0;
                let mut accepted = false;
                for _ in 0..5 {
                    let mut t = atoms.clone();
                    for (w, e) in t.w.iter_mut().zip(&em) {
                        *w = (1.0 - step) * *w + step * e;
                    }
                    t.normalize();
                    let e2 = self.eval(&t);
                    if e2.f < ev.f {
                        atoms = t;
                        ev = e2;
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !accepted {
                    break;
                }
            }

            // Gradient nudge of the atom vectors.
            let m = self.m(&ev);
            let (ga, gb) = self.atom_gradients(&m, &atoms);
            for _ in 0..6 {
                let t = moved(&atoms, &ga, &gb, eta);
                let e2 = self.eval(&t);
                if e2.f < ev.f {
                    atoms = t;
                    ev = e2;
                    eta = (eta * 2.0).min(10.0);
                    break;
                }
                eta = (eta * 0.25).max(1e-8);
            }

            if self.prune(&mut atoms) {
                ev = self.eval(&atoms);
            }

            if (f_start - ev.f) / LN_2 < 1e-8 {
                stall += 1;
                if stall >= 5 {
                    break;
                }
            } else {
                stall = 0;
            }
        }

        // Final certificate with a wider product search.
        let m = self.m(&ev);
        let (g, _, _) = self.gap_at(&m, &atoms, 12, 400, rng);
        let gap = g.max(gap_here);
        RunResult { f: ev.f, gap, converged: gap <= self.tol }
    }

    fn atom_gradients(&self, m: &CMatrix, atoms: &Atoms) -> (Vec<CVector>, Vec<CVector>) {
        let (dx, dy) = (self.dx, self.dy);
        let mut ga = Vec::with_capacity(atoms.len());
        let mut gb = Vec::with_capacity(atoms.len());
        for k in 0..atoms.len() {
            let (a, b) = (&atoms.a[k], &atoms.b[k]);
            let w = atoms.w[k];
            let g = contract_y(m, b, dx, dy) * a;
            let g = (&g - a * a.dotc(&g)).scale(w);
            ga.push(g);
            let h = contract_x(m, a, dx, dy) * b;
            let h = (&h - b * b.dotc(&h)).scale(w);
            gb.push(h);
        }
        (ga, gb)
    }

    fn prune(&self, atoms: &mut Atoms) -> bool {
        let before = atoms.len();
        let mut k = 0;
        while k < atoms.len() {
            if atoms.w[k] < 1e-13 && atoms.len() > 1 {
                atoms.remove(k);
            } else {
                k += 1;
            }
        }
        while atoms.len() > self.max_atoms {
            let k = argmin(&atoms.w);
            atoms.remove(k);
        }
        atoms.normalize();
        atoms.len() != before
    }
}

fn moved(atoms: &Atoms, ga: &[CVector], gb: &[CVector], eta: f64) -> Atoms {
    let mut t = Atoms::empty();
    for k in 0..atoms.len() {
        let a = &atoms.a[k] + ga[k].scale(eta);
        let b = &atoms.b[k] + gb[k].scale(eta);
        t.push(a.unscale(a.norm()), b.unscale(b.norm()), atoms.w[k]);
    }
    t
}

/// `(I ⊗ ⟨b|) M (I ⊗ |b⟩)`.
fn contract_y(m: &CMatrix, b: &CVector, dx: usize, dy: usize) -> CMatrix {
    CMatrix::from_fn(dx, dx, |i, k| {
        let mut acc = ZERO;
        for j in 0..dy {
            let bj = b[j].conj();
            if bj == ZERO {
                continue;
            }
            for l in 0..dy {
                acc += bj * m[(i * dy + j, k * dy + l)] * b[l];
            }
        }
        acc
    })
}

/// `(⟨a| ⊗ I) M (|a⟩ ⊗ I)`.
fn contract_x(m: &CMatrix, a: &CVector, dx: usize, dy: usize) -> CMatrix {
    CMatrix::from_fn(dy, dy, |j, l| {
        let mut acc = ZERO;
        for i in 0..dx {
            let ai = a[i].conj();
            if ai == ZERO {
                continue;
            }
            for k in 0..dx {
                acc += ai * m[(i * dy + j, k * dy + l)] * a[k];
            }
        }
        acc
    })
}

fn top_eig(m: &CMatrix) -> (f64, CVector) {
    let (lam, v) = linalg::eigh(m);
    let k = argmax(&lam);
    (lam[k], v.column(k).into_owned())
}

fn argmax(xs: &[f64]) -> usize {
    (0..xs.len()).max_by(|&i, &j| xs[i].total_cmp(&xs[j])).unwrap_or(0)
}

fn argmin(xs: &[f64]) -> usize {
    (0..xs.len()).min_by(|&i, &j| xs[i].total_cmp(&xs[j])).unwrap_or(0)
}

fn eigenbasis(m: &CMatrix) -> Vec<CVector> {
    let (lam, v) = linalg::eigh(m);
    let mut idx: Vec<usize> = (0..lam.len()).collect();
    idx.sort_by(|&i, &j| lam[j].total_cmp(&lam[i]));
    idx.into_iter().map(|k| v.column(k).into_owned()).collect()
}

/// Full local bases `{a_i}`, `{b_j}` with `ψ = Σ s_i a_i ⊗ b_i`.
fn schmidt_vectors(psi: &CVector, dx: usize, dy: usize) -> (Vec<CVector>, Vec<CVector>) {
    let c = CMatrix::from_fn(dx, dy, |i, j| psi[i * dy + j]);
    let svd = c.svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested Vᵀ");
    let r = u.ncols();
    let mut a: Vec<CVector> = Vec::with_capacity(r);
    let mut b: Vec<CVector> = Vec::with_capacity(r);
    for k in 0..r {
        a.push(u.column(k).into_owned());
        // row k of V† is w_k†, so b_k = conj(w_k) is its transpose
        b.push(vt.row(k).transpose());
    }
    (orthonormal_completion(&a, dx), orthonormal_completion(&b, dy))
}

/// Extend orthonormal-ish `vecs` to a basis of `C^dim` by Gram–Schmidt.
fn orthonormal_completion(vecs: &[CVector], dim: usize) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::with_capacity(dim);
    let candidates = vecs.iter().cloned().chain((0..dim).map(|i| linalg::basis_vector(dim, i)));
    for v in candidates {
        if out.len() == dim {
            break;
        }
        let mut w = v;
        for _ in 0..2 {
            for u in &out {
                let p = u.dotc(&w);
                w -= u * p;
            }
        }
        let n = w.norm();
        if n > 1e-8 {
            out.push(w.unscale(n));
        }
    }
    debug_assert_eq!(out.len(), dim);
    out
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    let f_lo = f(0.0);
    if f_lo <= fm {
        0.0
    } else {
        mid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::max_entangled_vector;
    use crate::tensor::random::{random_ket, random_state};
    use crate::tensor::{vn_entropy, SystemLayout};

    fn ab(dx: usize, dy: usize) -> SystemLayout {
        SystemLayout::bipartite(dx, dy).unwrap()
    }

    fn bip() -> Bipartition {
        Bipartition::new(&["A"], &["B"])
    }

    #[test]
    fn bell_is_one_bit() {
        let s = QState::from_ket(&max_entangled_vector(2, 2, 2), ab(2, 2)).unwrap();
        let e = rel_ent_entanglement(&s, &bip(), &ReeOptions::default()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12, "{e:?}");
        assert_eq!(e.status, OptStatus::Exact);
    }

    #[test]
    fn pure_states_match_marginal_entropy() {
        let mut rng = stream_rng(11, 0);
        for (dx, dy) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
            let l = ab(dx, dy);
            let psi = random_ket(&mut rng, dx * dy);
            let s = QState::from_ket(&psi, l).unwrap();
            let oracle = vn_entropy(&s.partial_trace(&["A"]).unwrap());
            let e = rel_ent_entanglement(&s, &bip(), &ReeOptions::default()).unwrap();
            assert!((e.value - oracle).abs() < 1e-4, "{dx}x{dy}: {e:?} vs {oracle}");
        }
    }

    fn isotropic(d: usize, f: f64) -> QState {
        let phi = linalg::projector(&max_entangled_vector(d, d, d));
        let n = (d * d) as f64;
        let rest = (linalg::identity(d * d) - &phi).unscale(n - 1.0);
        QState::new(phi.scale(f) + rest.scale(1.0 - f), ab(d, d)).unwrap()
    }

    #[test]
    fn isotropic_states_match_closed_form() {
        for (d, f) in [(2, 0.9_f64), (3, 0.8)] {
            let df = d as f64;
            let oracle = df.log2() + f * f.log2() + (1.0 - f) * ((1.0 - f) / (df - 1.0)).log2();
            let opts = ReeOptions { max_iter: 600, ..Default::default() };
            let e = rel_ent_entanglement(&isotropic(d, f), &bip(), &opts).unwrap();
            assert!(e.value >= oracle - 1e-9 && e.value - oracle < 1e-3, "d={d}: {e:?} vs {oracle}");
            assert!(e.value - e.gap <= oracle + 1e-9);
        }
    }

    #[test]
    fn product_state_is_zero() {
        let mut rng = stream_rng(3, 0);
        let a = random_state(&mut rng, &SystemLayout::single("A", 2).unwrap());
        let b = random_state(&mut rng, &SystemLayout::single("B", 3).unwrap());
        let s = QState::product(&[&a, &b]).unwrap();
        let e = rel_ent_entanglement(&s, &bip(), &ReeOptions::default()).unwrap();
        assert!(e.value < 1e-6, "{e:?}");
    }

    #[test]
    fn side_cap_enforced() {
        let s = QState::maximally_mixed(ab(5, 5));
        assert!(matches!(
            rel_ent_entanglement(&s, &bip(), &ReeOptions::default()),
            Err(Error::DimensionCap { dim: 5, cap: 4 })
        ));
    }
}
