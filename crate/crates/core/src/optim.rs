//! Thin wrapper over argmin's Nelder–Mead for closures on `Vec<f64>`.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;

use crate::error::{Error, Result};

struct Closure<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Closure<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, ArgminError> {
        Ok((self.0)(p))
    }
}

pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

/// Minimize `f` from `x0` with an axis-aligned initial simplex of size `step`.
pub(crate) fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    max_iter: u64,
    sd_tol: f64,
) -> Result<Minimum> {
    let mut simplex = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(sd_tol)
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let res = Executor::new(Closure(f), solver)
        .configure(|s| s.max_iters(max_iter))
        .run()
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let state = res.state();
    let converged = matches!(
        state.get_termination_status(),
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    let x = state.get_best_param().cloned().unwrap_or_else(|| x0.to_vec());
    Ok(Minimum { x, value: state.get_best_cost(), converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let m = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], 0.5, 2000, 1e-12)
            .unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] + 2.0).abs() < 1e-4);
        assert!(m.converged);
    }
}
