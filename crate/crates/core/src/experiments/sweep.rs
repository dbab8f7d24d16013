use rayon::prelude::*;

use crate::error::Result;
use crate::field::Field;
use crate::problems::{make_exp_h, Problem};
use crate::scalar::{solve_scalar, ScalarProblem, SolverConfig, Status};

/// One solve of a sweep. `iterations` is `None` unless the run converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    /// The swept quantity: the initial guess, or `H` for parameter sweeps.
    pub value: T,
    pub iterations: Option<usize>,
    pub status: Status,
}

/// Solve once per initial guess.
pub fn sweep_initial_guess<T: Field>(
    p: &ScalarProblem<T>,
    cfg: &SolverConfig<T>,
    x0_values: &[T],
) -> Result<Vec<SweepRow<T>>> {
    cfg.validate()?;
    x0_values
        .par_iter()
        .map(|&x0| {
            let trace = solve_scalar(p, x0, cfg)?;
            Ok(SweepRow {
                value: x0,
                iterations: trace.converged().then_some(trace.iterations_used),
                status: trace.status,
            })
        })
        .collect()
}

/// Solve `e^x - H = 0` from a fixed `x0` for each `H`.
///
/// The residual tolerance is scaled by `max(1, H)`: `e^x` is only accurate to
/// a few ulps of `H`, so an absolute tolerance would be unreachable for large `H`.
pub fn sweep_parameter_h(
    cfg: &SolverConfig<f64>,
    h_values: &[f64],
    x0: f64,
) -> Result<Vec<SweepRow<f64>>> {
    cfg.validate()?;
    h_values
        .par_iter()
        .map(|&h| {
            let entry = make_exp_h(h)?;
            let Problem::Real(p) = &entry.problem else { unreachable!("exp_h is scalar") };
            let scaled = SolverConfig { tol_residual: cfg.tol_residual * h.max(1.0), ..*cfg };
            let trace = solve_scalar(p, x0, &scaled)?;
            Ok(SweepRow {
                value: h,
                iterations: trace.converged().then_some(trace.iterations_used),
                status: trace.status,
            })
        })
        .collect()
}
