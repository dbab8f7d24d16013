use crate::error::{Error, Result};
use crate::field::Field;
use crate::scalar::IterationTrace;
use crate::vector::VectorTrace;

use super::fit_slope;

/// Errors at or below this are rounding noise and are left out of the fit.
const ERROR_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Least-squares slope of `log e_{n+1}` against `log e_n` over consecutive
/// pairs whose errors are both above `100 * eps`.
pub fn order_from_errors(errors: &[f64]) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = errors
        .windows(2)
        .filter(|w| w[0] > ERROR_FLOOR && w[1] > ERROR_FLOOR)
        .map(|w| (w[0].ln(), w[1].ln()))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least two error pairs above {ERROR_FLOOR:e}, have {}",
            xs.len()
        )));
    }
    let slope = fit_slope(&xs, &ys);
    if !slope.is_finite() {
        return Err(Error::InsufficientData("error sequence does not vary".into()));
    }
    Ok(slope)
}

fn require_converged(converged: bool, iterates: usize) -> Result<()> {
    if !converged {
        return Err(Error::InsufficientData("trace did not converge".into()));
    }
    if iterates < 4 {
        return Err(Error::InsufficientData(format!("only {iterates} iterates")));
    }
    Ok(())
}

/// Empirical convergence order of a converged scalar trace against `root`.
pub fn order_estimate<T: Field>(trace: &IterationTrace<T>, root: T) -> Result<f64> {
    require_converged(trace.converged(), trace.iterates.len())?;
    let errors: Vec<f64> = trace.iterates.iter().map(|&x| (root - x).modulus()).collect();
    order_from_errors(&errors)
}

pub fn order_estimate_vector(trace: &VectorTrace, root: &[f64]) -> Result<f64> {
    require_converged(trace.converged(), trace.iterates.len())?;
    let errors: Vec<f64> = trace
        .iterates
        .iter()
        .map(|x| x.iter().zip(root).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .collect();
    order_from_errors(&errors)
}
