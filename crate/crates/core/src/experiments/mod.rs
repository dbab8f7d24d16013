//! Desk-scale experiment harness: initial-guess and parameter sweeps, basin
//! maps and Newton fractals, box-counting dimension of basin boundaries, and
//! empirical convergence order.

mod basin;
mod boxdim;
mod order;
mod sweep;

pub use basin::{
    basin_map, basin_map_complex, basin_map_plane, classify_root, grid_scalar_config,
    grid_vector_config, BasinGrid, Cell, GridConfig, RootSet, Window, DEFAULT_MATCH_TOL,
    GRID_MAX_ITER, GRID_TOL_RESIDUAL, NOT_CONVERGED,
};
pub use boxdim::{box_counting_dimension, box_counts, boundary_mask};
pub use order::{order_estimate, order_estimate_vector, order_from_errors};
pub use sweep::{sweep_initial_guess, sweep_parameter_h, SweepRow};

/// Least-squares slope of `ys` against `xs`.
pub(crate) fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
