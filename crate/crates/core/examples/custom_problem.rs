//! Defining your own problems: Kepler's equation as a scalar problem, and a
//! circle/parabola intersection as a system whose second derivatives come
//! from finite differences.

use rootbeyond::vector::SecondSource;
use rootbeyond::{
    solve_scalar, solve_vector, Matrix, ScalarMethod, ScalarProblem, SolverConfig, VectorMethod,
    VectorProblem, VectorSolverConfig,
};

pub fn run() -> rootbeyond::Result<(f64, Vec<f64>)> {
    // E - e sin E = M
    let (ecc, mean_anomaly) = (0.9, 0.3);
    let kepler = ScalarProblem::new(
        "kepler",
        move |e: f64| e - ecc * e.sin() - mean_anomaly,
        move |e: f64| 1.0 - ecc * e.cos(),
    )
    .with_second(move |e: f64| ecc * e.sin());

    let mut anomaly = 0.0;
    for method in ScalarMethod::ALL {
        let trace = solve_scalar(&kepler, 0.0, &SolverConfig::new(method))?;
        println!("kepler {method:>10}: E = {:.15} ({} iterations)", trace.final_iterate(), trace.iterations_used);
        anomaly = trace.final_iterate();
    }

    // x^2 + y^2 = 4, y = x^2 - 1
    let system = VectorProblem::new(
        "circle-parabola",
        2,
        |x: &[f64]| vec![x[0] * x[0] + x[1] * x[1] - 4.0, x[0] * x[0] - 1.0 - x[1]],
        |x: &[f64]| Matrix::from_rows(&[vec![2.0 * x[0], 2.0 * x[1]], vec![2.0 * x[0], -1.0]]),
    );
    let mut point = Vec::new();
    for method in VectorMethod::ALL {
        let cfg = VectorSolverConfig::new(method).with_second_source(SecondSource::FiniteDifference);
        let trace = solve_vector(&system, &[1.0, 1.0], &cfg)?;
        let x = trace.final_iterate();
        println!("system {method:>10}: ({:.12}, {:.12}) {} in {}", x[0], x[1], trace.status, trace.iterations_used);
        point = x.to_vec();
    }
    Ok((anomaly, point))
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    run().map(|_| ())
}
