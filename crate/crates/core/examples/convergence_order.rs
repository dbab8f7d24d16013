//! Empirical order of convergence, estimated from consecutive errors
//! `e_{n+1} ~ K e_n^p`. Newton is quadratic, CN (Halley) cubic.

use rootbeyond::experiments::{order_estimate, order_estimate_vector};
use rootbeyond::problems::{make_cubic_unity_real, make_two_spring};
use rootbeyond::{solve_scalar, solve_vector, ScalarMethod, SolverConfig, VectorMethod, VectorSolverConfig};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) }
}

/// Median order over 20 starts in `[1.2, 1.5]` for Newton and CN on `x^3 - 1`.
pub fn run() -> rootbeyond::Result<(f64, f64)> {
    let entry = make_cubic_unity_real();
    let p = entry.problem.as_real().expect("cubic_unity_real is real");
    let starts: Vec<f64> = (0..20).map(|k| 1.2 + 0.3 * f64::from(k) / 19.0).collect();

    let mut medians = Vec::new();
    for method in [ScalarMethod::Newton, ScalarMethod::CorrectedNewton] {
        let mut orders = Vec::new();
        for &x0 in &starts {
            let trace = solve_scalar(p, x0, &SolverConfig::new(method))?;
            orders.push(order_estimate(&trace, 1.0)?);
        }
        let m = median(orders);
        println!("{method:>7} on x^3 - 1: median order {m:.3}");
        medians.push(m);
    }

    let entry = make_two_spring(500.0)?;
    let sys = entry.problem.as_vector().expect("two_spring is a system");
    let trace = solve_vector(sys, &[5.0, 11.0], &VectorSolverConfig::new(VectorMethod::CorrectedNewton))?;
    let root = sys.nearest_root(trace.final_iterate()).expect("known root").to_vec();
    match order_estimate_vector(&trace, &root) {
        Ok(p) => println!("     cn on two_spring from (5, 11): order {p:.3}"),
        Err(e) => println!("     cn on two_spring from (5, 11): {e}"),
    }
    Ok((medians[0], medians[1]))
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    run().map(|_| ())
}
