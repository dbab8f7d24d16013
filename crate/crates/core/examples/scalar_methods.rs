//! Newton, EN, CN and the Halley-alternate step on `e^x - 500 = 0`.
//!
//! From `x0 = 0` Newton jumps to `x = 499` and runs away; the other methods
//! converge in a handful of steps.

use rootbeyond::problems::make_exp_h;
use rootbeyond::{solve_scalar, IterationTrace, ScalarMethod, SolverConfig};

pub fn run() -> rootbeyond::Result<Vec<(ScalarMethod, IterationTrace<f64>)>> {
    let entry = make_exp_h(500.0)?;
    let p = entry.problem.as_real().expect("exp_h is real");

    let mut out = Vec::new();
    for method in ScalarMethod::ALL {
        let mut cfg = SolverConfig::new(method).with_max_iter(50);
        if method == ScalarMethod::ExtendedNewton {
            cfg = cfg.with_c(1.0);
        }
        let trace = solve_scalar(p, 0.0, &cfg)?;
        println!("{method:>10}: {} after {} iterations", trace.status, trace.iterations_used);
        for (n, (x, e)) in trace.iterates.iter().zip(&trace.errors).enumerate().take(8) {
            println!("{:>14} n={n:<2} x={x:<24.16} |x - ln 500|={e:.3e}", "");
        }
        out.push((method, trace));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    run().map(|_| ())
}
