//! How the EN constant `c` affects convergence on `e^x - 500 = 0` from `x0 = 0`.
//!
//! Any `c != x0` works; values near the root converge fastest.

use rootbeyond::problems::make_exp_h;
use rootbeyond::{solve_scalar, ScalarMethod, SolverConfig};

/// `(c, iterations)` for every integer `c` in `(-50, 50)` except 0.
pub fn run() -> rootbeyond::Result<Vec<(f64, Option<usize>)>> {
    let entry = make_exp_h(500.0)?;
    let p = entry.problem.as_real().expect("exp_h is real");
    let mut rows = Vec::new();
    for c in (-49..=49).filter(|&c| c != 0) {
        let c = f64::from(c);
        let cfg = SolverConfig::new(ScalarMethod::ExtendedNewton).with_c(c).with_max_iter(50);
        let trace = solve_scalar(p, 0.0, &cfg)?;
        rows.push((c, trace.converged().then_some(trace.iterations_used)));
    }
    for chunk in rows.chunks(11) {
        let line: Vec<String> = chunk
            .iter()
            .map(|(c, n)| format!("{c:>4}:{}", n.map_or("--".into(), |n| n.to_string())))
            .collect();
        println!("{}", line.join("  "));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    run().map(|_| ())
}
