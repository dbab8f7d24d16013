//! Two exponential springs in series under an end load `H = 500`.
//!
//! Newton from the unloaded state overflows; EN, CN and QCN converge.
//! The second half sweeps the EN constant `c2` across -0.5.

use rootbeyond::problems::make_two_spring;
use rootbeyond::{solve_vector, VectorMethod, VectorSolverConfig, VectorTrace};

pub fn run() -> rootbeyond::Result<Vec<(VectorMethod, VectorTrace)>> {
    let entry = make_two_spring(500.0)?;
    let p = entry.problem.as_vector().expect("two_spring is a system");
    let x0 = [0.0, 0.0];

    let mut out = Vec::new();
    for method in VectorMethod::ALL {
        let mut cfg = VectorSolverConfig::new(method);
        if method == VectorMethod::ExtendedNewton {
            cfg = cfg.with_c(vec![-0.5, -0.6]);
        }
        let trace = solve_vector(p, &x0, &cfg)?;
        let x = trace.final_iterate();
        println!(
            "{method:>7}: {:<10} {:>3} iterations  x = ({:.6}, {:.6})",
            trace.status,
            trace.iterations_used,
            x[0],
            x[1]
        );
        out.push((method, trace));
    }

    println!("EN with c1 = -0.5:");
    for c2 in [-0.3, -0.4, -0.5, -0.6, -0.8, -1.0, -2.0] {
        let cfg = VectorSolverConfig::new(VectorMethod::ExtendedNewton).with_c(vec![-0.5, c2]);
        let trace = solve_vector(p, &x0, &cfg)?;
        println!("  c2 = {c2:>5}: {} in {} iterations", trace.status, trace.iterations_used);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    run().map(|_| ())
}
