//! Sweeps over the initial guess and over the load `H` of `e^x - H = 0`,
//! written as CSV to the directory given as the first argument (default: `.`).

use std::fs::File;
use std::path::Path;

use rootbeyond::experiments::{sweep_initial_guess, sweep_parameter_h, SweepRow};
use rootbeyond::output::write_sweep;
use rootbeyond::problems::make_exp_h;
use rootbeyond::{ScalarMethod, SolverConfig};

pub struct Sweeps {
    pub by_x0: Vec<(ScalarMethod, Vec<SweepRow<f64>>)>,
    pub by_h: Vec<(ScalarMethod, Vec<SweepRow<f64>>)>,
}

pub fn run(out_dir: &Path) -> rootbeyond::Result<Sweeps> {
    let entry = make_exp_h(500.0)?;
    let p = entry.problem.as_real().expect("exp_h is real");
    let x0s: Vec<f64> = (0..41).map(|k| -10.0 + 0.5 * f64::from(k)).collect();
    let hs: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).collect();
    let methods = [ScalarMethod::Newton, ScalarMethod::ExtendedNewton, ScalarMethod::CorrectedNewton];

    let mut sweeps = Sweeps { by_x0: Vec::new(), by_h: Vec::new() };
    for method in methods {
        let mut cfg = SolverConfig::new(method);
        if method == ScalarMethod::ExtendedNewton {
            cfg = cfg.with_c(1.0);
        }
        let rows = sweep_initial_guess(p, &cfg, &x0s)?;
        write_sweep(File::create(out_dir.join(format!("x0_{method}.csv")))?, "x0", &rows)?;
        sweeps.by_x0.push((method, rows));

        let rows = sweep_parameter_h(&cfg, &hs, 0.0)?;
        write_sweep(File::create(out_dir.join(format!("h_{method}.csv")))?, "H", &rows)?;
        sweeps.by_h.push((method, rows));
    }

    println!("{:>8} {:>8} {:>8} {:>8}", "H", "newton", "en", "cn");
    for (k, h) in hs.iter().enumerate() {
        let cell = |m: usize| {
            sweeps.by_h[m].1[k].iterations.map_or("fail".to_string(), |n| n.to_string())
        };
        println!("{h:>8.0e} {:>8} {:>8} {:>8}", cell(0), cell(1), cell(2));
    }
    for (method, rows) in &sweeps.by_x0 {
        let ok = rows.iter().filter(|r| r.iterations.is_some()).count();
        println!("{method}: {ok}/{} initial guesses in [-10, 10] converge", rows.len());
    }
    Ok(sweeps)
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    run(Path::new(&dir)).map(|_| ())
}
