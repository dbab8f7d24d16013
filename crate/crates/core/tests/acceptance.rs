//! Acceptance criteria 1-9. Each prints one PASS/FAIL line.
//!
//! A criterion that cannot be met as stated is listed in [`KNOWN_FAILURES`]
//! with the reason; it still prints FAIL. The test fails if any other
//! criterion fails, or if a listed one unexpectedly passes.
//!
//! Baselines live in `tests/baselines/`; set `ROOTBEYOND_BLESS=1` to rewrite them.

mod common;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{close_c, fd_ok, median, ulps};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rootbeyond::experiments::{
    basin_map_complex, basin_map_plane, box_counting_dimension, grid_scalar_config, grid_vector_config,
    order_estimate, sweep_parameter_h, BasinGrid, RootSet, Window,
};
use rootbeyond::output::fmt_f64;
use rootbeyond::problems::{
    all_entries, make_cubic_unity, make_cubic_unity_real, make_easom_gradient, make_exp_h, make_two_spring, Problem,
};
use rootbeyond::vector::SecondOptions;
use rootbeyond::{
    cn_step, en_step, en_step_multi, fd_second_diagonal, solve_scalar, solve_vector, qcn_step_multi,
    ScalarMethod, ScalarProblem, SolverConfig, Tensor3, VectorMethod, VectorProblem, VectorSolverConfig,
};

// Tolerances, pinned.
const ROOT_TOL: f64 = 1e-10;
const AC1_MAX_ITERS: usize = 20;
const AC1_DIVERGE_WITHIN: usize = 50;
const AC1_BUDGET: Duration = Duration::from_millis(1);
const AC2_CN_MAX_ITERS: usize = 15;
const AC2_EN_MAX_ITERS: usize = 50;
const AC2_BUDGET: Duration = Duration::from_millis(100);
const AC3_H: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6];
const AC4_MAX_ITERS: usize = 9;
const AC5_RES: usize = 101;
const AC5_BUDGET: Duration = Duration::from_secs(10);
const AC6_NEWTON: (f64, f64) = (2.0, 0.2);
const AC6_CN: (f64, f64) = (3.0, 0.3);
const AC7_PROBES: usize = 1000;
const AC7_ULPS: u64 = 4;
const AC7_COMPLEX_ULPS: u64 = 8;
const AC8_JAC_TOL: f64 = 1e-5;
const AC8_SECOND_TOL: f64 = 1e-4;
const AC9_RES: usize = 256;
const AC9_CONVERGED_SHARE: f64 = 0.99;
const BASELINE_DIM_TOL: f64 = 1e-9;

/// Criteria that cannot be met as written, with the measured reason.
const KNOWN_FAILURES: &[(&str, &str)] = &[(
    "AC1",
    "Newton from x0=3 first overshoots to x=26.89 and then descends by about 1 per step; \
     it first gets within 1e-10 of ln 500 at iteration 26, not within 20",
)];

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn baseline_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/baselines").join(name)
}

fn blessing() -> bool {
    std::env::var("ROOTBEYOND_BLESS").is_ok_and(|v| v == "1")
}

/// Compare `current` with the committed baseline (or rewrite it when blessing).
fn check_baseline(name: &str, current: &str, same: impl Fn(&str, &str) -> bool) -> Result<(), String> {
    let path = baseline_path(name);
    if blessing() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, current).unwrap();
        return Ok(());
    }
    let committed = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if same(&committed, current) {
        Ok(())
    } else {
        Err(format!("{name} differs from baseline:\n{current}"))
    }
}

fn exp_h(h: f64) -> ScalarProblem<f64> {
    make_exp_h(h).unwrap().problem.as_real().unwrap().clone()
}

/// First iterate within `ROOT_TOL` of the known root, counting from 0.
fn iterations_to_root(errors: &[f64]) -> Option<usize> {
    errors.iter().position(|&e| e <= ROOT_TOL)
}

fn fastest<T>(runs: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..runs {
        let t = Instant::now();
        let v = f();
        best = best.min(t.elapsed());
        out = Some(v);
    }
    (out.unwrap(), best)
}

fn ac1() -> Outcome {
    let p = exp_h(500.0);
    let cfg = SolverConfig::new(ScalarMethod::Newton);
    let ((from0, from3), elapsed) =
        fastest(5, || (solve_scalar(&p, 0.0, &cfg).unwrap(), solve_scalar(&p, 3.0, &cfg).unwrap()));
    let diverged = from0.status == rootbeyond::Status::Diverged && from0.iterations_used <= AC1_DIVERGE_WITHIN;
    let reached = iterations_to_root(&from3.errors);
    let fast = reached.is_some_and(|n| n <= AC1_MAX_ITERS);
    Outcome {
        id: "AC1",
        pass: diverged && fast && elapsed < AC1_BUDGET,
        detail: format!(
            "x0=0 {} after {}; x0=3 within {ROOT_TOL:e} at iteration {} (limit {AC1_MAX_ITERS}); {:?}",
            from0.status,
            from0.iterations_used,
            reached.map_or("never".into(), |n| n.to_string()),
            elapsed
        ),
    }
}

fn ac2() -> Outcome {
    let p = exp_h(500.0);
    let ((cn, en), elapsed) = fastest(3, || {
        let cn = solve_scalar(&p, 0.0, &SolverConfig::new(ScalarMethod::CorrectedNewton)).unwrap();
        let en: Vec<(i32, Option<usize>)> = (-49..=49)
            .filter(|&c| c != 0)
            .map(|c| {
                let cfg = SolverConfig::new(ScalarMethod::ExtendedNewton)
                    .with_c(f64::from(c))
                    .with_max_iter(AC2_EN_MAX_ITERS);
                let t = solve_scalar(&p, 0.0, &cfg).unwrap();
                (c, t.converged().then_some(t.iterations_used))
            })
            .collect();
        (cn, en)
    });
    let cn_ok = cn.converged() && cn.iterations_used <= AC2_CN_MAX_ITERS;
    let failures: Vec<i32> = en.iter().filter(|(_, n)| n.is_none()).map(|(c, _)| *c).collect();
    let worst = en.iter().filter_map(|(_, n)| *n).max().unwrap_or(0);
    Outcome {
        id: "AC2",
        pass: cn_ok && failures.is_empty() && elapsed < AC2_BUDGET,
        detail: format!(
            "cn {} in {}; en converged for {}/98 values of c (worst {worst} iterations, failed {failures:?}); {:?}",
            cn.status,
            cn.iterations_used,
            98 - failures.len(),
            elapsed
        ),
    }
}

fn ac3() -> Outcome {
    let mut table = String::from("H,newton,en,cn\n");
    let methods = [
        SolverConfig::new(ScalarMethod::Newton),
        SolverConfig::new(ScalarMethod::ExtendedNewton).with_c(1.0),
        SolverConfig::new(ScalarMethod::CorrectedNewton),
    ];
    let rows: Vec<_> = methods.iter().map(|cfg| sweep_parameter_h(cfg, &AC3_H, 0.0).unwrap()).collect();
    for (k, h) in AC3_H.iter().enumerate() {
        let cell = |m: usize| rows[m][k].iterations.map_or("-1".to_string(), |n| n.to_string());
        writeln!(table, "{h:e},{},{},{}", cell(0), cell(1), cell(2)).unwrap();
    }
    let newton_fails_large = rows[0].last().unwrap().iterations.is_none();
    let cn_all = rows[2].iter().all(|r| r.iterations.is_some());
    let baseline = check_baseline("h_sweep.csv", &table, |a, b| a == b);
    Outcome {
        id: "AC3",
        pass: newton_fails_large && cn_all && baseline.is_ok(),
        detail: format!(
            "newton fails at H=1e6: {newton_fails_large}; cn converges for all H: {cn_all}; baseline {}",
            baseline.map_or_else(|e| e, |_| "matches".into())
        ),
    }
}

fn ac4() -> Outcome {
    let entry = make_two_spring(500.0).unwrap();
    let p = entry.problem.as_vector().unwrap();
    let x0 = [0.0, 0.0];
    let newton = solve_vector(p, &x0, &VectorSolverConfig::new(VectorMethod::Newton).with_max_iter(100)).unwrap();
    let cn = solve_vector(p, &x0, &VectorSolverConfig::new(VectorMethod::CorrectedNewton)).unwrap();
    let en = solve_vector(p, &x0, &VectorSolverConfig::new(VectorMethod::ExtendedNewton).with_c(vec![-0.5, -0.6]))
        .unwrap();
    let reach = |t: &rootbeyond::VectorTrace| if t.converged() { iterations_to_root(&t.errors) } else { None };
    let (cn_n, en_n) = (reach(&cn), reach(&en));
    Outcome {
        id: "AC4",
        pass: !newton.converged()
            && cn_n.is_some_and(|n| n <= AC4_MAX_ITERS)
            && en_n.is_some_and(|n| n <= AC4_MAX_ITERS),
        detail: format!(
            "newton {}; within {ROOT_TOL:e} of the root: cn at {cn_n:?}, en at {en_n:?} \
             (residual tolerance met at {} and {})",
            newton.status, cn.iterations_used, en.iterations_used
        ),
    }
}

fn ac5() -> Outcome {
    let entry = make_easom_gradient();
    let p = entry.problem.as_vector().unwrap();
    let roots = RootSet::from_entry(&entry).unwrap();
    let window = Window::square(2.0).unwrap();
    let start = Instant::now();
    let counts: Vec<usize> = [VectorMethod::Newton, VectorMethod::CorrectedNewton, VectorMethod::QuasiCorrectedNewton]
        .into_iter()
        .map(|m| {
            basin_map_plane(p, &grid_vector_config(m), &window, AC5_RES, AC5_RES, &roots)
                .unwrap()
                .converged_count()
        })
        .collect();
    let elapsed = start.elapsed();
    Outcome {
        id: "AC5",
        pass: counts[0] < counts[1] && counts[1] <= counts[2] && elapsed < AC5_BUDGET,
        detail: format!(
            "converged cells newton {} < cn {} <= qcn {} of {}; {:?}",
            counts[0],
            counts[1],
            counts[2],
            AC5_RES * AC5_RES,
            elapsed
        ),
    }
}

fn ac6() -> Outcome {
    let entry = make_cubic_unity_real();
    let p = entry.problem.as_real().unwrap();
    let starts: Vec<f64> = (0..20).map(|k| 1.2 + 0.3 * f64::from(k) / 19.0).collect();
    let med = |method| {
        median(
            starts
                .iter()
                .map(|&x0| order_estimate(&solve_scalar(p, x0, &SolverConfig::new(method)).unwrap(), 1.0).unwrap())
                .collect(),
        )
    };
    let (newton, cn) = (med(ScalarMethod::Newton), med(ScalarMethod::CorrectedNewton));
    Outcome {
        id: "AC6",
        pass: (newton - AC6_NEWTON.0).abs() <= AC6_NEWTON.1 && (cn - AC6_CN.0).abs() <= AC6_CN.1,
        detail: format!("median order newton {newton:.4}, cn {cn:.4}"),
    }
}

fn scalar_catalog() -> (Vec<ScalarProblem<f64>>, Vec<ScalarProblem<Complex64>>) {
    let (mut real, mut complex) = (Vec::new(), Vec::new());
    for e in all_entries() {
        match e.problem {
            Problem::Real(p) => real.push(p),
            Problem::Complex(p) => complex.push(p),
            Problem::Vector(_) => {}
        }
    }
    (real, complex)
}

fn one_unknown(p: &ScalarProblem<f64>) -> VectorProblem {
    let (r, d, s) = (p.clone(), p.clone(), p.clone());
    VectorProblem::from_rows(p.name(), 1, move |_, x| r.residual(x[0]), move |_, x| vec![d.derivative(x[0])])
        .with_second(move |x| {
            let mut t = Tensor3::zeros(1);
            t[(0, 0, 0)] = s.second_derivative(x[0]).unwrap();
            t
        })
}

fn ac7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let (real, complex) = scalar_catalog();
    let mut worst = [0u64; 3];
    let mut problems = Vec::new();
    for p in &real {
        let sys = one_unknown(p);
        let mut n = 0;
        while n < AC7_PROBES {
            let x = rng.gen_range(-3.0..8.0);
            let (r, d, s) = (p.residual(x), p.derivative(x), p.second_derivative(x).unwrap());
            // Keep the Halley denominator well conditioned (see the identity tests).
            if (r * s / (2.0 * d * d)).abs() > 0.5 {
                continue;
            }
            n += 1;
            let cn = cn_step(p, x).unwrap();
            worst[0] = worst[0].max(ulps(cn, -2.0 * r * d / (2.0 * d * d - r * s)));
            worst[1] = worst[1].max(ulps(cn, qcn_step_multi(&sys, &[x], &SecondOptions::default()).unwrap().delta[0]));
            let c = x + 0.75;
            let en = en_step(p, x, c, p.residual(c)).unwrap();
            worst[2] = worst[2].max(ulps(en, en_step_multi(&sys, &[x], &[c], 1e-12).unwrap().delta[0]));
        }
        problems.push(p.name().to_string());
    }
    let mut complex_ok = true;
    for p in &complex {
        let mut n = 0;
        while n < AC7_PROBES {
            let z = Complex64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
            let (r, d, s) = (p.residual(z), p.derivative(z), p.second_derivative(z).unwrap());
            if (r * s / (2.0 * d * d)).norm() > 0.5 {
                continue;
            }
            n += 1;
            let two = Complex64::new(2.0, 0.0);
            complex_ok &= close_c(cn_step(p, z).unwrap(), -two * r * d / (two * d * d - r * s), AC7_COMPLEX_ULPS);
        }
    }

    // EN lands on c when r(c) = 0, here x^3 - 1 with c = 1.
    let cubic = &real.iter().find(|p| p.name().starts_with("cubic")).unwrap();
    let en_exact = (0..AC7_PROBES).all(|_| {
        let x: f64 = rng.gen_range(-3.0..3.0);
        (x - 1.0).abs() < 1e-6 || ulps(x + en_step(cubic, x, 1.0, 0.0).unwrap(), 1.0) <= AC7_ULPS
    });

    // Affine problems: one step of any method lands on the root.
    let affine = ScalarProblem::new("affine", |x: f64| 4.0 * x - 3.0, |_| 4.0).with_second(|_| 0.0);
    let affine_ok = [-7.0, 0.0, 5.5].iter().all(|&x| {
        let target = 0.75;
        let steps = [
            rootbeyond::newton_step(&affine, x).unwrap(),
            cn_step(&affine, x).unwrap(),
            rootbeyond::halley_alt_step(&affine, x).unwrap(),
            en_step(&affine, x, 10.0, affine.residual(10.0)).unwrap(),
        ];
        steps.iter().all(|s| (x + s - target).abs() <= 1e-14)
    });
    let sys_affine = VectorProblem::from_rows(
        "affine2",
        2,
        |i, x| if i == 0 { 3.0 * x[0] + x[1] - 1.0 } else { x[0] - 2.0 * x[1] + 4.0 },
        |i, _| if i == 0 { vec![3.0, 1.0] } else { vec![1.0, -2.0] },
    )
    .with_second(|_| Tensor3::zeros(2));
    let root = [-2.0 / 7.0, 13.0 / 7.0];
    let x = [2.0, -1.0];
    let cfgs = VectorMethod::ALL.map(|m| VectorSolverConfig::new(m).with_c(vec![0.5, 0.5]).with_max_iter(1));
    let sys_ok = cfgs.iter().all(|cfg| {
        let t = solve_vector(&sys_affine, &x, cfg).unwrap();
        let last = &t.iterates[1];
        (last[0] - root[0]).abs() < 1e-13 && (last[1] - root[1]).abs() < 1e-13
    });

    Outcome {
        id: "AC7",
        pass: worst.iter().all(|&w| w <= AC7_ULPS) && complex_ok && en_exact && affine_ok && sys_ok,
        detail: format!(
            "max ulps over {AC7_PROBES} probes on {problems:?}: cn~halley {}, qcn(m=1)~cn {}, en(m=1)~en {}; \
             complex halley within {AC7_COMPLEX_ULPS}: {complex_ok}; en exact at root: {en_exact}; \
             affine one-step: scalar {affine_ok}, system {sys_ok}",
            worst[0], worst[1], worst[2]
        ),
    }
}

fn central(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-6 * (1.0 + x.abs());
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn ac8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(88);
    let mut bad = Vec::new();
    for entry in all_entries() {
        let mut ok = true;
        match &entry.problem {
            Problem::Real(p) => {
                for _ in 0..100 {
                    let x = rng.gen_range(-3.0..8.0);
                    ok &= fd_ok(p.derivative(x), central(|t| p.residual(t), x), AC8_JAC_TOL);
                    ok &= fd_ok(p.second_derivative(x).unwrap(), central(|t| p.derivative(t), x), AC8_SECOND_TOL);
                }
            }
            Problem::Complex(p) => {
                for _ in 0..100 {
                    let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                    let h = 1e-6;
                    let d = p.derivative(z);
                    let s = p.second_derivative(z).unwrap();
                    ok &= (d - (p.residual(z + h) - p.residual(z - h)) / (2.0 * h)).norm() <= AC8_JAC_TOL * (1.0 + d.norm());
                    ok &= (s - (p.derivative(z + h) - p.derivative(z - h)) / (2.0 * h)).norm()
                        <= AC8_SECOND_TOL * (1.0 + s.norm());
                }
            }
            Problem::Vector(p) => {
                let m = p.dim();
                for _ in 0..100 {
                    let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    let jac = p.jacobian(&x);
                    let t = p.second(&x).unwrap();
                    let diag = fd_second_diagonal(p, &x, f64::EPSILON.sqrt());
                    for k in 0..m {
                        let at = |v: f64| {
                            let mut y = x.clone();
                            y[k] = v;
                            y
                        };
                        for i in 0..m {
                            ok &= fd_ok(jac[(i, k)], central(|v| p.residual(&at(v))[i], x[k]), AC8_JAC_TOL);
                            for j in 0..m {
                                let fd = central(|v| p.jacobian(&at(v))[(i, j)], x[k]);
                                ok &= fd_ok(t[(i, j, k)], fd, AC8_SECOND_TOL);
                            }
                        }
                    }
                    for i in 0..m {
                        for j in 0..m {
                            ok &= fd_ok(t[(i, j, i)], diag[(i, j)], AC8_SECOND_TOL);
                        }
                    }
                }
            }
        }
        if !ok {
            bad.push(entry.name.clone());
        }
    }
    Outcome {
        id: "AC8",
        pass: bad.is_empty(),
        detail: format!("{} catalog entries checked, mismatches in {bad:?}", all_entries().len()),
    }
}

fn ac9() -> (Outcome, Option<String>) {
    let entry = make_cubic_unity();
    let p = entry.problem.as_complex().unwrap();
    let roots = RootSet::from_entry(&entry).unwrap();
    let window = Window::square(2.0).unwrap();
    let grid = |method, c: Option<Complex64>| -> BasinGrid {
        let mut cfg = grid_scalar_config(method);
        cfg.c = c;
        basin_map_complex(p, &cfg, &window, AC9_RES, AC9_RES, &roots).unwrap()
    };
    let c = Complex64::new(-0.65, -0.65);
    let newton = grid(ScalarMethod::Newton, None);
    let en = grid(ScalarMethod::ExtendedNewton, Some(c));
    let cn = grid(ScalarMethod::CorrectedNewton, None);

    let total = (AC9_RES * AC9_RES) as f64;
    let classified: usize = (1..=3).map(|k| newton.count_for_root(k)).sum();
    let share = classified as f64 / total;
    let nearest = 1 + roots
        .roots()
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let d = |r: &[f64; 2]| (r[0] - c.re).hypot(r[1] - c.im);
            d(a.1).total_cmp(&d(b.1))
        })
        .unwrap()
        .0 as u32;
    let majority = 2 * en.count_for_root(nearest) > en.converged_count();

    let dims: Vec<f64> = [&newton, &en, &cn].iter().map(|g| box_counting_dimension(g).unwrap()).collect();
    let table = format!(
        "method,dimension\nnewton,{}\nen,{}\ncn,{}\n",
        fmt_f64(dims[0]),
        fmt_f64(dims[1]),
        fmt_f64(dims[2])
    );
    let baseline = check_baseline("fractal_dimensions.csv", &table, |a, b| {
        let nums = |s: &str| -> Vec<f64> {
            s.lines().skip(1).filter_map(|l| l.split(',').nth(1)?.parse().ok()).collect()
        };
        let (a, b) = (nums(a), nums(b));
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= BASELINE_DIM_TOL)
    });
    let warning = (dims[1] > dims[0] || dims[2] > dims[0]).then(|| {
        format!("WARN AC9 dimension ordering: en {:.4}, cn {:.4} not both <= newton {:.4}", dims[1], dims[2], dims[0])
    });
    let outcome = Outcome {
        id: "AC9",
        pass: share >= AC9_CONVERGED_SHARE && majority && dims[0] > 1.0 && dims[0] < 2.0 && baseline.is_ok(),
        detail: format!(
            "newton classifies {:.2}% of cells; en majority to root {nearest}: {} of {}; \
             dimension newton {:.4}, en {:.4}, cn {:.4}; baseline {}",
            100.0 * share,
            en.count_for_root(nearest),
            en.converged_count(),
            dims[0],
            dims[1],
            dims[2],
            baseline.map_or_else(|e| e, |_| "matches".into())
        ),
    };
    (outcome, warning)
}

/// Runs without the libtest harness so the criterion lines always reach stdout.
fn main() {
    let (ac9, warning) = ac9();
    let outcomes = [ac1(), ac2(), ac3(), ac4(), ac5(), ac6(), ac7(), ac8(), ac9];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == o.id);
        println!("{} {} {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if let (false, Some((_, why))) = (o.pass, known) {
            println!("    known: {why}");
        }
        if o.pass == known.is_some() {
            unexpected.push(o.id);
        }
    }
    if let Some(w) = warning {
        println!("{w}");
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
