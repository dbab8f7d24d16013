//! Command-line front end.
//!
//! Exit codes: 0 converged (or success), 2 non-converged, 1 usage or I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::experiments::{
    basin_map_complex, basin_map_plane, box_counting_dimension, grid_scalar_config,
    grid_vector_config, order_estimate, order_estimate_vector, sweep_initial_guess,
    sweep_parameter_h, BasinGrid, RootSet, Window,
};
use crate::output::{self, fmt_f64, RunManifest};
use crate::problems::{lookup, CatalogEntry, Problem};
use crate::scalar::{solve_scalar, ScalarMethod, SolverConfig};
use crate::vector::{solve_vector, VectorMethod, VectorSolverConfig};

pub const THREADS_ENV: &str = "ROOTBEYOND_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rootbeyond", version, about = "Newton, Extended Newton, Corrected Newton and quasi-Corrected Newton root finding")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem from one initial guess and write the iteration trace.
    Solve(SolveArgs),
    /// Sweep initial guesses, or the load H of exp_h.
    Sweep(SweepArgs),
    /// Basin-of-attraction map of a two-unknown system.
    Basin(GridArgs),
    /// Newton fractal of a complex scalar problem.
    Fractal(GridArgs),
    /// Box-counting dimension of the basin boundaries in a cells CSV.
    Boxdim(BoxdimArgs),
    /// Empirical convergence order of one solve.
    Order(OrderArgs),
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Catalog problem, e.g. exp_h:H=500, two_spring:H=500, cubic_unity, easom.
    #[arg(long)]
    problem: String,
    /// newton, en, cn, qcn (systems only) or halley-alt (scalar only).
    #[arg(long)]
    method: String,
    /// EN constant: a number, `re,im` for complex problems, or one value per unknown.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Prefix for every file written.
    #[arg(long)]
    out_prefix: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// Initial guess: a number, `re,im`, or one value per unknown.
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// Initial guesses as `start,stop,count` (inclusive, evenly spaced).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "h_values")]
    x0_range: Option<String>,
    /// Sweep exp_h over these loads instead, from the single guess --x0.
    #[arg(long)]
    h_values: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    x0: f64,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// x_min,x_max,y_min,y_max
    #[arg(long, allow_hyphen_values = true, default_value = "-2,2,-2,2")]
    window: String,
    /// Cells per side, or NXxNY.
    #[arg(long, default_value = "256")]
    res: String,
}

#[derive(Debug, Args)]
struct BoxdimArgs {
    /// Cells CSV written by `basin` or `fractal`.
    #[arg(long, conflicts_with = "synthetic")]
    grid: Option<PathBuf>,
    /// Built-in test grid: `line` or `checkerboard`.
    #[arg(long)]
    synthetic: Option<String>,
    #[arg(long, default_value_t = 256)]
    res: usize,
}

#[derive(Debug, Args)]
struct OrderArgs {
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    // Fails only if the global pool already exists, in which case it is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Basin(args) => cmd_grid("basin", args),
        Command::Fractal(args) => cmd_grid("fractal", args),
        Command::Boxdim(args) => cmd_boxdim(args),
        Command::Order(args) => cmd_order(args),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("--{flag}: `{}` is not a number", v.trim())))
        })
        .collect()
}

fn parse_real(flag: &str, s: &str) -> Result<f64> {
    match parse_list(flag, s)?.as_slice() {
        [v] => Ok(*v),
        other => Err(usage(format!("--{flag}: expected one value, got {}", other.len()))),
    }
}

fn parse_complex(flag: &str, s: &str) -> Result<Complex64> {
    match parse_list(flag, s)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        other => Err(usage(format!("--{flag}: expected `re` or `re,im`, got {} values", other.len()))),
    }
}

fn parse_vector(flag: &str, s: &str, m: usize) -> Result<Vec<f64>> {
    let v = parse_list(flag, s)?;
    if v.len() != m {
        return Err(usage(format!("--{flag}: expected {m} comma-separated values, got {}", v.len())));
    }
    Ok(v)
}

fn parse_res(s: &str) -> Result<(usize, usize)> {
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("--res: `{s}` is not a positive size")))
    };
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => parse(s).map(|n| (n, n)),
    }
}

fn parse_window(s: &str) -> Result<Window> {
    match parse_list("window", s)?.as_slice() {
        [a, b, c, d] => Window::new(*a, *b, *c, *d),
        _ => Err(usage("--window: expected x_min,x_max,y_min,y_max")),
    }
}

fn scalar_config<T: crate::field::Field>(args: &SolverArgs, c: Option<T>) -> Result<SolverConfig<T>> {
    let method: ScalarMethod = args.method.parse()?;
    let mut cfg = SolverConfig::new(method);
    cfg.c = c;
    if let Some(tol) = args.tol {
        cfg.tol_residual = tol;
    }
    if let Some(n) = args.max_iter {
        cfg.max_iter = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn vector_config(args: &SolverArgs, m: usize) -> Result<VectorSolverConfig> {
    let method: VectorMethod = args.method.parse()?;
    let mut cfg = VectorSolverConfig::new(method);
    if let Some(c) = &args.c {
        cfg.c = Some(parse_vector("c", c, m)?);
    }
    if let Some(tol) = args.tol {
        cfg.tol_residual = tol;
    }
    if let Some(n) = args.max_iter {
        cfg.max_iter = n;
    }
    cfg.validate(m)?;
    Ok(cfg)
}

fn prefix(args: &SolverArgs, default: &str) -> PathBuf {
    args.out_prefix.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn output_path(prefix: &std::path::Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn create(path: &std::path::Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn finish(mut manifest: RunManifest, prefix: &std::path::Path, started: Instant) -> Result<()> {
    let path = output_path(prefix, ".manifest.txt");
    manifest.outputs.push(path.clone());
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    let mut w = create(&path)?;
    manifest.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

fn echo_scalar_config<T: crate::field::Field>(m: &mut RunManifest, cfg: &SolverConfig<T>) {
    m.config("tol_residual", fmt_f64(cfg.tol_residual));
    m.config("max_iter", cfg.max_iter);
    if let Some(c) = cfg.c {
        let p = c.to_point();
        m.config("c", p[..T::COMPONENTS].iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","));
    }
}

fn echo_vector_config(m: &mut RunManifest, cfg: &VectorSolverConfig) {
    m.config("tol_residual", fmt_f64(cfg.tol_residual));
    m.config("max_iter", cfg.max_iter);
    if let Some(c) = &cfg.c {
        m.config("c", c.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","));
    }
}

fn cmd_solve(args: SolveArgs) -> Result<bool> {
    let started = Instant::now();
    let entry = lookup(&args.solver.problem)?;
    let prefix = prefix(&args.solver, "solve");
    let trace_path = output_path(&prefix, ".trace.csv");
    let mut manifest = RunManifest::new("solve", &entry.spec_string(), &args.solver.method);
    manifest.config("x0", &args.x0);

    let (converged, summary) = match &entry.problem {
        Problem::Real(p) => {
            let c = args.solver.c.as_deref().map(|s| parse_real("c", s)).transpose()?;
            let cfg = scalar_config(&args.solver, c)?;
            let trace = solve_scalar(p, parse_real("x0", &args.x0)?, &cfg)?;
            echo_scalar_config(&mut manifest, &cfg);
            let mut w = create(&trace_path)?;
            output::write_scalar_trace(&mut w, &trace)?;
            w.flush()?;
            let x = fmt_f64(trace.final_iterate());
            (trace.converged(), format!("status={} iterations={} x={x} residual={}", trace.status, trace.iterations_used, fmt_f64(trace.final_residual())))
        }
        Problem::Complex(p) => {
            let c = args.solver.c.as_deref().map(|s| parse_complex("c", s)).transpose()?;
            let cfg = scalar_config(&args.solver, c)?;
            let trace = solve_scalar(p, parse_complex("x0", &args.x0)?, &cfg)?;
            echo_scalar_config(&mut manifest, &cfg);
            let mut w = create(&trace_path)?;
            output::write_scalar_trace(&mut w, &trace)?;
            w.flush()?;
            let z = trace.final_iterate();
            (trace.converged(), format!("status={} iterations={} x={},{} residual={}", trace.status, trace.iterations_used, fmt_f64(z.re), fmt_f64(z.im), fmt_f64(trace.final_residual())))
        }
        Problem::Vector(p) => {
            let cfg = vector_config(&args.solver, p.dim())?;
            let x0 = parse_vector("x0", &args.x0, p.dim())?;
            let trace = solve_vector(p, &x0, &cfg)?;
            echo_vector_config(&mut manifest, &cfg);
            let mut w = create(&trace_path)?;
            output::write_vector_trace(&mut w, &trace)?;
            w.flush()?;
            let x: Vec<String> = trace.final_iterate().iter().map(|v| fmt_f64(*v)).collect();
            (trace.converged(), format!("status={} iterations={} x={} residual={}", trace.status, trace.iterations_used, x.join(","), fmt_f64(trace.final_residual())))
        }
    };
    println!("{summary}");
    manifest.outputs.push(trace_path);
    finish(manifest, &prefix, started)?;
    Ok(converged)
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<bool> {
    let started = Instant::now();
    let entry = lookup(&args.solver.problem)?;
    let prefix = prefix(&args.solver, "sweep");
    let Problem::Real(p) = &entry.problem else {
        return Err(usage(format!("sweep needs a real scalar problem, `{}` is {}", entry.name, entry.kind())));
    };
    let c = args.solver.c.as_deref().map(|s| parse_real("c", s)).transpose()?;
    let cfg = scalar_config(&args.solver, c)?;
    let mut manifest = RunManifest::new("sweep", &entry.spec_string(), &args.solver.method);
    echo_scalar_config(&mut manifest, &cfg);

    let (column, rows) = match (&args.x0_range, &args.h_values) {
        (Some(range), None) => {
            let parts = parse_list("x0-range", range)?;
            let [start, stop, count] = parts.as_slice() else {
                return Err(usage("--x0-range: expected start,stop,count"));
            };
            if *count < 1.0 || count.fract() != 0.0 {
                return Err(usage("--x0-range: count must be a positive integer"));
            }
            manifest.config("x0_range", range);
            ("x0", sweep_initial_guess(p, &cfg, &linspace(*start, *stop, *count as usize))?)
        }
        (None, Some(hs)) => {
            if entry.name != "exp_h" {
                return Err(usage("--h-values only applies to exp_h"));
            }
            manifest.config("h_values", hs);
            manifest.config("x0", fmt_f64(args.x0));
            ("H", sweep_parameter_h(&cfg, &parse_list("h-values", hs)?, args.x0)?)
        }
        _ => return Err(usage("sweep needs exactly one of --x0-range or --h-values")),
    };

    let path = output_path(&prefix, ".sweep.csv");
    let mut w = create(&path)?;
    output::write_sweep(&mut w, column, &rows)?;
    w.flush()?;
    let converged = rows.iter().filter(|r| r.iterations.is_some()).count();
    println!("rows={} converged={converged}", rows.len());
    manifest.outputs.push(path);
    finish(manifest, &prefix, started)?;
    Ok(true)
}

fn cmd_grid(name: &str, args: GridArgs) -> Result<bool> {
    let started = Instant::now();
    let entry = lookup(&args.solver.problem)?;
    let prefix = prefix(&args.solver, name);
    let window = parse_window(&args.window)?;
    let (nx, ny) = parse_res(&args.res)?;
    let roots = RootSet::from_entry(&entry)?;
    let mut manifest = RunManifest::new(name, &entry.spec_string(), &args.solver.method);
    manifest.config("window", &args.window);
    manifest.config("res", format!("{nx}x{ny}"));

    let grid = match (name, &entry.problem) {
        ("fractal", Problem::Complex(p)) => {
            let c = args.solver.c.as_deref().map(|s| parse_complex("c", s)).transpose()?;
            let mut cfg = scalar_config(&args.solver, c)?;
            let base = grid_scalar_config(cfg.method);
            cfg.tol_residual = args.solver.tol.unwrap_or(base.tol_residual);
            cfg.max_iter = args.solver.max_iter.unwrap_or(base.max_iter);
            echo_scalar_config(&mut manifest, &cfg);
            basin_map_complex(p, &cfg, &window, nx, ny, &roots)?
        }
        ("basin", Problem::Vector(p)) if p.dim() == 2 => {
            let mut cfg = vector_config(&args.solver, 2)?;
            let base = grid_vector_config(cfg.method);
            cfg.tol_residual = args.solver.tol.unwrap_or(base.tol_residual);
            cfg.max_iter = args.solver.max_iter.unwrap_or(base.max_iter);
            echo_vector_config(&mut manifest, &cfg);
            basin_map_plane(p, &cfg, &window, nx, ny, &roots)?
        }
        ("fractal", _) => return Err(usage(format!("fractal needs a complex scalar problem, `{}` is {}", entry.name, entry.kind()))),
        _ => return Err(usage(format!("basin needs a two-unknown system, `{}` is {}", entry.name, entry.kind()))),
    };

    write_grid_files(&grid, &prefix, &mut manifest)?;
    let per_root: Vec<String> = (1..=roots.len() as u32)
        .map(|k| format!("root{k}={}", grid.count_for_root(k)))
        .collect();
    println!("cells={} converged={} {}", grid.cells.len(), grid.converged_count(), per_root.join(" "));
    finish(manifest, &prefix, started)?;
    Ok(true)
}

fn write_grid_files(grid: &BasinGrid, prefix: &std::path::Path, manifest: &mut RunManifest) -> Result<()> {
    let pgm = output_path(prefix, ".iterations.pgm");
    let ppm = output_path(prefix, ".roots.ppm");
    let csv = output_path(prefix, ".cells.csv");
    let mut w = create(&pgm)?;
    output::write_pgm(&mut w, grid)?;
    w.flush()?;
    let mut w = create(&ppm)?;
    output::write_ppm(&mut w, grid)?;
    w.flush()?;
    let mut w = create(&csv)?;
    output::write_cells(&mut w, grid)?;
    w.flush()?;
    manifest.outputs.extend([pgm, ppm, csv]);
    Ok(())
}

fn cmd_boxdim(args: BoxdimArgs) -> Result<bool> {
    let grid = match (&args.grid, args.synthetic.as_deref()) {
        (Some(path), None) => output::read_cells(BufReader::new(File::open(path)?))?,
        (None, Some("line")) => BasinGrid::from_root_ids(args.res, args.res, |i, _| 1 + u32::from(2 * i >= args.res)),
        (None, Some("checkerboard")) => BasinGrid::from_root_ids(args.res, args.res, |i, j| 1 + ((i + j) % 2) as u32),
        (None, Some(other)) => return Err(usage(format!("--synthetic: unknown grid `{other}` (line or checkerboard)"))),
        _ => return Err(usage("boxdim needs --grid or --synthetic")),
    };
    println!("{}", fmt_f64(box_counting_dimension(&grid)?));
    Ok(true)
}

fn cmd_order(args: OrderArgs) -> Result<bool> {
    let entry: CatalogEntry = lookup(&args.solver.problem)?;
    let estimate = match &entry.problem {
        Problem::Real(p) => {
            let c = args.solver.c.as_deref().map(|s| parse_real("c", s)).transpose()?;
            let trace = solve_scalar(p, parse_real("x0", &args.x0)?, &scalar_config(&args.solver, c)?)?;
            if !trace.converged() {
                eprintln!("solve did not converge: {}", trace.status);
                return Ok(false);
            }
            let root = p.nearest_root(trace.final_iterate()).ok_or_else(|| usage("problem has no known root"))?;
            order_estimate(&trace, root)?
        }
        Problem::Complex(p) => {
            let c = args.solver.c.as_deref().map(|s| parse_complex("c", s)).transpose()?;
            let trace = solve_scalar(p, parse_complex("x0", &args.x0)?, &scalar_config(&args.solver, c)?)?;
            if !trace.converged() {
                eprintln!("solve did not converge: {}", trace.status);
                return Ok(false);
            }
            let root = p.nearest_root(trace.final_iterate()).ok_or_else(|| usage("problem has no known root"))?;
            order_estimate(&trace, root)?
        }
        Problem::Vector(p) => {
            let cfg = vector_config(&args.solver, p.dim())?;
            let trace = solve_vector(p, &parse_vector("x0", &args.x0, p.dim())?, &cfg)?;
            if !trace.converged() {
                eprintln!("solve did not converge: {}", trace.status);
                return Ok(false);
            }
            let root = p.nearest_root(trace.final_iterate()).ok_or_else(|| usage("problem has no known root"))?.to_vec();
            order_estimate_vector(&trace, &root)?
        }
    };
    println!("{}", fmt_f64(estimate));
    Ok(true)
}
