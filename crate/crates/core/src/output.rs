//! File formats: CSV tables and traces, binary PGM/PPM basin images, and the
//! plain-text run manifest.
//!
//! Floating-point values are written with 17 significant digits so every
//! number reads back to the same `f64`.

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::experiments::{BasinGrid, Cell, SweepRow, NOT_CONVERGED};
use crate::field::Field;
use crate::scalar::IterationTrace;
use crate::vector::VectorTrace;

/// Root-id colours: 0 (no root) black, then red, green, blue, and extras
/// cycling for larger root sets.
pub const PALETTE: [[u8; 3]; 8] = [
    [0, 0, 0],
    [255, 0, 0],
    [0, 255, 0],
    [0, 0, 255],
    [255, 255, 0],
    [0, 255, 255],
    [255, 0, 255],
    [255, 255, 255],
];

/// Round-trippable formatting with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_error(errors: &[f64], n: usize) -> String {
    errors.get(n).map_or_else(String::new, |&e| fmt_f64(e))
}

/// One row per iterate: `n, x (or x_re, x_im), residual, error`.
pub fn write_scalar_trace<T: Field, W: Write>(mut w: W, trace: &IterationTrace<T>) -> io::Result<()> {
    if T::COMPONENTS == 1 {
        writeln!(w, "n,x,residual,error")?;
    } else {
        writeln!(w, "n,x_re,x_im,residual,error")?;
    }
    for (n, (x, r)) in trace.iterates.iter().zip(&trace.residual_mags).enumerate() {
        let p = x.to_point();
        let xs: Vec<String> = p[..T::COMPONENTS].iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{n},{},{},{}", xs.join(","), fmt_f64(*r), fmt_error(&trace.errors, n))?;
    }
    Ok(())
}

/// One row per iterate: `n, x1..xm, residual, error`.
pub fn write_vector_trace<W: Write>(mut w: W, trace: &VectorTrace) -> io::Result<()> {
    let m = trace.iterates.first().map_or(0, Vec::len);
    let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    writeln!(w, "n,{},residual,error", names.join(","))?;
    for (n, (x, r)) in trace.iterates.iter().zip(&trace.residual_norms).enumerate() {
        let xs: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{n},{},{},{}", xs.join(","), fmt_f64(*r), fmt_error(&trace.errors, n))?;
    }
    Ok(())
}

/// `<value_name>,iterations,status`; non-converged rows carry `-1`.
pub fn write_sweep<W: Write>(mut w: W, value_name: &str, rows: &[SweepRow<f64>]) -> io::Result<()> {
    writeln!(w, "{value_name},iterations,status")?;
    for row in rows {
        let its = row.iterations.map_or_else(|| "-1".to_string(), |n| n.to_string());
        writeln!(w, "{},{its},{}", fmt_f64(row.value), row.status)?;
    }
    Ok(())
}

/// Rows of the image run from `y_max` (top) down to `y_min`.
fn top_down_rows(grid: &BasinGrid) -> impl Iterator<Item = &[Cell]> {
    (0..grid.ny).rev().map(move |j| &grid.cells[j * grid.nx..(j + 1) * grid.nx])
}

/// Binary 8-bit PGM of iteration counts, clamped to 255; non-converged cells are 255.
pub fn write_pgm<W: Write>(mut w: W, grid: &BasinGrid) -> io::Result<()> {
    write!(w, "P5\n{} {}\n255\n", grid.nx, grid.ny)?;
    let mut buf = Vec::with_capacity(grid.nx * grid.ny);
    for row in top_down_rows(grid) {
        buf.extend(row.iter().map(|c| if c.iterations == NOT_CONVERGED { 255 } else { c.iterations.min(255) as u8 }));
    }
    w.write_all(&buf)
}

pub fn root_color(id: u32) -> [u8; 3] {
    if id == 0 {
        PALETTE[0]
    } else {
        PALETTE[1 + (id as usize - 1) % (PALETTE.len() - 1)]
    }
}

/// Binary PPM of root ids using [`PALETTE`].
pub fn write_ppm<W: Write>(mut w: W, grid: &BasinGrid) -> io::Result<()> {
    write!(w, "P6\n{} {}\n255\n", grid.nx, grid.ny)?;
    let mut buf = Vec::with_capacity(3 * grid.nx * grid.ny);
    for row in top_down_rows(grid) {
        for c in row {
            buf.extend_from_slice(&root_color(c.root_id));
        }
    }
    w.write_all(&buf)
}

/// `x,y,iterations,root_id` per cell centre, row-major from `y_min`;
/// non-converged cells have iterations `-1`.
pub fn write_cells<W: Write>(mut w: W, grid: &BasinGrid) -> io::Result<()> {
    writeln!(w, "x,y,iterations,root_id")?;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let c = grid.cell(i, j);
            let [x, y] = grid.center(i, j);
            let its = if c.iterations == NOT_CONVERGED { -1 } else { i64::from(c.iterations) };
            writeln!(w, "{},{},{its},{}", fmt_f64(x), fmt_f64(y), c.root_id)?;
        }
    }
    Ok(())
}

/// Rebuild a grid from the output of [`write_cells`].
pub fn read_cells<R: BufRead>(r: R) -> Result<BasinGrid> {
    let bad = |line: usize, what: &str| Error::InvalidParameter(format!("cells csv line {line}: {what}"));
    let mut records = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if n == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(bad(n + 1, "expected 4 fields"));
        }
        let x: f64 = fields[0].parse().map_err(|_| bad(n + 1, "bad x"))?;
        let y: f64 = fields[1].parse().map_err(|_| bad(n + 1, "bad y"))?;
        let its: i64 = fields[2].parse().map_err(|_| bad(n + 1, "bad iterations"))?;
        let id: u32 = fields[3].parse().map_err(|_| bad(n + 1, "bad root_id"))?;
        records.push((x, y, its, id));
    }
    let xs: BTreeSet<u64> = records.iter().map(|r| r.0.to_bits()).collect();
    let ys: BTreeSet<u64> = records.iter().map(|r| r.1.to_bits()).collect();
    let (nx, ny) = (xs.len(), ys.len());
    if nx == 0 || nx * ny != records.len() {
        return Err(Error::DegenerateGrid(format!(
            "{} cells do not form a {nx}x{ny} lattice",
            records.len()
        )));
    }
    let mut cells = Vec::with_capacity(records.len());
    for &(_, _, its, id) in &records {
        let iterations = if its < 0 { NOT_CONVERGED } else { its as u32 };
        cells.push(Cell { iterations, root_id: id });
    }
    let first = records[0];
    let spacing = [
        if nx > 1 { records[1].0 - first.0 } else { 1.0 },
        if ny > 1 { records[nx].1 - first.1 } else { 1.0 },
    ];
    let origin = [first.0 - 0.5 * spacing[0], first.1 - 0.5 * spacing[1]];
    Ok(BasinGrid::from_cells(origin, spacing, nx, ny, cells))
}

/// What a CLI run did and which files it wrote.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub subcommand: String,
    pub problem: String,
    pub method: String,
    pub config: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(subcommand: &str, problem: &str, method: &str) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            problem: problem.into(),
            method: method.into(),
            ..Default::default()
        }
    }

    pub fn config(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.into(), value.to_string()));
    }

    /// `key = value` lines; every written file appears as an `output` line.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "subcommand = {}", self.subcommand)?;
        writeln!(w, "problem = {}", self.problem)?;
        writeln!(w, "method = {}", self.method)?;
        for (k, v) in &self.config {
            writeln!(w, "config.{k} = {v}")?;
        }
        for path in &self.outputs {
            writeln!(w, "output = {}", path.display())?;
        }
        writeln!(w, "wall_time_s = {:.6}", self.wall_time_s)
    }
}
