//! Newton, EN and CN fractals of `z^3 - 1` on `[-2, 2]^2`.
//!
//! Each method writes an iteration-count PGM, a root-coloured PPM and the
//! cells CSV that `fractal_dimension` reads back.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use num_complex::Complex64;
use rootbeyond::experiments::{basin_map_complex, grid_scalar_config, BasinGrid, RootSet, Window};
use rootbeyond::output::{write_cells, write_pgm, write_ppm};
use rootbeyond::problems::make_cubic_unity;
use rootbeyond::ScalarMethod;

pub fn run(out_dir: &Path, n: usize) -> rootbeyond::Result<Vec<(ScalarMethod, BasinGrid)>> {
    let entry = make_cubic_unity();
    let p = entry.problem.as_complex().expect("cubic_unity is complex");
    let roots = RootSet::from_entry(&entry)?;
    let window = Window::square(2.0)?;

    let mut grids = Vec::new();
    for method in [ScalarMethod::Newton, ScalarMethod::ExtendedNewton, ScalarMethod::CorrectedNewton] {
        let mut cfg = grid_scalar_config(method);
        if method == ScalarMethod::ExtendedNewton {
            cfg = cfg.with_c(Complex64::new(-0.65, -0.65));
        }
        let grid = basin_map_complex(p, &cfg, &window, n, n, &roots)?;
        write_pgm(File::create(out_dir.join(format!("fractal_{method}.pgm")))?, &grid)?;
        write_ppm(File::create(out_dir.join(format!("fractal_{method}.ppm")))?, &grid)?;
        write_cells(BufWriter::new(File::create(out_dir.join(format!("fractal_{method}.csv")))?), &grid)?;
        let per_root: Vec<usize> = (1..=3).map(|k| grid.count_for_root(k)).collect();
        println!("{method:>10}: converged {:>6}/{}  per root {per_root:?}", grid.converged_count(), grid.cells.len());
        grids.push((method, grid));
    }
    Ok(grids)
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    run(Path::new(&dir), 256).map(|_| ())
}
