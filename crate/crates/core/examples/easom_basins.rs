//! Basins of attraction for the stationary point of the Easom function,
//! found as a root of its gradient, on `[-2, 2]^2`.
//!
//! Writes `easom_<method>.pgm` (iterations) and `.ppm` (converged or not).

use std::fs::File;
use std::path::Path;

use rootbeyond::experiments::{basin_map_plane, grid_vector_config, RootSet, Window};
use rootbeyond::output::{write_pgm, write_ppm};
use rootbeyond::problems::make_easom_gradient;
use rootbeyond::VectorMethod;

/// Converged-cell count per method on an `n x n` grid.
pub fn run(out_dir: &Path, n: usize) -> rootbeyond::Result<Vec<(VectorMethod, usize)>> {
    let entry = make_easom_gradient();
    let p = entry.problem.as_vector().expect("easom gradient is a system");
    let roots = RootSet::from_entry(&entry)?;
    let window = Window::square(2.0)?;

    let mut counts = Vec::new();
    for method in [VectorMethod::Newton, VectorMethod::CorrectedNewton, VectorMethod::QuasiCorrectedNewton] {
        let grid = basin_map_plane(p, &grid_vector_config(method), &window, n, n, &roots)?;
        write_pgm(File::create(out_dir.join(format!("easom_{method}.pgm")))?, &grid)?;
        write_ppm(File::create(out_dir.join(format!("easom_{method}.ppm")))?, &grid)?;
        let share = 100.0 * grid.converged_count() as f64 / grid.cells.len() as f64;
        println!("{method:>7}: {:>6} of {} cells converge ({share:.1}%)", grid.converged_count(), grid.cells.len());
        counts.push((method, grid.converged_count()));
    }
    Ok(counts)
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    run(Path::new(&dir), 101).map(|_| ())
}
