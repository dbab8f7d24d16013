//! Box-counting dimension of basin boundaries: two synthetic sanity grids,
//! then the `z^3 - 1` fractals for Newton, EN and CN.

use rootbeyond::experiments::{
    basin_map_complex, box_counting_dimension, box_counts, grid_scalar_config, BasinGrid, RootSet, Window,
};
use num_complex::Complex64;
use rootbeyond::problems::make_cubic_unity;
use rootbeyond::ScalarMethod;

pub fn run(n: usize) -> rootbeyond::Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    let line = BasinGrid::from_root_ids(n, n, |i, _| 1 + u32::from(2 * i >= n));
    let checker = BasinGrid::from_root_ids(n, n, |i, j| 1 + ((i + j) % 2) as u32);
    out.push(("straight line".to_string(), box_counting_dimension(&line)?));
    out.push(("checkerboard".to_string(), box_counting_dimension(&checker)?));

    let entry = make_cubic_unity();
    let p = entry.problem.as_complex().expect("cubic_unity is complex");
    let roots = RootSet::from_entry(&entry)?;
    let window = Window::square(2.0)?;
    for method in [ScalarMethod::Newton, ScalarMethod::ExtendedNewton, ScalarMethod::CorrectedNewton] {
        let mut cfg = grid_scalar_config(method);
        if method == ScalarMethod::ExtendedNewton {
            cfg = cfg.with_c(Complex64::new(-0.65, -0.65));
        }
        let grid = basin_map_complex(p, &cfg, &window, n, n, &roots)?;
        println!("{method} box counts (size, boxes): {:?}", box_counts(&grid));
        out.push((format!("{method} fractal"), box_counting_dimension(&grid)?));
    }
    for (name, d) in &out {
        println!("{name:>16}: {d:.4}");
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> rootbeyond::Result<()> {
    run(256).map(|_| ())
}
