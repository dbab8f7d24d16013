use crate::error::{Error, Result};

use super::basin::BasinGrid;
use super::fit_slope;

/// Converged cells with a converged 4-neighbour of a different root id.
///
/// Non-converged cells never count as boundary and never make a neighbour one.
pub fn boundary_mask(grid: &BasinGrid) -> Vec<bool> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut mask = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let id = grid.cell(i, j).root_id;
            if id == 0 {
                continue;
            }
            let differs = |ii: usize, jj: usize| {
                let other = grid.cell(ii, jj).root_id;
                other != 0 && other != id
            };
            mask[j * nx + i] = (i > 0 && differs(i - 1, j))
                || (i + 1 < nx && differs(i + 1, j))
                || (j > 0 && differs(i, j - 1))
                || (j + 1 < ny && differs(i, j + 1));
        }
    }
    mask
}

/// `(box size, occupied boxes)` for sizes 1, 2, 4, .. up to `min(nx, ny) / 4`.
pub fn box_counts(grid: &BasinGrid) -> Vec<(usize, usize)> {
    let mask = boundary_mask(grid);
    let (nx, ny) = (grid.nx, grid.ny);
    let largest = nx.min(ny) / 4;
    let mut out = Vec::new();
    let mut size = 1;
    loop {
        let bx = nx.div_ceil(size);
        let by = ny.div_ceil(size);
        let mut occupied = vec![false; bx * by];
        for j in 0..ny {
            for i in 0..nx {
                if mask[j * nx + i] {
                    occupied[(j / size) * bx + i / size] = true;
                }
            }
        }
        out.push((size, occupied.iter().filter(|&&o| o).count()));
        size *= 2;
        if size > largest {
            break;
        }
    }
    out
}

/// Box-counting dimension of the basin boundary: slope of `log N` against
/// `log(1 / size)`.
pub fn box_counting_dimension(grid: &BasinGrid) -> Result<f64> {
    if grid.root_ids().len() < 2 {
        return Err(Error::DegenerateGrid("fewer than two distinct root ids".into()));
    }
    let counts = box_counts(grid);
    if counts.len() < 2 {
        return Err(Error::DegenerateGrid(format!(
            "{}x{} grid is too small for more than one box size",
            grid.nx, grid.ny
        )));
    }
    if counts.iter().any(|&(_, n)| n == 0) {
        return Err(Error::DegenerateGrid("no boundary between converged basins".into()));
    }
    let xs: Vec<f64> = counts.iter().map(|&(s, _)| -(s as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, n)| (n as f64).ln()).collect();
    Ok(fit_slope(&xs, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn straight_line_has_dimension_one() {
        let grid = BasinGrid::from_root_ids(128, 128, |i, _| if i < 64 { 1 } else { 2 });
        let d = box_counting_dimension(&grid).unwrap();
        assert!((d - 1.0).abs() <= 0.1, "{d}");
    }

    #[test]
    fn checkerboard_fills_the_plane() {
        let grid = BasinGrid::from_root_ids(64, 64, |i, j| 1 + ((i + j) % 2) as u32);
        let d = box_counting_dimension(&grid).unwrap();
        assert!((d - 2.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn degenerate_grids() {
        let one = BasinGrid::from_root_ids(32, 32, |_, _| 1);
        assert!(matches!(box_counting_dimension(&one), Err(Error::DegenerateGrid(_))));
        let tiny = BasinGrid::from_root_ids(4, 4, |i, _| 1 + (i % 2) as u32);
        assert!(box_counting_dimension(&tiny).is_err());
        // two basins separated by a non-converged band
        let apart = BasinGrid::from_root_ids(32, 32, |i, _| match i {
            0..=9 => 1,
            10..=20 => 0,
            _ => 2,
        });
        assert!(box_counting_dimension(&apart).is_err());
    }

    #[test]
    fn non_converged_cells_are_not_boundary() {
        let grid = BasinGrid::from_root_ids(3, 1, |i, _| [1, 0, 2][i]);
        assert_eq!(boundary_mask(&grid), vec![false, false, false]);
        let grid = BasinGrid::from_root_ids(3, 1, |i, _| [1, 2, 0][i]);
        assert_eq!(boundary_mask(&grid), vec![true, true, false]);
    }

    #[test]
    fn box_sizes_are_powers_of_two() {
        let grid = BasinGrid::from_root_ids(64, 40, |i, _| 1 + (i >= 30) as u32);
        let sizes: Vec<usize> = box_counts(&grid).iter().map(|&(s, _)| s).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8]);
    }

    proptest! {
        #[test]
        fn dimension_stays_in_unit_square_range(
            n in 8usize..40,
            ids in prop::collection::vec(0u32..4, 1600),
        ) {
            let grid = BasinGrid::from_root_ids(n, n, |i, j| ids[(j * n + i) % ids.len()]);
            if let Ok(d) = box_counting_dimension(&grid) {
                prop_assert!((0.0..=2.0 + 1e-12).contains(&d), "{}", d);
            }
        }
    }
}
