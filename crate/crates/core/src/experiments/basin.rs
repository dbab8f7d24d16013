use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problems::{CatalogEntry, Problem};
use crate::scalar::{solve_scalar, ScalarMethod, ScalarProblem, SolverConfig};
use crate::vector::{solve_vector, VectorMethod, VectorProblem, VectorSolverConfig};

/// Iteration count stored for cells that did not reach a known root.
pub const NOT_CONVERGED: u32 = u32::MAX;

pub const DEFAULT_MATCH_TOL: f64 = 1e-6;
pub const GRID_MAX_ITER: usize = 100;
pub const GRID_TOL_RESIDUAL: f64 = 1e-10;

/// Axis-aligned rectangle of initial guesses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
            && x_max > x_min
            && y_max > y_min;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "degenerate window [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Window { x_min, x_max, y_min, y_max })
    }

    pub fn square(half_width: f64) -> Result<Self> {
        Window::new(-half_width, half_width, -half_width, half_width)
    }
}

/// Roots that cells are classified against; ids are 1-based positions.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    roots: Vec<[f64; 2]>,
    match_tol: f64,
}

impl RootSet {
    /// Fails if two roots lie within `2 * match_tol` of each other.
    pub fn new(roots: Vec<[f64; 2]>, match_tol: f64) -> Result<Self> {
        if !(match_tol > 0.0) {
            return Err(Error::InvalidParameter("match_tol must be positive".into()));
        }
        for (a, ra) in roots.iter().enumerate() {
            for rb in &roots[a + 1..] {
                if dist(*ra, *rb) <= 2.0 * match_tol {
                    return Err(Error::InvalidParameter(format!(
                        "roots {ra:?} and {rb:?} are closer than 2 * match_tol"
                    )));
                }
            }
        }
        Ok(RootSet { roots, match_tol })
    }

    pub fn from_entry(entry: &CatalogEntry) -> Result<Self> {
        RootSet::new(entry.root_points(), DEFAULT_MATCH_TOL)
    }

    pub fn roots(&self) -> &[[f64; 2]] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn match_tol(&self) -> f64 {
        self.match_tol
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// 1-based id of the root within `match_tol` of `x`, or 0.
pub fn classify_root(x: [f64; 2], roots: &RootSet) -> u32 {
    roots
        .roots
        .iter()
        .position(|r| dist(*r, x) <= roots.match_tol)
        .map_or(0, |k| k as u32 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub iterations: u32,
    pub root_id: u32,
}

impl Cell {
    pub const EMPTY: Cell = Cell { iterations: NOT_CONVERGED, root_id: 0 };

    pub fn converged(self) -> bool {
        self.root_id > 0
    }
}

/// Per-cell outcome of solving from each cell centre of a window.
///
/// Cells are stored row-major with row 0 at `y_min`. A cell counts as
/// converged only if its run converged to a root of the [`RootSet`]; runs that
/// converge elsewhere are stored as [`Cell::EMPTY`].
#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub origin: [f64; 2],
    pub spacing: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<Cell>,
}

impl BasinGrid {
    pub fn from_cells(origin: [f64; 2], spacing: [f64; 2], nx: usize, ny: usize, cells: Vec<Cell>) -> Self {
        assert_eq!(cells.len(), nx * ny, "cell count does not match grid shape");
        BasinGrid { origin, spacing, nx, ny, cells }
    }

    /// Unit-spaced grid from a root-id function; iterations are set to 1 for
    /// cells with a nonzero id.
    pub fn from_root_ids(nx: usize, ny: usize, id: impl Fn(usize, usize) -> u32) -> Self {
        let cells = (0..ny)
            .flat_map(|j| (0..nx).map(move |i| (i, j)))
            .map(|(i, j)| match id(i, j) {
                0 => Cell::EMPTY,
                k => Cell { iterations: 1, root_id: k },
            })
            .collect();
        BasinGrid::from_cells([0.0, 0.0], [1.0, 1.0], nx, ny, cells)
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[j * self.nx + i]
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.spacing[0],
            self.origin[1] + (j as f64 + 0.5) * self.spacing[1],
        ]
    }

    pub fn converged_count(&self) -> usize {
        self.cells.iter().filter(|c| c.converged()).count()
    }

    pub fn count_for_root(&self, id: u32) -> usize {
        self.cells.iter().filter(|c| c.root_id == id).count()
    }

    /// Distinct nonzero root ids present, ascending.
    pub fn root_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.cells.iter().map(|c| c.root_id).filter(|&k| k > 0).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

fn build_grid<F>(window: &Window, nx: usize, ny: usize, solve_cell: F) -> Result<BasinGrid>
where
    F: Fn([f64; 2]) -> Result<Cell> + Sync,
{
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidParameter("grid resolution must be at least 1x1".into()));
    }
    let spacing = [
        (window.x_max - window.x_min) / nx as f64,
        (window.y_max - window.y_min) / ny as f64,
    ];
    let origin = [window.x_min, window.y_min];
    let cells = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            solve_cell([
                origin[0] + (i as f64 + 0.5) * spacing[0],
                origin[1] + (j as f64 + 0.5) * spacing[1],
            ])
        })
        .collect::<Result<Vec<Cell>>>()?;
    Ok(BasinGrid { origin, spacing, nx, ny, cells })
}

fn cell_from(converged: bool, iterations: usize, last: [f64; 2], roots: &RootSet) -> Cell {
    if !converged {
        return Cell::EMPTY;
    }
    match classify_root(last, roots) {
        0 => Cell::EMPTY,
        k => Cell { iterations: iterations.min(NOT_CONVERGED as usize - 1) as u32, root_id: k },
    }
}

/// Newton-fractal style map: each cell centre `x + iy` is a complex initial guess.
pub fn basin_map_complex(
    p: &ScalarProblem<Complex64>,
    cfg: &SolverConfig<Complex64>,
    window: &Window,
    nx: usize,
    ny: usize,
    roots: &RootSet,
) -> Result<BasinGrid> {
    cfg.validate()?;
    build_grid(window, nx, ny, |[x, y]| {
        let trace = solve_scalar(p, Complex64::new(x, y), cfg)?;
        let z = trace.final_iterate();
        Ok(cell_from(trace.converged(), trace.iterations_used, [z.re, z.im], roots))
    })
}

/// Basin map of a two-unknown real system; each cell centre is `(x1, x2)`.
pub fn basin_map_plane(
    p: &VectorProblem,
    cfg: &VectorSolverConfig,
    window: &Window,
    nx: usize,
    ny: usize,
    roots: &RootSet,
) -> Result<BasinGrid> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: p.dim() });
    }
    cfg.validate(2)?;
    build_grid(window, nx, ny, |x0| {
        let trace = solve_vector(p, &x0, cfg)?;
        let last = trace.final_iterate();
        Ok(cell_from(trace.converged(), trace.iterations_used, [last[0], last[1]], roots))
    })
}

/// Solver settings for a basin map, matching the kind of problem mapped.
#[derive(Debug, Clone, PartialEq)]
pub enum GridConfig {
    Complex(SolverConfig<Complex64>),
    Plane(VectorSolverConfig),
}

/// Grid defaults: at most 100 iterations, residual tolerance 1e-10.
pub fn grid_scalar_config(method: ScalarMethod) -> SolverConfig<Complex64> {
    SolverConfig::new(method)
        .with_max_iter(GRID_MAX_ITER)
        .with_tol_residual(GRID_TOL_RESIDUAL)
}

pub fn grid_vector_config(method: VectorMethod) -> VectorSolverConfig {
    VectorSolverConfig::new(method)
        .with_max_iter(GRID_MAX_ITER)
        .with_tol_residual(GRID_TOL_RESIDUAL)
}

/// Dispatch on the catalog entry: complex scalar problems give fractals,
/// two-unknown systems give real-plane basins.
pub fn basin_map(
    entry: &CatalogEntry,
    cfg: &GridConfig,
    window: &Window,
    nx: usize,
    ny: usize,
    roots: &RootSet,
) -> Result<BasinGrid> {
    match (&entry.problem, cfg) {
        (Problem::Complex(p), GridConfig::Complex(c)) => basin_map_complex(p, c, window, nx, ny, roots),
        (Problem::Vector(p), GridConfig::Plane(c)) => basin_map_plane(p, c, window, nx, ny, roots),
        _ => Err(Error::InvalidParameter(format!(
            "cannot map basins of `{}` ({}) with this solver configuration",
            entry.name,
            entry.kind()
        ))),
    }
}
