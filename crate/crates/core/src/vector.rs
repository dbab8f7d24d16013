//! Iterations for square systems `r_i(x_1, .., x_m) = 0`.
//!
//! Notation follows the usual index convention: `r_{i,j}` is the Jacobian and
//! `r_{i,jk}` the second-derivative tensor. All storage is dense.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result, StepError};
use crate::linalg::{linear_solve, norm2, Matrix, Tensor3};
use crate::scalar::{Status, DEFAULT_C_OFFSET};

pub type ResidualFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;
pub type SecondFn = Arc<dyn Fn(&[f64]) -> Tensor3 + Send + Sync>;
pub type ComponentFn = Arc<dyn Fn(usize, &[f64]) -> f64 + Send + Sync>;
pub type RowFn = Arc<dyn Fn(usize, &[f64]) -> Vec<f64> + Send + Sync>;

/// An `m`-unknown system with its Jacobian and optional second derivatives.
///
/// Per-row evaluation (`residual_component`, `jacobian_row`) is what EN and
/// the finite-difference slice use; problems built with
/// [`VectorProblem::from_rows`] evaluate only the requested row.
#[derive(Clone)]
pub struct VectorProblem {
    name: String,
    m: usize,
    component: ComponentFn,
    row: RowFn,
    second: Option<SecondFn>,
    known_roots: Vec<Vec<f64>>,
}

impl VectorProblem {
    /// Build from per-row residual and Jacobian-row evaluators.
    pub fn from_rows<C, R>(name: impl Into<String>, m: usize, component: C, row: R) -> Self
    where
        C: Fn(usize, &[f64]) -> f64 + Send + Sync + 'static,
        R: Fn(usize, &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        assert!(m >= 1, "a system needs at least one unknown");
        VectorProblem {
            name: name.into(),
            m,
            component: Arc::new(component),
            row: Arc::new(row),
            second: None,
            known_roots: Vec::new(),
        }
    }

    /// Build from whole-vector residual and Jacobian evaluators. Row access
    /// evaluates the full vector or matrix and picks one entry.
    pub fn new<F, J>(name: impl Into<String>, m: usize, residual: F, jacobian: J) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        J: Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    {
        let residual: ResidualFn = Arc::new(residual);
        let jacobian: JacobianFn = Arc::new(jacobian);
        Self::from_rows(
            name,
            m,
            move |i, x| residual(x)[i],
            move |i, x| jacobian(x).row(i).to_vec(),
        )
    }

    /// Attach the analytic tensor `r_{i,jk}`.
    pub fn with_second<S>(mut self, second: S) -> Self
    where
        S: Fn(&[f64]) -> Tensor3 + Send + Sync + 'static,
    {
        self.second = Some(Arc::new(second));
        self
    }

    pub fn with_known_roots(mut self, roots: impl IntoIterator<Item = Vec<f64>>) -> Self {
        self.known_roots = roots.into_iter().collect();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn known_roots(&self) -> &[Vec<f64>] {
        &self.known_roots
    }

    pub fn has_second(&self) -> bool {
        self.second.is_some()
    }

    #[inline]
    pub fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
        (self.component)(i, x)
    }

    #[inline]
    pub fn jacobian_row(&self, i: usize, x: &[f64]) -> Vec<f64> {
        (self.row)(i, x)
    }

    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m).map(|i| self.residual_component(i, x)).collect()
    }

    pub fn jacobian(&self, x: &[f64]) -> Matrix {
        let rows: Vec<Vec<f64>> = (0..self.m).map(|i| self.jacobian_row(i, x)).collect();
        Matrix::from_rows(&rows)
    }

    /// The analytic second-derivative tensor, if supplied.
    pub fn second(&self, x: &[f64]) -> Option<Tensor3> {
        self.second.as_ref().map(|f| f(x))
    }

    pub fn nearest_root(&self, x: &[f64]) -> Option<&[f64]> {
        self.known_roots
            .iter()
            .min_by(|a, b| distance(a, x).total_cmp(&distance(b, x)))
            .map(Vec::as_slice)
    }
}

impl fmt::Debug for VectorProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorProblem")
            .field("name", &self.name)
            .field("m", &self.m)
            .field("has_second", &self.second.is_some())
            .field("known_roots", &self.known_roots)
            .finish()
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorMethod {
    Newton,
    ExtendedNewton,
    CorrectedNewton,
    QuasiCorrectedNewton,
}

impl VectorMethod {
    pub const ALL: [VectorMethod; 4] = [
        VectorMethod::Newton,
        VectorMethod::ExtendedNewton,
        VectorMethod::CorrectedNewton,
        VectorMethod::QuasiCorrectedNewton,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VectorMethod::Newton => "newton",
            VectorMethod::ExtendedNewton => "en",
            VectorMethod::CorrectedNewton => "cn",
            VectorMethod::QuasiCorrectedNewton => "qcn",
        }
    }
}

impl fmt::Display for VectorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for VectorMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newton" => Ok(VectorMethod::Newton),
            "en" => Ok(VectorMethod::ExtendedNewton),
            "cn" => Ok(VectorMethod::CorrectedNewton),
            "qcn" => Ok(VectorMethod::QuasiCorrectedNewton),
            other => Err(Error::InvalidConfig(format!(
                "unknown vector method `{other}` (expected newton, en, cn or qcn)"
            ))),
        }
    }
}

/// Where CN and QCN take second derivatives from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SecondSource {
    /// The problem's analytic tensor when it has one, finite differences otherwise.
    #[default]
    PreferAnalytic,
    /// Always central differences of the Jacobian.
    FiniteDifference,
}

/// Finite-difference settings shared by the CN and QCN steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOptions {
    pub fd_step_base: f64,
    pub source: SecondSource,
}

impl Default for SecondOptions {
    fn default() -> Self {
        SecondOptions { fd_step_base: f64::EPSILON.sqrt(), source: SecondSource::PreferAnalytic }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorSolverConfig {
    pub method: VectorMethod,
    /// EN constants `c_i`. `None` offsets each component of `x0` the same way
    /// the scalar solver does.
    pub c: Option<Vec<f64>>,
    pub tol_residual: f64,
    pub tol_step: f64,
    pub max_iter: usize,
    pub diverge_magnitude: f64,
    pub fd_step_base: f64,
    pub row_guard_eps: f64,
    pub second_source: SecondSource,
}

impl VectorSolverConfig {
    pub fn new(method: VectorMethod) -> Self {
        VectorSolverConfig {
            method,
            c: None,
            tol_residual: 1e-12,
            tol_step: 0.0,
            max_iter: 100,
            diverge_magnitude: 1e150,
            fd_step_base: f64::EPSILON.sqrt(),
            row_guard_eps: 1e-12,
            second_source: SecondSource::PreferAnalytic,
        }
    }

    pub fn with_c(mut self, c: Vec<f64>) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_tol_residual(mut self, tol: f64) -> Self {
        self.tol_residual = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_second_source(mut self, source: SecondSource) -> Self {
        self.second_source = source;
        self
    }

    pub fn second_options(&self) -> SecondOptions {
        SecondOptions { fd_step_base: self.fd_step_base, source: self.second_source }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if !(self.tol_residual >= 0.0 && self.tol_step >= 0.0) {
            return Err(Error::InvalidConfig("tolerances must be non-negative".into()));
        }
        if self.tol_residual == 0.0 && self.tol_step == 0.0 {
            return Err(Error::InvalidConfig(
                "at least one of tol_residual and tol_step must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if !(self.diverge_magnitude > 0.0) {
            return Err(Error::InvalidConfig("diverge_magnitude must be positive".into()));
        }
        if !(self.fd_step_base > 0.0) || !(self.row_guard_eps >= 0.0) {
            return Err(Error::InvalidConfig("fd_step_base and row_guard_eps must be positive".into()));
        }
        if let Some(c) = &self.c {
            if c.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: c.len() });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorTrace {
    pub iterates: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
    /// Euclidean distance to the known root nearest the final iterate.
    pub errors: Vec<f64>,
    pub status: Status,
    pub iterations_used: usize,
    /// EN rows replaced by Newton rows, plus CN/QCN steps replaced by Newton steps.
    pub fallback_rows: usize,
}

impl VectorTrace {
    pub fn final_iterate(&self) -> &[f64] {
        self.iterates.last().expect("trace always holds the initial guess")
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_norms.last().expect("trace always holds the initial residual")
    }

    pub fn converged(&self) -> bool {
        self.status.is_converged()
    }
}

/// A multivariate step plus how many rows (or whole steps) fell back to Newton.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStep {
    pub delta: Vec<f64>,
    pub fallback_rows: usize,
}

/// Newton step: solve `sum_j r_{i,j} dx_j = -r_i`.
pub fn newton_step_multi(p: &VectorProblem, x: &[f64]) -> std::result::Result<Vec<f64>, StepError> {
    let r = p.residual(x);
    let jac = p.jacobian(x);
    newton_from_parts(&jac, &r)
}

fn newton_from_parts(jac: &Matrix, r: &[f64]) -> std::result::Result<Vec<f64>, StepError> {
    let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
    linear_solve(jac, &rhs)
}

/// Extended Newton step with one constant `c_i` per equation.
///
/// Row `i` compares `r_i(x)` with `r_i(x_ci)`, where `x_ci` is `x` with its
/// `i`-th component replaced by `c_i`. Rows where those residuals coincide
/// (relative to `row_guard_eps`) are replaced by the plain Newton row.
pub fn en_step_multi(
    p: &VectorProblem,
    x: &[f64],
    c: &[f64],
    row_guard_eps: f64,
) -> std::result::Result<MultiStep, StepError> {
    let m = p.dim();
    assert_eq!(c.len(), m, "one EN constant per equation");
    let mut a = Matrix::zeros(m, m);
    let mut rhs = vec![0.0; m];
    let mut fallback_rows = 0;
    let mut x_ci = x.to_vec();

    for i in 0..m {
        let r_i = p.residual_component(i, x);
        let jac_row = p.jacobian_row(i, x);
        x_ci[i] = c[i];
        let r_ci = p.residual_component(i, &x_ci);
        let gap = r_i - r_ci;

        if !(gap.abs() > row_guard_eps * (1.0 + r_i.abs())) {
            a.row_mut(i).copy_from_slice(&jac_row);
            rhs[i] = -r_i;
            fallback_rows += 1;
        } else {
            // The row is multiplied through by the gap; for m = 1 this performs
            // exactly the scalar EN arithmetic.
            let jac_row_ci = p.jacobian_row(i, &x_ci);
            let offset = x[i] - c[i];
            let row = a.row_mut(i);
            for j in 0..m {
                let cross = if i == j { 0.0 } else { jac_row_ci[j] * r_i };
                row[j] = offset * (cross - jac_row[j] * r_ci) / gap;
            }
            row[i] += r_i;
            rhs[i] = -(offset * r_i);
        }
        x_ci[i] = x[i];
    }

    let delta = linear_solve(&a, &rhs)?;
    Ok(MultiStep { delta, fallback_rows })
}

/// Full tensor `r_{i,jk}`: analytic when available and allowed, else central
/// differences of the Jacobian with `h_k = fd_step_base (1 + |x_k|)`.
pub fn second_tensor(p: &VectorProblem, x: &[f64], opts: &SecondOptions) -> Tensor3 {
    if opts.source == SecondSource::PreferAnalytic {
        if let Some(t) = p.second(x) {
            return t;
        }
    }
    fd_second_tensor(p, x, opts.fd_step_base)
}

/// Central-difference tensor of the Jacobian (2m Jacobian evaluations).
pub fn fd_second_tensor(p: &VectorProblem, x: &[f64], fd_step_base: f64) -> Tensor3 {
    let m = p.dim();
    let mut t = Tensor3::zeros(m);
    let mut probe = x.to_vec();
    for k in 0..m {
        let h = fd_step_base * (1.0 + x[k].abs());
        probe[k] = x[k] + h;
        let plus = p.jacobian(&probe);
        probe[k] = x[k] - h;
        let minus = p.jacobian(&probe);
        probe[k] = x[k];
        for i in 0..m {
            for j in 0..m {
                t[(i, j, k)] = (plus[(i, j)] - minus[(i, j)]) / (2.0 * h);
            }
        }
    }
    t
}

/// The slice `s[(i, j)] = r_{i,ji}` by central differences of row `i` of the
/// Jacobian along `x_i`: 2m row evaluations in total.
pub fn fd_second_diagonal(p: &VectorProblem, x: &[f64], fd_step_base: f64) -> Matrix {
    let m = p.dim();
    let mut s = Matrix::zeros(m, m);
    let mut probe = x.to_vec();
    for i in 0..m {
        let h = fd_step_base * (1.0 + x[i].abs());
        probe[i] = x[i] + h;
        let plus = p.jacobian_row(i, &probe);
        probe[i] = x[i] - h;
        let minus = p.jacobian_row(i, &probe);
        probe[i] = x[i];
        for (j, out) in s.row_mut(i).iter_mut().enumerate() {
            *out = (plus[j] - minus[j]) / (2.0 * h);
        }
    }
    s
}

fn second_diagonal(p: &VectorProblem, x: &[f64], opts: &SecondOptions) -> Matrix {
    if opts.source == SecondSource::PreferAnalytic {
        if let Some(t) = p.second(x) {
            let m = p.dim();
            let mut s = Matrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    s[(i, j)] = t[(i, j, i)];
                }
            }
            return s;
        }
    }
    fd_second_diagonal(p, x, opts.fd_step_base)
}

/// Corrected Newton step: a Newton solve followed by
/// `sum_j (r_{i,j} + 1/2 sum_k r_{i,jk} dxN_k) dx_j = -r_i`.
///
/// If the corrected matrix is singular the Newton step is returned and
/// counted as a fallback.
pub fn cn_step_multi(
    p: &VectorProblem,
    x: &[f64],
    opts: &SecondOptions,
) -> std::result::Result<MultiStep, StepError> {
    let m = p.dim();
    let r = p.residual(x);
    let jac = p.jacobian(x);
    let newton = newton_from_parts(&jac, &r)?;
    let t = second_tensor(p, x, opts);

    let mut a = jac;
    for i in 0..m {
        for j in 0..m {
            let curvature: f64 = (0..m).map(|k| t[(i, j, k)] * newton[k]).sum();
            a[(i, j)] += 0.5 * curvature;
        }
    }
    let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
    match linear_solve(&a, &rhs) {
        Ok(delta) => Ok(MultiStep { delta, fallback_rows: 0 }),
        Err(_) => Ok(MultiStep { delta: newton, fallback_rows: 1 }),
    }
}

/// Quasi-Corrected Newton step: the single solve
/// `sum_j (r_{i,i} r_{i,j} - 1/2 r_{i,ji} r_i) dx_j = -r_i r_{i,i}`.
pub fn qcn_step_multi(
    p: &VectorProblem,
    x: &[f64],
    opts: &SecondOptions,
) -> std::result::Result<MultiStep, StepError> {
    let m = p.dim();
    let r = p.residual(x);
    let jac = p.jacobian(x);
    let slice = second_diagonal(p, x, opts);

    let mut a = Matrix::zeros(m, m);
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let diag = jac[(i, i)];
        for j in 0..m {
            a[(i, j)] = diag * jac[(i, j)] - 0.5 * slice[(i, j)] * r[i];
        }
        rhs[i] = -r[i] * diag;
    }
    match linear_solve(&a, &rhs) {
        Ok(delta) => Ok(MultiStep { delta, fallback_rows: 0 }),
        Err(_) => newton_from_parts(&jac, &r).map(|delta| MultiStep { delta, fallback_rows: 1 }),
    }
}

/// Iterate the configured method from `x0`. Only invalid input is an `Err`.
pub fn solve_vector(p: &VectorProblem, x0: &[f64], cfg: &VectorSolverConfig) -> Result<VectorTrace> {
    let m = p.dim();
    if x0.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x0.len() });
    }
    cfg.validate(m)?;

    let c: Vec<f64> = match &cfg.c {
        Some(c) => c.clone(),
        None => x0.iter().map(|v| v + DEFAULT_C_OFFSET * (1.0 + v.abs())).collect(),
    };
    let opts = cfg.second_options();

    let mut x = x0.to_vec();
    let mut r_norm = norm2(&p.residual(&x));
    let mut iterates = vec![x.clone()];
    let mut residual_norms = vec![r_norm];
    let mut fallback_rows = 0;
    let mut iterations_used = 0;

    let mut status = if !all_finite(&x) || !r_norm.is_finite() {
        Status::Diverged
    } else if r_norm <= cfg.tol_residual {
        Status::Converged
    } else {
        Status::MaxIter
    };

    while status == Status::MaxIter && iterations_used < cfg.max_iter {
        let step = match cfg.method {
            VectorMethod::Newton => newton_step_multi(p, &x).map(|delta| MultiStep { delta, fallback_rows: 0 }),
            VectorMethod::ExtendedNewton => en_step_multi(p, &x, &c, cfg.row_guard_eps),
            VectorMethod::CorrectedNewton => cn_step_multi(p, &x, &opts),
            VectorMethod::QuasiCorrectedNewton => qcn_step_multi(p, &x, &opts),
        };
        let step = match step {
            Ok(step) => step,
            Err(_) => {
                status = Status::DerivativeSingular;
                break;
            }
        };
        fallback_rows += step.fallback_rows;

        let x_new: Vec<f64> = x.iter().zip(&step.delta).map(|(a, b)| a + b).collect();
        iterations_used += 1;
        r_norm = norm2(&p.residual(&x_new));
        residual_norms.push(r_norm);

        if !all_finite(&x_new)
            || !r_norm.is_finite()
            || norm2(&x_new) > cfg.diverge_magnitude
            || r_norm > cfg.diverge_magnitude
        {
            status = Status::Diverged;
        } else if r_norm <= cfg.tol_residual
            || (cfg.tol_step > 0.0 && norm2(&step.delta) <= cfg.tol_step)
        {
            status = Status::Converged;
        } else if x_new == x {
            status = Status::Stalled;
        }
        iterates.push(x_new.clone());
        x = x_new;
    }

    let errors = match p.nearest_root(&x) {
        Some(root) => iterates.iter().map(|xi| distance(root, xi)).collect(),
        None => Vec::new(),
    };

    Ok(VectorTrace { iterates, residual_norms, errors, status, iterations_used, fallback_rows })
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}
