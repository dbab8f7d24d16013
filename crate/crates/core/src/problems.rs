//! Benchmark problems with analytic derivatives and known roots.
//!
//! Entries are addressable by name with optional parameters, e.g.
//! `exp_h:H=500` or `two_spring:H=500`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Tensor3;
use crate::scalar::ScalarProblem;
use crate::vector::VectorProblem;

pub const DEFAULT_H: f64 = 500.0;

/// Names accepted by [`lookup`].
pub const CATALOG_NAMES: [&str; 5] = ["exp_h", "cubic_unity", "cubic_unity_real", "two_spring", "easom"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    ScalarReal,
    ScalarComplex,
    Vector,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::ScalarReal => "scalar_real",
            ProblemKind::ScalarComplex => "scalar_complex",
            ProblemKind::Vector => "vector",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Problem {
    Real(ScalarProblem<f64>),
    Complex(ScalarProblem<Complex64>),
    Vector(VectorProblem),
}

impl Problem {
    pub fn as_real(&self) -> Option<&ScalarProblem<f64>> {
        match self {
            Problem::Real(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<&ScalarProblem<Complex64>> {
        match self {
            Problem::Complex(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&VectorProblem> {
        match self {
            Problem::Vector(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub parameters: Vec<(String, f64)>,
    pub problem: Problem,
}

impl CatalogEntry {
    pub fn kind(&self) -> ProblemKind {
        match self.problem {
            Problem::Real(_) => ProblemKind::ScalarReal,
            Problem::Complex(_) => ProblemKind::ScalarComplex,
            Problem::Vector(_) => ProblemKind::Vector,
        }
    }

    /// Number of unknowns (1 for scalar problems).
    pub fn dim(&self) -> usize {
        match &self.problem {
            Problem::Vector(p) => p.dim(),
            _ => 1,
        }
    }

    /// Known roots as points of the plane; only meaningful for problems with
    /// at most two real unknowns.
    pub fn root_points(&self) -> Vec<[f64; 2]> {
        match &self.problem {
            Problem::Real(p) => p.known_roots().iter().map(|&r| [r, 0.0]).collect(),
            Problem::Complex(p) => p.known_roots().iter().map(|r| [r.re, r.im]).collect(),
            Problem::Vector(p) => p
                .known_roots()
                .iter()
                .map(|r| [r[0], r.get(1).copied().unwrap_or(0.0)])
                .collect(),
        }
    }

    /// `name:key=value,...` form that [`lookup`] accepts.
    pub fn spec_string(&self) -> String {
        if self.parameters.is_empty() {
            return self.name.clone();
        }
        let params: Vec<String> =
            self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}:{}", self.name, params.join(","))
    }
}

/// `r(x) = e^x - H`, root `ln H`.
pub fn make_exp_h(h: f64) -> Result<CatalogEntry> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("exp_h needs H > 0, got {h}")));
    }
    let problem = ScalarProblem::new("exp_h", move |x: f64| x.exp() - h, f64::exp)
        .with_second(f64::exp)
        .with_known_roots([h.ln()]);
    Ok(CatalogEntry {
        name: "exp_h".into(),
        parameters: vec![("H".into(), h)],
        problem: Problem::Real(problem),
    })
}

fn cube_roots_of_unity() -> [Complex64; 3] {
    let s = 0.75f64.sqrt();
    [Complex64::new(1.0, 0.0), Complex64::new(-0.5, -s), Complex64::new(-0.5, s)]
}

/// `r(z) = z^3 - 1` over the complex plane. Roots are ordered
/// `1`, `-0.5 - sqrt(0.75) i`, `-0.5 + sqrt(0.75) i`.
pub fn make_cubic_unity() -> CatalogEntry {
    let problem = ScalarProblem::new(
        "cubic_unity",
        |z: Complex64| z * z * z - 1.0,
        |z: Complex64| 3.0 * z * z,
    )
    .with_second(|z: Complex64| 6.0 * z)
    .with_known_roots(cube_roots_of_unity());
    CatalogEntry { name: "cubic_unity".into(), parameters: vec![], problem: Problem::Complex(problem) }
}

/// `r(x) = x^3 - 1` on the real line, root 1.
pub fn make_cubic_unity_real() -> CatalogEntry {
    let problem = ScalarProblem::new("cubic_unity_real", |x: f64| x * x * x - 1.0, |x| 3.0 * x * x)
        .with_second(|x| 6.0 * x)
        .with_known_roots([1.0]);
    CatalogEntry {
        name: "cubic_unity_real".into(),
        parameters: vec![],
        problem: Problem::Real(problem),
    }
}

/// Two exponential springs in series under load `H`:
///
/// ```text
/// r_1 = e^{x1} - e^{x2 - x1}
/// r_2 = e^{x2 - x1} - 1 - H
/// ```
///
/// with root `(ln(1 + H), 2 ln(1 + H))`.
pub fn make_two_spring(h: f64) -> Result<CatalogEntry> {
    if !(h > -1.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("two_spring needs H > -1, got {h}")));
    }
    let root = (1.0 + h).ln();
    let problem = VectorProblem::from_rows(
        "two_spring",
        2,
        move |i, x| {
            let u = (x[1] - x[0]).exp();
            match i {
                0 => x[0].exp() - u,
                _ => u - 1.0 - h,
            }
        },
        |i, x| {
            let u = (x[1] - x[0]).exp();
            match i {
                0 => vec![x[0].exp() + u, -u],
                _ => vec![-u, u],
            }
        },
    )
    .with_second(|x| {
        let u = (x[1] - x[0]).exp();
        let w = x[0].exp();
        let mut t = Tensor3::zeros(2);
        t[(0, 0, 0)] = w - u;
        t[(0, 0, 1)] = u;
        t[(0, 1, 0)] = u;
        t[(0, 1, 1)] = -u;
        t[(1, 0, 0)] = u;
        t[(1, 0, 1)] = -u;
        t[(1, 1, 0)] = -u;
        t[(1, 1, 1)] = u;
        t
    })
    .with_known_roots([vec![root, 2.0 * root]]);
    Ok(CatalogEntry {
        name: "two_spring".into(),
        parameters: vec![("H".into(), h)],
        problem: Problem::Vector(problem),
    })
}

/// Easom's function `f(x, y) = -cos x cos y exp(-x^2 - y^2)`.
pub fn easom(x: f64, y: f64) -> f64 {
    -x.cos() * y.cos() * (-x * x - y * y).exp()
}

// With q(t) = cos t e^{-t^2} and p(t) = -q'(t) = (sin t + 2t cos t) e^{-t^2},
// f = -q(x) q(y), so every derivative of f factors into one-variable pieces.
fn easom_q(t: f64) -> f64 {
    t.cos() * (-t * t).exp()
}

fn easom_p(t: f64) -> f64 {
    (t.sin() + 2.0 * t * t.cos()) * (-t * t).exp()
}

fn easom_dp(t: f64) -> f64 {
    ((3.0 - 4.0 * t * t) * t.cos() - 4.0 * t * t.sin()) * (-t * t).exp()
}

fn easom_d2p(t: f64) -> f64 {
    let b = (3.0 - 4.0 * t * t) * t.cos() - 4.0 * t * t.sin();
    let db = -12.0 * t * t.cos() - (7.0 - 4.0 * t * t) * t.sin();
    (db - 2.0 * t * b) * (-t * t).exp()
}

/// The gradient of Easom's function as a root-finding problem; its root at
/// the origin is the global minimum. The Jacobian is the Hessian of `f`.
pub fn make_easom_gradient() -> CatalogEntry {
    let problem = VectorProblem::from_rows(
        "easom",
        2,
        |i, x| {
            let (a, b) = if i == 0 { (x[0], x[1]) } else { (x[1], x[0]) };
            easom_p(a) * easom_q(b)
        },
        |i, x| {
            let (x0, x1) = (x[0], x[1]);
            let cross = -easom_p(x0) * easom_p(x1);
            match i {
                0 => vec![easom_dp(x0) * easom_q(x1), cross],
                _ => vec![cross, easom_q(x0) * easom_dp(x1)],
            }
        },
    )
    .with_second(|x| {
        let (px, py) = (easom_p(x[0]), easom_p(x[1]));
        let (dpx, dpy) = (easom_dp(x[0]), easom_dp(x[1]));
        let fxxx = easom_d2p(x[0]) * easom_q(x[1]);
        let fxxy = -dpx * py;
        let fxyy = -px * dpy;
        let fyyy = easom_q(x[0]) * easom_d2p(x[1]);
        let mut t = Tensor3::zeros(2);
        t[(0, 0, 0)] = fxxx;
        t[(0, 0, 1)] = fxxy;
        t[(0, 1, 0)] = fxxy;
        t[(0, 1, 1)] = fxyy;
        t[(1, 0, 0)] = fxxy;
        t[(1, 0, 1)] = fxyy;
        t[(1, 1, 0)] = fxyy;
        t[(1, 1, 1)] = fyyy;
        t
    })
    .with_known_roots([vec![0.0, 0.0]]);
    CatalogEntry { name: "easom".into(), parameters: vec![], problem: Problem::Vector(problem) }
}

/// Every catalog entry at its default parameters.
pub fn all_entries() -> Vec<CatalogEntry> {
    CATALOG_NAMES
        .iter()
        .map(|name| lookup(name).expect("catalog names resolve"))
        .collect()
}

/// Resolve `name[:key=value[,key=value]...]` to a catalog entry.
pub fn lookup(spec: &str) -> Result<CatalogEntry> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), p.trim()),
        None => (spec.trim(), ""),
    };
    let mut pairs = Vec::new();
    for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{item}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("`{}` is not a number", v.trim())))?;
        pairs.push((k.trim().to_string(), v));
    }

    let allowed: &[&str] = match name {
        "exp_h" | "two_spring" => &["H"],
        "cubic_unity" | "cubic_unity_real" | "easom" => &[],
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("`{name}` has no parameter `{k}`")));
    }
    let h = pairs.iter().rev().find(|(k, _)| k == "H").map_or(DEFAULT_H, |(_, v)| *v);

    match name {
        "exp_h" => make_exp_h(h),
        "two_spring" => make_two_spring(h),
        "cubic_unity" => Ok(make_cubic_unity()),
        "cubic_unity_real" => Ok(make_cubic_unity_real()),
        _ => Ok(make_easom_gradient()),
    }
}
