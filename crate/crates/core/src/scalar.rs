//! One-unknown iterations: Newton, Extended Newton (EN), Corrected Newton
//! (CN) and the Halley-alternate step, generic over real and complex fields.
//!
//! Every step is written once against [`Field`], so the same code drives the
//! real sweeps and the complex-plane fractals.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result, StepError};
use crate::field::Field;

/// Below this modulus a first derivative is treated as zero.
pub const DERIVATIVE_GUARD: f64 = 1e-300;

/// Below this modulus the CN / Halley-alternate denominator is treated as zero.
pub const DENOMINATOR_GUARD: f64 = f64::EPSILON;

pub const DEFAULT_EN_GUARD_EPS: f64 = 1e-12;

/// Relative offset of the default EN constant from the initial guess.
pub const DEFAULT_C_OFFSET: f64 = 1e-3;

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A residual `r` with its first and (optionally) second derivative.
#[derive(Clone)]
pub struct ScalarProblem<T: Field> {
    name: String,
    residual: ScalarFn<T>,
    first: ScalarFn<T>,
    second: Option<ScalarFn<T>>,
    known_roots: Vec<T>,
}

impl<T: Field> ScalarProblem<T> {
    pub fn new<R, D>(name: impl Into<String>, residual: R, derivative: D) -> Self
    where
        R: Fn(T) -> T + Send + Sync + 'static,
        D: Fn(T) -> T + Send + Sync + 'static,
    {
        ScalarProblem {
            name: name.into(),
            residual: Arc::new(residual),
            first: Arc::new(derivative),
            second: None,
            known_roots: Vec::new(),
        }
    }

    /// Attach `r''`, required by CN and the Halley-alternate step.
    pub fn with_second<S>(mut self, second: S) -> Self
    where
        S: Fn(T) -> T + Send + Sync + 'static,
    {
        self.second = Some(Arc::new(second));
        self
    }

    pub fn with_known_roots(mut self, roots: impl IntoIterator<Item = T>) -> Self {
        self.known_roots = roots.into_iter().collect();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn residual(&self, x: T) -> T {
        (self.residual)(x)
    }

    #[inline]
    pub fn derivative(&self, x: T) -> T {
        (self.first)(x)
    }

    #[inline]
    pub fn second_derivative(&self, x: T) -> Option<T> {
        self.second.as_ref().map(|f| f(x))
    }

    pub fn has_second(&self) -> bool {
        self.second.is_some()
    }

    pub fn known_roots(&self) -> &[T] {
        &self.known_roots
    }

    /// The known root closest to `x`, if any roots are registered.
    pub fn nearest_root(&self, x: T) -> Option<T> {
        self.known_roots
            .iter()
            .copied()
            .min_by(|a, b| (*a - x).modulus().total_cmp(&(*b - x).modulus()))
    }
}

impl<T: Field> fmt::Debug for ScalarProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarProblem")
            .field("name", &self.name)
            .field("has_second", &self.second.is_some())
            .field("known_roots", &self.known_roots)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarMethod {
    Newton,
    ExtendedNewton,
    CorrectedNewton,
    HalleyAlt,
}

impl ScalarMethod {
    pub const ALL: [ScalarMethod; 4] = [
        ScalarMethod::Newton,
        ScalarMethod::ExtendedNewton,
        ScalarMethod::CorrectedNewton,
        ScalarMethod::HalleyAlt,
    ];

    pub fn needs_second(self) -> bool {
        matches!(self, ScalarMethod::CorrectedNewton | ScalarMethod::HalleyAlt)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScalarMethod::Newton => "newton",
            ScalarMethod::ExtendedNewton => "en",
            ScalarMethod::CorrectedNewton => "cn",
            ScalarMethod::HalleyAlt => "halley-alt",
        }
    }
}

impl fmt::Display for ScalarMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for ScalarMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newton" => Ok(ScalarMethod::Newton),
            "en" => Ok(ScalarMethod::ExtendedNewton),
            "cn" => Ok(ScalarMethod::CorrectedNewton),
            "halley-alt" | "halley_alt" => Ok(ScalarMethod::HalleyAlt),
            other => Err(Error::InvalidConfig(format!(
                "unknown scalar method `{other}` (expected newton, en, cn or halley-alt)"
            ))),
        }
    }
}

/// Stopping rules and method selection for [`solve_scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub method: ScalarMethod,
    /// EN constant. `None` picks `x0 + 1e-3 (1 + |x0|)`.
    pub c: Option<T>,
    pub tol_residual: f64,
    pub tol_step: f64,
    pub max_iter: usize,
    pub diverge_magnitude: f64,
    pub en_guard_eps: f64,
}

impl<T: Field> SolverConfig<T> {
    pub fn new(method: ScalarMethod) -> Self {
        SolverConfig {
            method,
            c: None,
            tol_residual: 1e-12,
            tol_step: 0.0,
            max_iter: 100,
            diverge_magnitude: 1e150,
            en_guard_eps: DEFAULT_EN_GUARD_EPS,
        }
    }

    pub fn with_c(mut self, c: T) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_tol_residual(mut self, tol: f64) -> Self {
        self.tol_residual = tol;
        self
    }

    pub fn with_tol_step(mut self, tol: f64) -> Self {
        self.tol_step = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
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
        if !(self.en_guard_eps >= 0.0) {
            return Err(Error::InvalidConfig("en_guard_eps must be non-negative".into()));
        }
        Ok(())
    }
}

/// Default EN constant for a given starting point.
pub fn default_c<T: Field>(x0: T) -> T {
    x0 + T::from_real(DEFAULT_C_OFFSET * (1.0 + x0.modulus()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    MaxIter,
    Diverged,
    Stalled,
    DerivativeSingular,
}

impl Status {
    pub fn is_converged(self) -> bool {
        self == Status::Converged
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIter => "max_iter",
            Status::Diverged => "diverged",
            Status::Stalled => "stalled",
            Status::DerivativeSingular => "derivative_singular",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// Full record of a scalar solve. `iterates[0]` is the initial guess.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<T> {
    pub iterates: Vec<T>,
    pub residual_mags: Vec<f64>,
    /// `|x* - x_n|` against the known root nearest the final iterate; empty
    /// when the problem has no known roots.
    pub errors: Vec<f64>,
    pub status: Status,
    pub iterations_used: usize,
    /// Iterations where the selected step was replaced by a Newton step.
    pub fallback_steps: usize,
    /// The EN constant actually used (after default selection or perturbation).
    pub c_used: Option<T>,
}

impl<T: Field> IterationTrace<T> {
    pub fn final_iterate(&self) -> T {
        *self.iterates.last().expect("trace always holds the initial guess")
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_mags.last().expect("trace always holds the initial residual")
    }

    pub fn converged(&self) -> bool {
        self.status.is_converged()
    }
}

/// Newton step `-r(x) / r'(x)`.
pub fn newton_step<T: Field>(p: &ScalarProblem<T>, x: T) -> std::result::Result<T, StepError> {
    let r = p.residual(x);
    let dr = p.derivative(x);
    if dr.modulus() < DERIVATIVE_GUARD {
        return Err(StepError::DerivativeSingular);
    }
    Ok(-(r / dr))
}

/// Extended Newton step for a fixed constant `c`, with `r_c = r(c)` supplied
/// by the caller so it is evaluated once per solve.
pub fn en_step<T: Field>(
    p: &ScalarProblem<T>,
    x: T,
    c: T,
    r_c: T,
) -> std::result::Result<T, StepError> {
    en_step_guarded(p, x, c, r_c, DEFAULT_EN_GUARD_EPS)
}

pub(crate) fn en_step_guarded<T: Field>(
    p: &ScalarProblem<T>,
    x: T,
    c: T,
    r_c: T,
    guard_eps: f64,
) -> std::result::Result<T, StepError> {
    let offset = x - c;
    if offset.modulus() <= guard_eps * (1.0 + x.modulus()) {
        return Err(StepError::EnDegenerate);
    }
    let r = p.residual(x);
    let gap = r - r_c;
    // Only an exact tie is rejected here: near c the gap is legitimately small.
    if gap.modulus() <= DERIVATIVE_GUARD {
        return Err(StepError::EnDenominatorSingular);
    }
    let dr = p.derivative(x);
    let denom = r - offset * (dr * r_c) / gap;
    if denom.modulus() <= DERIVATIVE_GUARD {
        return Err(StepError::EnDenominatorSingular);
    }
    let step = -(offset * r) / denom;
    if !step.is_finite() {
        return Err(StepError::EnDenominatorSingular);
    }
    Ok(step)
}

/// Corrected Newton step `-(r/r') / (1 - r r'' / (2 r'^2))`, i.e. Halley's method.
pub fn cn_step<T: Field>(p: &ScalarProblem<T>, x: T) -> std::result::Result<T, StepError> {
    second_order_step(p, x, T::from_real(2.0))
}

/// Newton applied to `r / r'`: like [`cn_step`] without the factor 2.
pub fn halley_alt_step<T: Field>(p: &ScalarProblem<T>, x: T) -> std::result::Result<T, StepError> {
    second_order_step(p, x, T::one())
}

fn second_order_step<T: Field>(
    p: &ScalarProblem<T>,
    x: T,
    scale: T,
) -> std::result::Result<T, StepError> {
    let r = p.residual(x);
    let dr = p.derivative(x);
    let d2r = p
        .second_derivative(x)
        .ok_or(StepError::MissingSecondDerivative)?;
    if dr.modulus() < DERIVATIVE_GUARD {
        return Err(StepError::DerivativeSingular);
    }
    let denom = T::one() - r * d2r / (scale * dr * dr);
    if denom.modulus() < DENOMINATOR_GUARD || !denom.is_finite() {
        return Err(StepError::CnDenominatorSingular);
    }
    Ok(-(r / dr) / denom)
}

/// `|r''(zeta)| / (2 |r'(x)|)`, the factor that scales the squared error in
/// one Newton step.
pub fn nonlinearity_measure<T: Field>(
    p: &ScalarProblem<T>,
    zeta: T,
    x: T,
) -> std::result::Result<f64, StepError> {
    let dr = p.derivative(x);
    if dr.modulus() < DERIVATIVE_GUARD {
        return Err(StepError::DerivativeSingular);
    }
    let d2r = p
        .second_derivative(zeta)
        .ok_or(StepError::MissingSecondDerivative)?;
    Ok(d2r.modulus() / (2.0 * dr.modulus()))
}

struct EnState<T> {
    c: T,
    r_c: T,
}

/// Iterate the configured method from `x0`.
///
/// Only an invalid configuration is an `Err`; every numerical failure is
/// reported through [`IterationTrace::status`].
pub fn solve_scalar<T: Field>(
    p: &ScalarProblem<T>,
    x0: T,
    cfg: &SolverConfig<T>,
) -> Result<IterationTrace<T>> {
    cfg.validate()?;
    if cfg.method.needs_second() && !p.has_second() {
        return Err(StepError::MissingSecondDerivative.into());
    }

    let mut en = match cfg.method {
        ScalarMethod::ExtendedNewton => {
            let c = cfg.c.unwrap_or_else(|| default_c(x0));
            let r_c = p.residual(c);
            if !c.is_finite() || !r_c.is_finite() {
                return Err(Error::InvalidConfig("r(c) must be finite".into()));
            }
            Some(EnState { c, r_c })
        }
        _ => None,
    };

    let mut x = x0;
    let mut r_mag = p.residual(x).modulus();
    let mut iterates = vec![x];
    let mut residual_mags = vec![r_mag];
    let mut fallback_steps = 0;
    let mut iterations_used = 0;

    let mut status = if !x.is_finite() || !r_mag.is_finite() {
        Status::Diverged
    } else if r_mag <= cfg.tol_residual {
        Status::Converged
    } else {
        Status::MaxIter
    };

    while status == Status::MaxIter && iterations_used < cfg.max_iter {
        let step = match next_step(p, x, cfg, en.as_mut()) {
            Ok((step, fell_back)) => {
                fallback_steps += usize::from(fell_back);
                step
            }
            Err(_) => {
                status = Status::DerivativeSingular;
                break;
            }
        };

        let x_new = x + step;
        iterations_used += 1;
        r_mag = p.residual(x_new).modulus();
        iterates.push(x_new);
        residual_mags.push(r_mag);

        if !x_new.is_finite()
            || !r_mag.is_finite()
            || x_new.modulus() > cfg.diverge_magnitude
            || r_mag > cfg.diverge_magnitude
        {
            status = Status::Diverged;
        } else if r_mag <= cfg.tol_residual
            || (cfg.tol_step > 0.0 && step.modulus() <= cfg.tol_step)
        {
            status = Status::Converged;
        } else if x_new == x {
            status = Status::Stalled;
        }
        x = x_new;
    }

    let errors = match p.nearest_root(x) {
        Some(root) => iterates.iter().map(|&xi| (root - xi).modulus()).collect(),
        None => Vec::new(),
    };

    Ok(IterationTrace {
        iterates,
        residual_mags,
        errors,
        status,
        iterations_used,
        fallback_steps,
        c_used: en.map(|s| s.c),
    })
}

/// One step of the configured method, falling back to Newton where the
/// method's own step is undefined. Returns the step and whether it fell back.
fn next_step<T: Field>(
    p: &ScalarProblem<T>,
    x: T,
    cfg: &SolverConfig<T>,
    en: Option<&mut EnState<T>>,
) -> std::result::Result<(T, bool), StepError> {
    let attempt = match (cfg.method, en) {
        (ScalarMethod::Newton, _) => return newton_step(p, x).map(|s| (s, false)),
        (ScalarMethod::ExtendedNewton, Some(state)) => {
            match en_step_guarded(p, x, state.c, state.r_c, cfg.en_guard_eps) {
                Err(StepError::EnDegenerate) => {
                    // x landed on c: shift c off the stuck point for the rest of the solve.
                    // The first shift can sit exactly on the guard band, so double until clear.
                    let mut shift = (cfg.en_guard_eps * (1.0 + state.c.modulus())).max(f64::MIN_POSITIVE);
                    let base = state.c;
                    let mut result = Err(StepError::EnDegenerate);
                    for _ in 0..8 {
                        state.c = base + T::from_real(shift);
                        state.r_c = p.residual(state.c);
                        result = en_step_guarded(p, x, state.c, state.r_c, cfg.en_guard_eps);
                        if result != Err(StepError::EnDegenerate) {
                            break;
                        }
                        shift *= 2.0;
                    }
                    result
                }
                other => other,
            }
        }
        (ScalarMethod::ExtendedNewton, None) => unreachable!("EN state is set up before iterating"),
        (ScalarMethod::CorrectedNewton, _) => cn_step(p, x),
        (ScalarMethod::HalleyAlt, _) => halley_alt_step(p, x),
    };
    match attempt {
        Ok(step) => Ok((step, false)),
        Err(StepError::DerivativeSingular) => Err(StepError::DerivativeSingular),
        Err(_) => newton_step(p, x).map(|s| (s, true)),
    }
}
