//! Newton-type root finding with enlarged basins of attraction.
//!
//! Besides the classical Newton iteration the crate implements
//!
//! * **Extended Newton (EN)**: Newton applied to `(x - c) r(x) / (r(x) - r(c))`,
//!   which has the same roots as `r` but is far less nonlinear for a good `c`;
//! * **Corrected Newton (CN)**: the `c -> x` limit of EN, which coincides with
//!   Halley's method;
//! * **quasi-Corrected Newton (QCN)**: a single-solve approximation of the
//!   multivariate CN step that only needs the `r_{i,ji}` slice of the second
//!   derivatives.
//!
//! Scalar iterations ([`scalar`]) run over `f64` and `Complex64`; systems
//! ([`vector`]) use dense Jacobians. [`problems`] holds the benchmark catalog
//! and [`experiments`] the sweep, basin, fractal-dimension and convergence
//! order tooling built on top.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod field;
pub mod linalg;
pub mod output;
pub mod problems;
pub mod scalar;
pub mod vector;

pub use error::{Error, Result, StepError};
pub use field::Field;
pub use scalar::{
    cn_step, en_step, halley_alt_step, newton_step, nonlinearity_measure, solve_scalar,
    IterationTrace, ScalarMethod, ScalarProblem, SolverConfig, Status,
};
pub use linalg::{linear_solve, Matrix, Tensor3};
pub use vector::{
    cn_step_multi, en_step_multi, fd_second_diagonal, newton_step_multi,
    qcn_step_multi, solve_vector, VectorMethod, VectorProblem, VectorSolverConfig, VectorTrace,
};
