//! Generalized secant root finding in extended precision.
//!
//! The iteration `x_{n+1} = x_n - f(x_n) / p'(x_n)`, where `p`
//! interpolates `f` at the last `k + 1` iterates, together with the
//! arithmetic, divided differences and convergence analysis it needs.

pub mod analysis;
pub mod divdiff;
pub mod error;
pub mod funcspec;
pub mod iterate;
pub mod realnum;

pub use divdiff::DiagonalState;
pub use error::{Error, Result};
pub use iterate::{
    newton_solve, solve, IterationRecord, Method, ProblemSpec, RealFn, SolveReport, SolverConfig,
    StopRule, Termination,
};
pub use realnum::{Precision, Real, RealError};
