//! Pulse optimisation for one player against a fixed opponent strategy.
//!
//! The objective is the opponent-averaged cost `E[½‖ρ(T) − ρ_T‖²_F]`. Its
//! gradient comes from one forward Lindblad sweep and one backward costate
//! sweep per opponent branch; [`finite_difference_gradient`] is the
//! independent check. [`optimize`] runs BFGS with a strong-Wolfe line search.

mod bfgs;
mod cost;
mod gradient;
mod problem;
mod quadrature;

pub use bfgs::{bfgs_minimize, BfgsReport, BfgsSettings, StopReason};
pub use cost::{cost, CostSpec};
pub use gradient::{central_difference, finite_difference_gradient, gradient, gradient_element};
pub use problem::{
    multistart_optimize, multistart_points, optimize, OptimizationProblem, OptimizationResult,
};
pub use quadrature::integrate_uniform;
