//! Numerical tolerances, centralized so every module agrees on what "equal"
//! means.

/// Allowed deviation of a density-operator trace from one.
pub const TRACE: f64 = 1e-10;

/// Allowed entrywise deviation between a matrix and its adjoint.
pub const HERMITICITY: f64 = 1e-10;

/// Eigenvalues may dip this far below zero and still count as nonnegative.
pub const PSD_SLACK: f64 = 1e-9;

/// Pointwise agreement threshold for exact algebraic identities.
pub const EQUALITY: f64 = 1e-12;

/// Branch probabilities must sum to one within this bound.
pub const PROB_CLOSURE: f64 = 1e-10;

/// Below this probability a measurement branch carries no conditional state.
pub const DEGENERATE_PROB: f64 = 1e-12;

/// Agreement threshold for quadrature averages against closed forms.
pub const AVERAGE: f64 = 1e-9;
