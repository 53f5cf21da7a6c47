//! Numerical thresholds shared by the solvers and their verification.

/// Target for `|E[u_a(B)] - E[u_a(H)]|` when bisecting the attacker's
/// indifference condition.
pub const BISECTION: f64 = 1e-10;

/// Maximum unilateral-deviation gain accepted when certifying an equilibrium.
pub const REGRET: f64 = 1e-6;

/// Below this magnitude a denominator or coefficient is treated as zero.
pub const DEGENERACY: f64 = 1e-12;

/// Leading-coefficient threshold under which the analytic quadratic is
/// solved as a linear equation.
pub const QUADRATIC_LEADING: f64 = 1e-14;

/// Slack allowed when a solved probability lands just outside `[0, 1]`.
pub const PROBABILITY_SLACK: f64 = 1e-9;

/// Constraint satisfaction required of LP solutions.
pub const LP_FEASIBILITY: f64 = 1e-9;
