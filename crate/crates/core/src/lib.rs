//! Anonymization-level selection under de-anonymization attacks.
//!
//! Two sharing organizations pick a k-anonymity level from `{k_low, k_high}`
//! while an attacker picks between a background-knowledge attack, a
//! homogeneity attack, or no attack. A data collector prices the shared data
//! with screening contracts, and the whole interaction can be repeated with a
//! trust coefficient that evolves with attack outcomes.
//!
//! * [`model`]: closed-form utilities, costs and breach probabilities.
//! * [`static_game`]: payoff tensor and symmetric Nash equilibrium solver.
//! * [`oracle`]: brute-force regret verification and strategy grids.
//! * [`contracts`]: collector reward design under IR/IC constraints.
//! * [`repeated`]: trust dynamics and seeded multi-round simulation.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod contracts;
mod error;
pub mod model;
pub mod oracle;
pub mod repeated;
pub mod static_game;
pub mod tolerances;

pub use crate::error::{Error, Result};
pub use crate::model::{AttackAction, GameParams};
pub use crate::static_game::{
    solve_equilibrium, AttackerStrategy, Equilibrium, EquilibriumKind, PayoffTensor,
};
