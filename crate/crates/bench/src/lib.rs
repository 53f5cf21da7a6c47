//! Shared inputs for the solver benchmarks.

use anongame::GameParams;

/// Calibrated parameters at dataset value `v`.
pub fn calibrated(value: f64) -> GameParams {
    GameParams::default().with_dataset_value(value)
}
