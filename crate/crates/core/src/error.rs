use thiserror::Error;

use crate::static_game::Equilibrium;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// No candidate passed regret certification. `best` is the candidate
    /// with the smallest regret, if any candidate could be formed at all.
    #[error("no equilibrium certified within regret {tolerance:e} (best candidate regret: {best_regret})")]
    EquilibriumNotFound {
        best: Option<Box<Equilibrium>>,
        best_regret: f64,
        tolerance: f64,
    },

    #[error("contract problem is infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
