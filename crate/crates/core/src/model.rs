//! Closed-form utility primitives.
//!
//! Everything here is a pure function of its arguments. Money is an abstract
//! real-valued unit and nothing is rounded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The attacker's three options.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AttackAction {
    BackgroundKnowledge,
    Homogeneity,
    NoAttack,
}

impl AttackAction {
    /// Canonical order, also used as tensor index.
    pub const ALL: [AttackAction; 3] = [
        AttackAction::BackgroundKnowledge,
        AttackAction::Homogeneity,
        AttackAction::NoAttack,
    ];

    pub fn index(self) -> usize {
        match self {
            AttackAction::BackgroundKnowledge => 0,
            AttackAction::Homogeneity => 1,
            AttackAction::NoAttack => 2,
        }
    }

    /// Single-letter code: `B`, `H` or `N`.
    pub fn code(self) -> &'static str {
        match self {
            AttackAction::BackgroundKnowledge => "B",
            AttackAction::Homogeneity => "H",
            AttackAction::NoAttack => "N",
        }
    }

    pub fn is_attack(self) -> bool {
        self != AttackAction::NoAttack
    }
}

impl std::fmt::Display for AttackAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Every scalar of the two-organization game.
///
/// `Default` is the calibrated configuration used throughout the experiments:
/// `k ∈ {3, 7}`, `α = 0.9`, `γ = 1`, `p(B) = 0.5`, `p(H_s) = 0.6`,
/// `p(H_d) = 0.2`, `|V| = 2` (base-10 cost logarithm), `c_a(B) = 7.0`,
/// `c_a(H) = 6.2`, and a dataset value of 50 (see [`GameParams::with_dataset_value`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameParams {
    pub k_low: u32,
    pub k_high: u32,
    /// Information-security measure in the breach denominator `α·k + 1`.
    pub alpha: f64,
    /// Coefficient of trust.
    pub gamma: f64,
    pub p_background: f64,
    /// Homogeneity success probability when both organizations use the same k.
    pub p_homog_same: f64,
    /// Homogeneity success probability when the organizations' k differ.
    pub p_homog_diff: f64,
    pub cost_attack_background: f64,
    pub cost_attack_homog: f64,
    /// `R_a`, the attacker's reward for revealing the data.
    pub attacker_reward: f64,
    /// `r(k_low)`.
    pub reward_low: f64,
    /// `r(k_high)`.
    pub reward_high: f64,
    /// `|V|`, the number of attribute subsets driving the anonymization cost.
    pub v_size: f64,
    pub log_base: f64,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams {
            k_low: 3,
            k_high: 7,
            alpha: 0.9,
            gamma: 1.0,
            p_background: 0.5,
            p_homog_same: 0.6,
            p_homog_diff: 0.2,
            cost_attack_background: 7.0,
            cost_attack_homog: 6.2,
            attacker_reward: 50.0,
            reward_low: 45.0,
            reward_high: 40.0,
            v_size: 2.0,
            log_base: 10.0,
        }
    }
}

/// Share of the dataset value paid for `k_low` data in the experiments.
pub const LOW_REWARD_SHARE: f64 = 0.9;
/// Share of the dataset value paid for `k_high` data in the experiments.
pub const HIGH_REWARD_SHARE: f64 = 0.8;

impl GameParams {
    /// Sets `R_a = v`, `r(k_low) = 0.9·v`, `r(k_high) = 0.8·v`.
    pub fn with_dataset_value(mut self, value: f64) -> Self {
        self.attacker_reward = value;
        self.reward_low = LOW_REWARD_SHARE * value;
        self.reward_high = HIGH_REWARD_SHARE * value;
        self
    }

    pub fn levels(&self) -> [u32; 2] {
        [self.k_low, self.k_high]
    }

    /// Checks the hard domain of every field.
    ///
    /// The modeling assumptions on the ordering of probabilities and costs
    /// are reported separately by [`GameParams::assumption_violations`], since
    /// sweeps and degenerate test cases legitimately step outside them.
    pub fn validate(&self) -> Result<()> {
        if self.k_low == 0 {
            return Err(Error::invalid("k_low", "must be at least 1"));
        }
        if self.k_low >= self.k_high {
            return Err(Error::invalid(
                "k_high",
                format!("must exceed k_low ({} >= {})", self.k_low, self.k_high),
            ));
        }
        check_positive("alpha", self.alpha)?;
        check_unit("gamma", self.gamma)?;
        check_unit("p_background", self.p_background)?;
        check_unit("p_homog_same", self.p_homog_same)?;
        check_unit("p_homog_diff", self.p_homog_diff)?;
        check_finite("cost_attack_background", self.cost_attack_background)?;
        check_finite("cost_attack_homog", self.cost_attack_homog)?;
        check_finite("attacker_reward", self.attacker_reward)?;
        check_finite("reward_low", self.reward_low)?;
        check_finite("reward_high", self.reward_high)?;
        check_cost_domain(self.v_size, self.log_base)
    }

    /// Human-readable list of violated modeling assumptions
    /// (`p(B) > p(H_d) > 0`, `p(H_s) > p(H_d)`, `c_a(B) > c_a(H) > 0`).
    pub fn assumption_violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !(self.p_background > self.p_homog_diff) {
            out.push("p_background > p_homog_diff");
        }
        if !(self.p_homog_diff > 0.0) {
            out.push("p_homog_diff > 0");
        }
        if !(self.p_homog_same > self.p_homog_diff) {
            out.push("p_homog_same > p_homog_diff");
        }
        if !(self.cost_attack_background > self.cost_attack_homog) {
            out.push("cost_attack_background > cost_attack_homog");
        }
        if !(self.cost_attack_homog > 0.0) {
            out.push("cost_attack_homog > 0");
        }
        out
    }

    /// `r(k)` from the configured reward schedule.
    pub fn reward_for(&self, k: u32) -> Result<f64> {
        if k == self.k_low {
            Ok(self.reward_low)
        } else if k == self.k_high {
            Ok(self.reward_high)
        } else {
            Err(self.level_error(k))
        }
    }

    /// `c_a(a)`; zero for no attack.
    pub fn attack_cost(&self, action: AttackAction) -> f64 {
        match action {
            AttackAction::BackgroundKnowledge => self.cost_attack_background,
            AttackAction::Homogeneity => self.cost_attack_homog,
            AttackAction::NoAttack => 0.0,
        }
    }

    /// Largest success probability over all attacks.
    pub fn p_max(&self) -> f64 {
        self.p_background
            .max(self.p_homog_same)
            .max(self.p_homog_diff)
    }

    fn check_level(&self, k: u32) -> Result<()> {
        if k == self.k_low || k == self.k_high {
            Ok(())
        } else {
            Err(self.level_error(k))
        }
    }

    fn level_error(&self, k: u32) -> Error {
        Error::invalid(
            "k",
            format!(
                "{k} is not an available level (expected {} or {})",
                self.k_low, self.k_high
            ),
        )
    }
}

fn check_finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite, got {x}")))
    }
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive, got {x}")))
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must lie in [0, 1], got {x}")))
    }
}

fn check_cost_domain(v_size: f64, log_base: f64) -> Result<()> {
    if !(v_size.is_finite() && v_size >= 1.0) {
        return Err(Error::invalid("v_size", format!("must be >= 1, got {v_size}")));
    }
    if !(log_base.is_finite() && log_base > 1.0) {
        return Err(Error::invalid("log_base", format!("must be > 1, got {log_base}")));
    }
    Ok(())
}

/// Anonymization cost `log_b(|V|^(2k)) = 2·k·log_b |V|`.
pub fn anonymization_cost(k: u32, v_size: f64, log_base: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    check_cost_domain(v_size, log_base)?;
    Ok(2.0 * f64::from(k) * v_size.ln() / log_base.ln())
}

/// Trust level `γ·k`.
pub fn trust_value(gamma: f64, k: u32) -> Result<f64> {
    check_unit("gamma", gamma)?;
    Ok(gamma * f64::from(k))
}

/// Success probability `p(a)` of an attack on organization `i` given both levels.
pub fn attack_success_prob(
    action: AttackAction,
    k_i: u32,
    k_j: u32,
    params: &GameParams,
) -> Result<f64> {
    params.check_level(k_i)?;
    params.check_level(k_j)?;
    Ok(match action {
        AttackAction::BackgroundKnowledge => params.p_background,
        AttackAction::Homogeneity if k_i == k_j => params.p_homog_same,
        AttackAction::Homogeneity => params.p_homog_diff,
        AttackAction::NoAttack => 0.0,
    })
}

/// Single-organization breach probability `p / (α·k + 1)`.
pub fn breach_single(p_attack: f64, alpha: f64, k: u32) -> Result<f64> {
    check_unit("p_attack", p_attack)?;
    check_positive("alpha", alpha)?;
    if k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    Ok(p_attack / (alpha * f64::from(k) + 1.0))
}

/// Both organizations' breach probabilities under `action`.
fn breach_pair(action: AttackAction, k_1: u32, k_2: u32, params: &GameParams) -> Result<(f64, f64)> {
    let p = attack_success_prob(action, k_1, k_2, params)?;
    Ok((
        breach_single(p, params.alpha, k_1)?,
        breach_single(p, params.alpha, k_2)?,
    ))
}

/// Interdependent breach probability `1 − (1 − b₁)(1 − b₂)`.
pub fn breach_joint(action: AttackAction, k_1: u32, k_2: u32, params: &GameParams) -> Result<f64> {
    let (b1, b2) = breach_pair(action, k_1, k_2, params)?;
    Ok(1.0 - (1.0 - b1) * (1.0 - b2))
}

/// Organization utility with the reward taken from the params' schedule.
pub fn org_utility(
    k_i: u32,
    k_j: u32,
    action: AttackAction,
    params: &GameParams,
) -> Result<f64> {
    let reward = params.reward_for(k_i)?;
    org_utility_with_reward(k_i, k_j, action, reward, params)
}

/// Organization utility `r·(1 − b_i)(1 − b_j) − c(k_i) + γ·k_i` with an
/// explicit reward (used when contracts or the repeated game set it).
pub fn org_utility_with_reward(
    k_i: u32,
    k_j: u32,
    action: AttackAction,
    reward: f64,
    params: &GameParams,
) -> Result<f64> {
    let (b_i, b_j) = breach_pair(action, k_i, k_j, params)?;
    let cost = anonymization_cost(k_i, params.v_size, params.log_base)?;
    let trust = trust_value(params.gamma, k_i)?;
    Ok(reward * (1.0 - b_i) * (1.0 - b_j) - cost + trust)
}

/// Attacker utility `b(a, k₁, k₂)·R_a − c_a(a)`; exactly zero for no attack.
pub fn attacker_utility(k_1: u32, k_2: u32, action: AttackAction, params: &GameParams) -> Result<f64> {
    params.check_level(k_1)?;
    params.check_level(k_2)?;
    if action == AttackAction::NoAttack {
        return Ok(0.0);
    }
    let breach = breach_joint(action, k_1, k_2, params)?;
    Ok(breach * params.attacker_reward - params.attack_cost(action))
}

/// Minimum profit factor δ: the reward fraction an organization keeps under
/// the most successful attack.
pub fn min_profit_factor(k_i: u32, k_j: u32, params: &GameParams) -> Result<f64> {
    params.check_level(k_i)?;
    params.check_level(k_j)?;
    let p_max = params.p_max();
    let keep = |k: u32| breach_single(p_max, params.alpha, k).map(|b| 1.0 - b);
    Ok(keep(k_i)? * keep(k_j)?)
}
