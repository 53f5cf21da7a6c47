//! Repeated sharing with an evolving trust coefficient.
//!
//! Each round re-solves the static game under the current `γ`, samples the
//! players' actions from the equilibrium and the breach from its joint
//! probability, then updates `γ`: blocked rounds (no attack, or a failed
//! attack) move it halfway to 1, breaches halve it.
//!
//! The random stream is a `ChaCha8Rng` seeded from the configured seed. Every
//! round draws exactly four uniforms, in order: organization 1's level,
//! organization 2's level, the attacker's action, the breach.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::contracts::{self, LongTermOffer};
use crate::error::{Error, Result};
use crate::model::{self, AttackAction, GameParams};
use crate::static_game::{solve_equilibrium, Equilibrium};
use crate::tolerances;

/// `(γ + 1)/2` after a blocked round, `γ/2` after a breach.
pub fn trust_update(gamma_prev: f64, attack_blocked: bool) -> f64 {
    if attack_blocked {
        (gamma_prev + 1.0) / 2.0
    } else {
        gamma_prev / 2.0
    }
}

/// `γ` after each round; `blocked[t]` is the outcome of round `t`.
pub fn trust_trajectory(gamma0: f64, blocked: &[bool]) -> Vec<f64> {
    blocked
        .iter()
        .scan(gamma0, |gamma, &b| {
            *gamma = trust_update(*gamma, b);
            Some(*gamma)
        })
        .collect()
}

/// Organization utility with the per-round reward `R_t / k_i`.
pub fn dynamic_org_utility(
    k_i: u32,
    k_j: u32,
    action: AttackAction,
    value: f64,
    gamma_t: f64,
    params: &GameParams,
) -> Result<f64> {
    let round = GameParams {
        gamma: gamma_t,
        ..params.clone()
    };
    model::org_utility_with_reward(k_i, k_j, action, value / f64::from(k_i), &round)
}

/// How a round's dataset value becomes the organizations' rewards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardRule {
    /// `r(k_low) = low·v`, `r(k_high) = high·v`.
    ValueShare { low: f64, high: f64 },
    /// `r(k) = v/k`.
    PerLevel,
    /// Closed-form collector contract for the two levels at the round's `γ`,
    /// with the round's value as valuation.
    Contract,
}

impl Default for RewardRule {
    fn default() -> Self {
        RewardRule::ValueShare {
            low: model::LOW_REWARD_SHARE,
            high: model::HIGH_REWARD_SHARE,
        }
    }
}

impl RewardRule {
    /// `[r(k_low), r(k_high)]` for one round.
    pub fn rewards(&self, value: f64, gamma: f64, params: &GameParams) -> Result<[f64; 2]> {
        match *self {
            RewardRule::ValueShare { low, high } => Ok([low * value, high * value]),
            RewardRule::PerLevel => Ok([value / f64::from(params.k_low), value / f64::from(params.k_high)]),
            RewardRule::Contract => {
                let make = |k| contracts::make_type(k, gamma, params.v_size, params.log_base, value);
                let menu = contracts::two_type_optimal(&make(params.k_low)?, &make(params.k_high)?)?;
                Ok([menu.entries[0].reward, menu.entries[1].reward])
            }
        }
    }
}

/// Who decides whether a round is breached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackScript {
    /// Sample from the equilibrium and a Bernoulli breach draw.
    Equilibrium,
    /// The attacker never attacks.
    NeverAttack,
    /// `outcomes[t]` says whether round `t` is breached. A breached round
    /// whose sampled action is no attack uses the attack with the larger
    /// equilibrium weight (background knowledge on ties).
    Outcomes(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub params: GameParams,
    pub horizon: usize,
    pub gamma0: f64,
    /// Dataset value per round; also the attacker's reward.
    pub values: Vec<f64>,
    pub seed: u64,
    pub reward_rule: RewardRule,
    pub script: AttackScript,
}

impl SimulationConfig {
    pub fn new(params: GameParams, horizon: usize, gamma0: f64, values: Vec<f64>, seed: u64) -> Self {
        SimulationConfig {
            params,
            horizon,
            gamma0,
            values,
            seed,
            reward_rule: RewardRule::default(),
            script: AttackScript::Equilibrium,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.values.len() != self.horizon {
            return Err(Error::invalid(
                "value_series",
                format!("has {} entries for horizon {}", self.values.len(), self.horizon),
            ));
        }
        if !(0.0..=1.0).contains(&self.gamma0) {
            return Err(Error::invalid("gamma0", format!("must lie in [0, 1], got {}", self.gamma0)));
        }
        if let AttackScript::Outcomes(o) = &self.script {
            if o.len() < self.horizon {
                return Err(Error::invalid(
                    "script",
                    format!("has {} outcomes for horizon {}", o.len(), self.horizon),
                ));
            }
        }
        self.params.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// 1-based round index.
    pub step: usize,
    /// `γ` in effect while the round is played.
    pub gamma: f64,
    /// `γ` after the round's outcome.
    pub gamma_next: f64,
    pub value: f64,
    pub equilibrium: Equilibrium,
    pub org_levels: [u32; 2],
    pub rewards: [f64; 2],
    pub attack_action: AttackAction,
    pub attack_succeeded: bool,
    pub org_realized_utility: [f64; 2],
    pub attacker_realized_utility: f64,
    /// `Σ θ_i (v − r_i)` over both organizations.
    pub collector_utility: f64,
    /// Contract net `θ·r − c + γ·k` of each organization.
    pub org_contract_net: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub rounds: Vec<RoundRecord>,
    pub seed: u64,
    pub horizon: usize,
    pub cumulative_collector_utility: f64,
}

/// Collector accounting with and without a long-term offer to one organization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongTermAccounting {
    pub org: usize,
    pub offer: LongTermOffer,
    /// Cumulative collector utility if the organization skips its binding steps.
    pub baseline: f64,
    /// Cumulative collector utility when the organization shares every step
    /// and is paid the offer.
    pub with_offer: f64,
}

impl SimulationTrace {
    /// 1-based rounds where organization `org`'s contract net is zero.
    pub fn binding_steps(&self, org: usize) -> BTreeSet<usize> {
        self.rounds
            .iter()
            .filter(|r| r.org_contract_net[org].abs() <= tolerances::LP_FEASIBILITY)
            .map(|r| r.step)
            .collect()
    }

    /// Long-term offer sized from organization `org`'s binding rounds.
    pub fn long_term_offer(&self, org: usize, fraction: f64) -> Result<Option<LongTermOffer>> {
        let theta: Vec<f64> = self.rounds.iter().map(|r| 1.0 / f64::from(r.org_levels[org])).collect();
        let values: Vec<f64> = self.rounds.iter().map(|r| r.value).collect();
        let rewards: Vec<f64> = self.rounds.iter().map(|r| r.rewards[org]).collect();
        contracts::long_term_offer(&theta, &values, &rewards, &self.binding_steps(org), fraction)
    }

    pub fn long_term_accounting(&self, org: usize, fraction: f64) -> Result<Option<LongTermAccounting>> {
        let Some(offer) = self.long_term_offer(org, fraction)? else {
            return Ok(None);
        };
        let total = self.cumulative_collector_utility;
        Ok(Some(LongTermAccounting {
            org,
            baseline: total - offer.missed_gain,
            with_offer: total - offer.total_offered,
            offer,
        }))
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.gamma_next).collect()
    }
}

/// A failed round; `partial` holds the rounds completed before it.
#[derive(Debug, thiserror::Error)]
#[error("round {step} failed: {source}")]
pub struct SimulationError {
    pub step: usize,
    pub partial: Box<SimulationTrace>,
    #[source]
    pub source: Error,
}

/// Simulation with the default reward rule and equilibrium attacks.
pub fn simulate(
    params: &GameParams,
    horizon: usize,
    gamma0: f64,
    values: &[f64],
    seed: u64,
) -> std::result::Result<SimulationTrace, SimulationError> {
    simulate_with(&SimulationConfig::new(params.clone(), horizon, gamma0, values.to_vec(), seed))
}

pub fn simulate_with(config: &SimulationConfig) -> std::result::Result<SimulationTrace, SimulationError> {
    let mut trace = SimulationTrace {
        rounds: Vec::with_capacity(config.horizon),
        seed: config.seed,
        horizon: config.horizon,
        cumulative_collector_utility: 0.0,
    };
    if let Err(source) = config.validate() {
        return Err(SimulationError {
            step: 0,
            partial: Box::new(trace),
            source,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut gamma = config.gamma0;
    for step in 1..=config.horizon {
        match play_round(config, step, gamma, &mut rng) {
            Ok(record) => {
                gamma = record.gamma_next;
                trace.cumulative_collector_utility += record.collector_utility;
                trace.rounds.push(record);
            }
            Err(source) => {
                return Err(SimulationError {
                    step,
                    partial: Box::new(trace),
                    source,
                })
            }
        }
    }
    Ok(trace)
}

fn play_round(config: &SimulationConfig, step: usize, gamma: f64, rng: &mut ChaCha8Rng) -> Result<RoundRecord> {
    let base = &config.params;
    let value = config.values[step - 1];
    let [reward_low, reward_high] = config.reward_rule.rewards(value, gamma, base)?;
    let params = GameParams {
        gamma,
        attacker_reward: value,
        reward_low,
        reward_high,
        ..base.clone()
    };
    let equilibrium = solve_equilibrium(&params)?;

    let draws: [f64; 4] = [rng.random(), rng.random(), rng.random(), rng.random()];
    let level = |u: f64| if u < equilibrium.org_p { params.k_low } else { params.k_high };
    let org_levels = [level(draws[0]), level(draws[1])];
    let q = equilibrium.attacker_dist;
    let sampled = if draws[2] < q.background {
        AttackAction::BackgroundKnowledge
    } else if draws[2] < q.background + q.homogeneity {
        AttackAction::Homogeneity
    } else {
        AttackAction::NoAttack
    };

    let (attack_action, attack_succeeded) = match &config.script {
        AttackScript::Equilibrium => {
            let p = model::breach_joint(sampled, org_levels[0], org_levels[1], &params)?;
            (sampled, sampled.is_attack() && draws[3] < p)
        }
        AttackScript::NeverAttack => (AttackAction::NoAttack, false),
        AttackScript::Outcomes(outcomes) => {
            let breached = outcomes[step - 1];
            let action = if breached && !sampled.is_attack() {
                if q.background >= q.homogeneity {
                    AttackAction::BackgroundKnowledge
                } else {
                    AttackAction::Homogeneity
                }
            } else {
                sampled
            };
            (action, breached)
        }
    };

    let rewards = [params.reward_for(org_levels[0])?, params.reward_for(org_levels[1])?];
    let mut org_realized_utility = [0.0; 2];
    let mut org_contract_net = [0.0; 2];
    let mut collector_utility = 0.0;
    for o in 0..2 {
        let k = org_levels[o];
        let theta = 1.0 / f64::from(k);
        let cost = model::anonymization_cost(k, params.v_size, params.log_base)?;
        let trust = model::trust_value(gamma, k)?;
        let paid = if attack_succeeded { 0.0 } else { rewards[o] };
        org_realized_utility[o] = paid - cost + trust;
        org_contract_net[o] = theta * rewards[o] - cost + trust;
        collector_utility += theta * (value - rewards[o]);
    }
    let attacker_realized_utility = if attack_action.is_attack() {
        let gain = if attack_succeeded { params.attacker_reward } else { 0.0 };
        gain - params.attack_cost(attack_action)
    } else {
        0.0
    };

    Ok(RoundRecord {
        step,
        gamma,
        gamma_next: trust_update(gamma, !attack_succeeded),
        value,
        equilibrium,
        org_levels,
        rewards,
        attack_action,
        attack_succeeded,
        org_realized_utility,
        attacker_realized_utility,
        collector_utility,
        org_contract_net,
    })
}
