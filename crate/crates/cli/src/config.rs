//! Experiment configuration: a JSON file merged with command-line overrides.

use std::path::{Path, PathBuf};

use anongame::repeated::{AttackScript, RewardRule};
use anongame::GameParams;
use serde::{Deserialize, Serialize};

use crate::UsageError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub game: GameParams,
    /// Dataset value `v`: sets `attacker_reward = v`, `reward_low = 0.9·v`,
    /// `reward_high = 0.8·v`. Applied before explicit reward overrides.
    pub value: Option<f64>,
    pub sweep: Option<SweepConfig>,
    pub contract: Option<ContractConfig>,
    pub simulate: Option<SimulateConfig>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ContractMethod {
    /// Closed form when all valuations are equal, full-IC LP otherwise.
    #[default]
    Auto,
    ClosedForm,
    /// LP with every pairwise IC constraint.
    Lp,
    /// LP with IR and reward monotonicity between neighboring levels.
    LpAdjacent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeSpec {
    pub k: u32,
    pub valuation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractConfig {
    pub types: Vec<TypeSpec>,
    #[serde(default)]
    pub method: ContractMethod,
}

/// Attack outcomes for a simulation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScriptSpec {
    /// Sample attacks and breaches from each round's equilibrium.
    #[default]
    Equilibrium,
    NeverAttack,
    /// Attacks may happen but never succeed.
    AllBlocked,
    /// Blocked, breached, blocked, breached, …
    AlternateBreach,
    /// Explicit per-round breach flags.
    Outcomes(Vec<bool>),
}

impl ScriptSpec {
    pub fn to_script(&self, horizon: usize) -> AttackScript {
        match self {
            ScriptSpec::Equilibrium => AttackScript::Equilibrium,
            ScriptSpec::NeverAttack => AttackScript::NeverAttack,
            ScriptSpec::AllBlocked => AttackScript::Outcomes(vec![false; horizon]),
            ScriptSpec::AlternateBreach => AttackScript::Outcomes((1..=horizon).map(|t| t % 2 == 0).collect()),
            ScriptSpec::Outcomes(o) => AttackScript::Outcomes(o.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub horizon: usize,
    pub gamma0: f64,
    pub seed: u64,
    /// Constant dataset value for every round.
    pub value: Option<f64>,
    pub value_series: Option<Vec<f64>>,
    pub script: ScriptSpec,
    pub reward_rule: RewardRule,
    /// Share of the collector's missed gain offered in long-term contracts.
    pub fraction: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            horizon: 0,
            gamma0: 0.1,
            seed: 0,
            value: None,
            value_series: None,
            script: ScriptSpec::Equilibrium,
            reward_rule: RewardRule::default(),
            fraction: 0.5,
        }
    }
}

impl SimulateConfig {
    /// Per-round values from `value_series`, else `value` repeated, else the
    /// game's attacker reward repeated.
    pub fn values(&self, game: &GameParams) -> anyhow::Result<Vec<f64>> {
        match (&self.value_series, self.value) {
            (Some(_), Some(_)) => Err(UsageError::new("simulate: give either value or value_series, not both").into()),
            (Some(series), None) => {
                if series.len() != self.horizon {
                    return Err(UsageError::new(format!(
                        "simulate: value_series has {} entries for horizon {}",
                        series.len(),
                        self.horizon
                    ))
                    .into());
                }
                Ok(series.clone())
            }
            (None, Some(v)) => Ok(vec![v; self.horizon]),
            (None, None) => Ok(vec![game.attacker_reward; self.horizon]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::new(format!("reading config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| UsageError::new(format!("config {}: {e}", path.display())).into())
    }
}
