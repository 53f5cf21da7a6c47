//! Command-line surface.

use std::path::PathBuf;

use anongame::repeated::RewardRule;
#[cfg(test)]
use anongame::GameParams;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ContractMethod, ExperimentConfig, Format, ScriptSpec, TypeSpec};
use crate::UsageError;

#[derive(Debug, Parser)]
#[command(name = "anongame", version, about = "Anonymization-level games, contracts and repeated sharing")]
pub struct Cli {
    /// JSON experiment configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for the simulation's random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub game: GameOverrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the one-shot game and print the certified equilibrium.
    SolveStatic,
    /// Solve the game for each value of one parameter.
    Sweep(SweepArgs),
    /// Design collector rewards for a set of organization types.
    Contract(ContractArgs),
    /// Run the repeated game and print one row per round.
    Simulate(SimulateArgs),
}

/// Per-field overrides of the game section.
#[derive(Debug, Default, Args)]
pub struct GameOverrides {
    #[arg(long, global = true)]
    pub k_low: Option<u32>,
    #[arg(long, global = true)]
    pub k_high: Option<u32>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p_background: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p_homog_same: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p_homog_diff: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub cost_attack_background: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub cost_attack_homog: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub attacker_reward: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub reward_low: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub reward_high: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub v_size: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub log_base: Option<f64>,
    /// Dataset value: attacker reward v, rewards 0.9·v and 0.8·v.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub value: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// One of attacker_reward, p_background, p_homog_same, gamma.
    #[arg(long)]
    pub parameter: Option<String>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ContractArgs {
    /// Organization type as `k:valuation`; repeat for several types.
    #[arg(long = "type", value_parser = parse_type)]
    pub types: Vec<TypeSpec>,
    #[arg(long, value_enum)]
    pub method: Option<ContractMethod>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScriptArg {
    Equilibrium,
    NeverAttack,
    AllBlocked,
    AlternateBreach,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RewardRuleArg {
    ValueShare,
    PerLevel,
    Contract,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    /// Comma-separated per-round dataset values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub value_series: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub script: Option<ScriptArg>,
    #[arg(long, value_enum)]
    pub reward_rule: Option<RewardRuleArg>,
    /// Share of the missed gain offered in long-term contracts, in (0, 1).
    #[arg(long, allow_negative_numbers = true)]
    pub fraction: Option<f64>,
}

fn parse_type(s: &str) -> Result<TypeSpec, String> {
    let (k, v) = s.split_once(':').ok_or_else(|| format!("expected k:valuation, got `{s}`"))?;
    Ok(TypeSpec {
        k: k.trim().parse().map_err(|e| format!("bad k in `{s}`: {e}"))?,
        valuation: v.trim().parse().map_err(|e| format!("bad valuation in `{s}`: {e}"))?,
    })
}

impl Cli {
    /// Loads the configuration file (if any) and applies every flag.
    pub fn resolve(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = cfg.value {
            cfg.game = cfg.game.clone().with_dataset_value(v);
        }
        self.game.apply(&mut cfg);

        let output = cfg.output.get_or_insert_with(Default::default);
        if let Some(path) = &self.output {
            output.path = Some(path.clone());
        }
        if let Some(format) = self.format {
            output.format = format;
        }

        match &self.command {
            Command::SolveStatic => {}
            Command::Sweep(args) => {
                if args.parameter.is_some() || args.values.is_some() {
                    let current = cfg.sweep.take();
                    let parameter = args
                        .parameter
                        .clone()
                        .or_else(|| current.as_ref().map(|s| s.parameter.clone()))
                        .ok_or_else(|| UsageError::new("sweep: --parameter is required"))?;
                    let values = args
                        .values
                        .clone()
                        .or_else(|| current.map(|s| s.values))
                        .ok_or_else(|| UsageError::new("sweep: --values is required"))?;
                    cfg.sweep = Some(crate::config::SweepConfig { parameter, values });
                }
            }
            Command::Contract(args) => {
                if !args.types.is_empty() || args.method.is_some() {
                    let contract = cfg.contract.get_or_insert_with(|| crate::config::ContractConfig {
                        types: Vec::new(),
                        method: ContractMethod::Auto,
                    });
                    if !args.types.is_empty() {
                        contract.types = args.types.clone();
                    }
                    if let Some(m) = args.method {
                        contract.method = m;
                    }
                }
            }
            Command::Simulate(args) => {
                let sim = cfg.simulate.get_or_insert_with(Default::default);
                if let Some(h) = args.horizon {
                    sim.horizon = h;
                }
                if let Some(g) = args.gamma0 {
                    sim.gamma0 = g;
                }
                if let Some(series) = &args.value_series {
                    sim.value_series = Some(series.clone());
                    sim.value = None;
                } else if let Some(v) = self.game.value {
                    sim.value = Some(v);
                    sim.value_series = None;
                }
                if let Some(script) = args.script {
                    sim.script = match script {
                        ScriptArg::Equilibrium => ScriptSpec::Equilibrium,
                        ScriptArg::NeverAttack => ScriptSpec::NeverAttack,
                        ScriptArg::AllBlocked => ScriptSpec::AllBlocked,
                        ScriptArg::AlternateBreach => ScriptSpec::AlternateBreach,
                    };
                }
                if let Some(rule) = args.reward_rule {
                    sim.reward_rule = match rule {
                        RewardRuleArg::ValueShare => RewardRule::default(),
                        RewardRuleArg::PerLevel => RewardRule::PerLevel,
                        RewardRuleArg::Contract => RewardRule::Contract,
                    };
                }
                if let Some(f) = args.fraction {
                    sim.fraction = f;
                }
                if let Some(seed) = self.seed {
                    sim.seed = seed;
                }
            }
        }
        Ok(cfg)
    }
}

impl GameOverrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        let g = &mut cfg.game;
        if let Some(v) = self.value {
            cfg.value = Some(v);
            *g = g.clone().with_dataset_value(v);
        }
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(x) = self.$field { g.$field = x; })*
            };
        }
        set!(
            k_low,
            k_high,
            alpha,
            gamma,
            p_background,
            p_homog_same,
            p_homog_diff,
            cost_attack_background,
            cost_attack_homog,
            attacker_reward,
            reward_low,
            reward_high,
            v_size,
            log_base
        );
    }
}
