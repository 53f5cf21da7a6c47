//! The four experiment commands.

use anongame::contracts::{self, IcConstraints, OrgType};
use anongame::repeated::{simulate_with, SimulationConfig, SimulationTrace};
use anongame::static_game::{org_dominant_strategy, Equilibrium};
use anongame::{solve_equilibrium, tolerances, Error, GameParams};
use anyhow::Context;

use crate::config::{ContractMethod, ExperimentConfig};
use crate::output::{Cell, Report};
use crate::{PartialFailure, UsageError};

pub const SWEEP_PARAMETERS: [&str; 4] = ["attacker_reward", "p_background", "p_homog_same", "gamma"];

const EQUILIBRIUM_COLUMNS: [&str; 9] = [
    "kind",
    "p",
    "q_b",
    "q_h",
    "q_n",
    "org_utility",
    "attacker_utility",
    "regret",
    "warn",
];

fn equilibrium_cells(eq: &Equilibrium) -> Vec<Cell> {
    let q = eq.attacker_dist;
    vec![
        eq.kind.as_str().into(),
        eq.org_p.into(),
        q.background.into(),
        q.homogeneity.into(),
        q.no_attack.into(),
        eq.expected_org_utility.into(),
        eq.expected_attacker_utility.into(),
        eq.regret.into(),
        (eq.regret > tolerances::REGRET).into(),
    ]
}

pub fn solve_static(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let params = &cfg.game;
    let eq = solve_equilibrium(params).map_err(describe_not_found)?;
    let dominant = org_dominant_strategy(params)?;
    let mut report = Report::new(
        std::iter::once("attacker_reward")
            .chain(EQUILIBRIUM_COLUMNS)
            .chain(["dominant_k"]),
    );
    let mut row = vec![Cell::from(params.attacker_reward)];
    row.extend(equilibrium_cells(&eq));
    row.push(dominant.into());
    report.push(row);
    Ok(report)
}

pub fn sweep(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| UsageError::new("sweep: the configuration has no sweep section"))?;
    let name = sweep.parameter.as_str();
    if !SWEEP_PARAMETERS.contains(&name) {
        return Err(UsageError::new(format!(
            "sweep: unknown parameter `{name}` (expected one of {})",
            SWEEP_PARAMETERS.join(", ")
        ))
        .into());
    }
    let mut report = Report::new(std::iter::once(name).chain(EQUILIBRIUM_COLUMNS));
    for &value in &sweep.values {
        let params = swept(&cfg.game, name, value)?;
        let eq = match solve_equilibrium(&params) {
            Ok(eq) => eq,
            Err(Error::EquilibriumNotFound { best: Some(best), .. }) => *best,
            Err(e) => return Err(e).with_context(|| format!("sweep: {name} = {value}")),
        };
        let mut row = vec![Cell::from(value)];
        row.extend(equilibrium_cells(&eq));
        report.push(row);
    }
    Ok(report)
}

/// Applies one swept value. Sweeping the attacker reward moves the
/// organizations' rewards with it (`0.9·v`, `0.8·v`).
fn swept(base: &GameParams, name: &str, value: f64) -> anyhow::Result<GameParams> {
    let mut p = base.clone();
    match name {
        "attacker_reward" => p = p.with_dataset_value(value),
        "p_background" => {
            if value.is_nan() || value <= p.p_homog_diff {
                return Err(UsageError::new(format!(
                    "sweep: p_background = {value} must exceed p_homog_diff = {}",
                    p.p_homog_diff
                ))
                .into());
            }
            p.p_background = value;
        }
        "p_homog_same" => p.p_homog_same = value,
        "gamma" => p.gamma = value,
        _ => unreachable!("parameter names are checked by the caller"),
    }
    Ok(p)
}

pub fn contract(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let section = cfg
        .contract
        .as_ref()
        .ok_or_else(|| UsageError::new("contract: at least one --type k:valuation is required"))?;
    if section.types.is_empty() {
        return Err(UsageError::new("contract: at least one --type k:valuation is required").into());
    }
    let g = &cfg.game;
    let types = section
        .types
        .iter()
        .map(|t| contracts::make_type(t.k, g.gamma, g.v_size, g.log_base, t.valuation))
        .collect::<Result<Vec<OrgType>, _>>()?;
    let equal_valuations = types.iter().all(|t| t.valuation == types[0].valuation);
    let method = match section.method {
        ContractMethod::Auto if equal_valuations => ContractMethod::ClosedForm,
        ContractMethod::Auto => ContractMethod::Lp,
        m => m,
    };
    let menu = match method {
        ContractMethod::ClosedForm => contracts::monotone_closed_form(&types)?,
        ContractMethod::Lp => contracts::n_type_optimal(&types)?,
        ContractMethod::LpAdjacent => contracts::n_type_optimal_with(&types, IcConstraints::Adjacent)?,
        ContractMethod::Auto => unreachable!("resolved above"),
    };
    let cross = contracts::verify_menu(&menu);

    let mut columns: Vec<String> = ["k", "theta", "valuation", "cost", "trust", "reward", "net_utility"]
        .map(String::from)
        .to_vec();
    columns.extend(menu.entries.iter().map(|e| format!("takes_k{}", e.org_type.k)));
    columns.push("diagonal_max".into());
    let mut report = Report::new(columns);
    for (i, e) in menu.entries.iter().enumerate() {
        let t = e.org_type;
        let mut row: Vec<Cell> = vec![
            t.k.into(),
            t.theta.into(),
            t.valuation.into(),
            t.cost.into(),
            t.trust.into(),
            e.reward.into(),
            e.org_net_utility.into(),
        ];
        row.extend(cross.matrix[i].iter().map(|&v| Cell::from(v)));
        row.push(cross.violations().iter().all(|v| v.row != i).into());
        report.push(row);
    }
    report.has_summary = true;
    report.summarize("method", method_name(method));
    report.summarize("principal_utility", menu.principal_utility);
    report.summarize("feasible", menu.feasible);
    report.summarize("ir_holds", menu.ir_violations().is_empty());
    report.summarize("ic_diagonal_max", if cross.diagonal_dominant() { "pass" } else { "fail" });
    Ok(report)
}

fn method_name(m: ContractMethod) -> &'static str {
    match m {
        ContractMethod::Auto => "auto",
        ContractMethod::ClosedForm => "closed-form",
        ContractMethod::Lp => "lp",
        ContractMethod::LpAdjacent => "lp-adjacent",
    }
}

const SIMULATE_COLUMNS: [&str; 18] = [
    "step",
    "gamma_start",
    "gamma",
    "value",
    "p",
    "q_b",
    "q_h",
    "q_n",
    "regret",
    "warn",
    "k_org1",
    "k_org2",
    "attack",
    "breach",
    "u_org1",
    "u_org2",
    "u_attacker",
    "collector_utility",
];

pub fn simulate(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let sim = cfg
        .simulate
        .as_ref()
        .ok_or_else(|| UsageError::new("simulate: the configuration has no simulate section"))?;
    if !(sim.fraction > 0.0 && sim.fraction < 1.0) {
        return Err(UsageError::new(format!("simulate: fraction must lie in (0, 1), got {}", sim.fraction)).into());
    }
    let values = sim.values(&cfg.game)?;
    let config = SimulationConfig {
        params: cfg.game.clone(),
        horizon: sim.horizon,
        gamma0: sim.gamma0,
        values,
        seed: sim.seed,
        reward_rule: sim.reward_rule,
        script: sim.script.to_script(sim.horizon),
    };
    match simulate_with(&config) {
        Ok(trace) => trace_report(&trace, sim.fraction),
        Err(err) => {
            let report = trace_report(&err.partial, sim.fraction)?;
            Err(PartialFailure {
                report,
                source: err.source,
                step: err.step,
            }
            .into())
        }
    }
}

fn trace_report(trace: &SimulationTrace, fraction: f64) -> anyhow::Result<Report> {
    let mut report = Report::new(SIMULATE_COLUMNS);
    report.has_summary = true;
    for r in &trace.rounds {
        let q = r.equilibrium.attacker_dist;
        report.push(vec![
            r.step.into(),
            r.gamma.into(),
            r.gamma_next.into(),
            r.value.into(),
            r.equilibrium.org_p.into(),
            q.background.into(),
            q.homogeneity.into(),
            q.no_attack.into(),
            r.equilibrium.regret.into(),
            (r.equilibrium.regret > tolerances::REGRET).into(),
            r.org_levels[0].into(),
            r.org_levels[1].into(),
            r.attack_action.code().into(),
            r.attack_succeeded.into(),
            r.org_realized_utility[0].into(),
            r.org_realized_utility[1].into(),
            r.attacker_realized_utility.into(),
            r.collector_utility.into(),
        ]);
    }
    if trace.rounds.is_empty() {
        return Ok(report);
    }
    report.summarize("cumulative_collector_utility", trace.cumulative_collector_utility);
    for org in 0..2 {
        let prefix = format!("long_term_org{}", org + 1);
        match trace.long_term_accounting(org, fraction)? {
            None => report.summarize(prefix, "none"),
            Some(acc) => {
                let steps: Vec<String> = acc.offer.binding_steps.iter().map(|s| s.to_string()).collect();
                report.summarize(format!("{prefix}_binding_steps"), steps.join(";"));
                report.summarize(format!("{prefix}_missed_gain"), acc.offer.missed_gain);
                report.summarize(format!("{prefix}_per_step_minimum"), acc.offer.per_step_minimum);
                report.summarize(format!("{prefix}_collector_improvement"), acc.offer.collector_improvement);
                report.summarize(format!("{prefix}_baseline"), acc.baseline);
                report.summarize(format!("{prefix}_with_offer"), acc.with_offer);
            }
        }
    }
    Ok(report)
}

/// Adds the best candidate to a solver failure message.
fn describe_not_found(err: Error) -> anyhow::Error {
    let detail = match &err {
        Error::EquilibriumNotFound { best: Some(best), .. } => Some(format!(
            "best candidate: kind {}, p {}, q ({}, {}, {}), regret {}",
            best.kind.as_str(),
            best.org_p,
            best.attacker_dist.background,
            best.attacker_dist.homogeneity,
            best.attacker_dist.no_attack,
            best.regret
        )),
        _ => None,
    };
    match detail {
        Some(d) => anyhow::Error::new(err).context(d),
        None => err.into(),
    }
}
