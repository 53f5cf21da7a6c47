//! Collector-side reward design.
//!
//! An organization sharing at level `k` has type `θ = 1/k`, pays the
//! anonymization cost `c(k)` and gains trust `T(k) = γ·k`. Taking a contract
//! with reward `r` nets it `θ·r − c + T`; the collector earns `θ·(v − r)`.
//! The cross-utility of type `i` taking contract `j` is
//! `θ_i·r_j − c_j + T_j`, and incentive compatibility asks every type to
//! weakly prefer its own row entry.

pub mod lp;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model;
use crate::tolerances;

use self::lp::{Constraint, LpOutcome, Relation};

/// One organization type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrgType {
    pub k: u32,
    pub theta: f64,
    pub cost: f64,
    pub trust: f64,
    /// The collector's valuation of this organization's data.
    pub valuation: f64,
}

impl OrgType {
    /// Smallest reward meeting the participation constraint, `(c − T)/θ`.
    pub fn ir_reward(&self) -> f64 {
        (self.cost - self.trust) / self.theta
    }

    pub fn net_utility(&self, reward: f64) -> f64 {
        self.theta * reward - self.cost + self.trust
    }

    /// `c − T`.
    fn net_cost(&self) -> f64 {
        self.cost - self.trust
    }
}

pub fn make_type(k: u32, gamma: f64, v_size: f64, log_base: f64, valuation: f64) -> Result<OrgType> {
    if k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    if !valuation.is_finite() {
        return Err(Error::invalid("valuation", "must be finite"));
    }
    Ok(OrgType {
        k,
        theta: 1.0 / f64::from(k),
        cost: model::anonymization_cost(k, v_size, log_base)?,
        trust: model::trust_value(gamma, k)?,
        valuation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MenuEntry {
    pub org_type: OrgType,
    pub reward: f64,
    pub org_net_utility: f64,
}

/// A reward per type with its audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractMenu {
    pub entries: Vec<MenuEntry>,
    /// `Σ θ_i (v_i − r_i)`.
    pub principal_utility: f64,
    /// All IR and IC constraints hold within the LP feasibility tolerance.
    pub feasible: bool,
}

/// A violated IC constraint: type `row` gains `gain` by taking contract `col`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcViolation {
    pub row: usize,
    pub col: usize,
    pub gain: f64,
}

impl ContractMenu {
    pub fn from_rewards(types: &[OrgType], rewards: &[f64]) -> Self {
        assert_eq!(types.len(), rewards.len(), "one reward per type");
        let entries: Vec<MenuEntry> = types
            .iter()
            .zip(rewards)
            .map(|(t, &r)| MenuEntry {
                org_type: *t,
                reward: r,
                org_net_utility: t.net_utility(r),
            })
            .collect();
        let principal_utility = entries
            .iter()
            .map(|e| e.org_type.theta * (e.org_type.valuation - e.reward))
            .sum();
        let mut menu = ContractMenu {
            entries,
            principal_utility,
            feasible: false,
        };
        menu.feasible = menu.ir_violations().is_empty() && menu.ic_violations().is_empty();
        menu
    }

    pub fn rewards(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.reward).collect()
    }

    pub fn types(&self) -> Vec<OrgType> {
        self.entries.iter().map(|e| e.org_type).collect()
    }

    /// Indices of entries with negative net utility.
    pub fn ir_violations(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.org_net_utility < -tolerances::LP_FEASIBILITY)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn ic_violations(&self) -> Vec<IcViolation> {
        verify_menu(self).violations()
    }
}

/// Cross-utility matrix: `matrix[i][j] = θ_i·r_j − c_j + T_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossUtility {
    pub matrix: Vec<Vec<f64>>,
}

impl CrossUtility {
    pub fn violations(&self) -> Vec<IcViolation> {
        let mut out = Vec::new();
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let gain = v - row[i];
                if j != i && gain > tolerances::LP_FEASIBILITY {
                    out.push(IcViolation { row: i, col: j, gain });
                }
            }
        }
        out
    }

    /// Every diagonal entry is its row maximum.
    pub fn diagonal_dominant(&self) -> bool {
        self.violations().is_empty()
    }
}

pub fn verify_menu(menu: &ContractMenu) -> CrossUtility {
    let matrix = menu
        .entries
        .iter()
        .map(|row| {
            menu.entries
                .iter()
                .map(|col| row.org_type.theta * col.reward - col.org_type.cost + col.org_type.trust)
                .collect()
        })
        .collect();
    CrossUtility { matrix }
}

/// Two-type closed form: `r_H = (c_H − T_H)/θ_H`, `r_L = max((c_L − T_L)/θ_L, r_H)`.
///
/// The high-k type's net utility is exactly zero. `feasible` reports the
/// audit of the resulting menu and may be `false` when `c − T` grows with `k`.
pub fn two_type_optimal(low: &OrgType, high: &OrgType) -> Result<ContractMenu> {
    if low.k >= high.k {
        return Err(Error::invalid("types", "low.k must be smaller than high.k"));
    }
    let r_high = high.ir_reward();
    let r_low = low.ir_reward().max(r_high);
    Ok(ContractMenu::from_rewards(&[*low, *high], &[r_low, r_high]))
}

/// Closed form for any number of types: the highest-k type's IR binds and
/// each lower type receives the larger of its own IR reward and the reward
/// of the next higher type.
pub fn monotone_closed_form(types: &[OrgType]) -> Result<ContractMenu> {
    check_types(types)?;
    let mut order: Vec<usize> = (0..types.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(types[i].k));
    let mut rewards = vec![0.0; types.len()];
    let mut floor = f64::NEG_INFINITY;
    for i in order {
        rewards[i] = types[i].ir_reward().max(floor);
        floor = rewards[i];
    }
    Ok(ContractMenu::from_rewards(types, &rewards))
}

/// Which incentive constraints the LP imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IcConstraints {
    /// Every ordered pair `(i, j)`.
    #[default]
    Full,
    /// Reward monotonicity between neighbors in `k` order (`r_i ≥ r_j` for
    /// `θ_i > θ_j`), the reduced system behind the closed forms.
    Adjacent,
}

/// LP optimum under IR, full pairwise IC and `r ≥ 0`.
pub fn n_type_optimal(types: &[OrgType]) -> Result<ContractMenu> {
    n_type_optimal_with(types, IcConstraints::Full)
}

pub fn n_type_optimal_with(types: &[OrgType], ic: IcConstraints) -> Result<ContractMenu> {
    check_types(types)?;
    let n = types.len();
    let mut rows = Vec::new();
    for (i, t) in types.iter().enumerate() {
        let mut coeffs = vec![0.0; n];
        coeffs[i] = t.theta;
        rows.push(Constraint::new(coeffs, Relation::Ge, t.net_cost()));
    }
    match ic {
        IcConstraints::Full => {
            for (i, ti) in types.iter().enumerate() {
                for (j, tj) in types.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let mut coeffs = vec![0.0; n];
                    coeffs[i] = ti.theta;
                    coeffs[j] = -ti.theta;
                    rows.push(Constraint::new(coeffs, Relation::Ge, ti.net_cost() - tj.net_cost()));
                }
            }
        }
        IcConstraints::Adjacent => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| types[i].k);
            for w in order.windows(2) {
                let mut coeffs = vec![0.0; n];
                coeffs[w[0]] = 1.0;
                coeffs[w[1]] = -1.0;
                rows.push(Constraint::new(coeffs, Relation::Ge, 0.0));
            }
        }
    }
    let objective: Vec<f64> = types.iter().map(|t| t.theta).collect();
    match lp::minimize(&objective, &rows) {
        LpOutcome::Optimal { x, .. } => {
            let worst = rows.iter().map(|c| c.violation(&x)).fold(0.0, f64::max);
            if worst > tolerances::LP_FEASIBILITY {
                return Err(Error::Infeasible(format!(
                    "LP solution violates a constraint by {worst:e}"
                )));
            }
            Ok(ContractMenu::from_rewards(types, &x))
        }
        LpOutcome::Infeasible => Err(Error::Infeasible(
            "no nonnegative rewards satisfy the IR and IC constraints".into(),
        )),
        LpOutcome::Unbounded => Err(Error::Infeasible("reward LP is unbounded".into())),
    }
}

fn check_types(types: &[OrgType]) -> Result<()> {
    if types.is_empty() {
        return Err(Error::invalid("types", "at least one type is required"));
    }
    let distinct: BTreeSet<u32> = types.iter().map(|t| t.k).collect();
    if distinct.len() != types.len() {
        return Err(Error::invalid("types", "k values must be distinct"));
    }
    Ok(())
}

/// Minimum per-step payments promised over a horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongTermOffer {
    /// Payment promised at each binding step.
    pub per_step_minimum: f64,
    pub horizon: usize,
    /// 1-based steps at which the participation constraint binds.
    pub binding_steps: BTreeSet<usize>,
    /// What the collector forgoes if the organization skips the binding steps.
    pub missed_gain: f64,
    pub fraction: f64,
    /// `fraction · missed_gain`, the sum of the per-step minima.
    pub total_offered: f64,
    /// `missed_gain − total_offered`.
    pub collector_improvement: f64,
}

/// Splits `fraction` of the binding-step gain uniformly over the binding steps.
///
/// Returns `Ok(None)` when there is nothing to incentivize: no binding steps or
/// a non-positive missed gain.
pub fn long_term_offer(
    theta: &[f64],
    valuation: &[f64],
    reward: &[f64],
    binding_steps: &BTreeSet<usize>,
    fraction: f64,
) -> Result<Option<LongTermOffer>> {
    let horizon = theta.len();
    if valuation.len() != horizon || reward.len() != horizon {
        return Err(Error::invalid("series", "theta, valuation and reward lengths differ"));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid("fraction", format!("must lie in (0, 1), got {fraction}")));
    }
    if let Some(&bad) = binding_steps.iter().find(|&&s| s == 0 || s > horizon) {
        return Err(Error::invalid("binding_steps", format!("step {bad} outside 1..={horizon}")));
    }
    if binding_steps.is_empty() {
        return Ok(None);
    }
    let missed_gain: f64 = binding_steps
        .iter()
        .map(|&s| theta[s - 1] * (valuation[s - 1] - reward[s - 1]))
        .sum();
    if !(missed_gain > 0.0) {
        return Ok(None);
    }
    let total_offered = fraction * missed_gain;
    Ok(Some(LongTermOffer {
        per_step_minimum: total_offered / binding_steps.len() as f64,
        horizon,
        binding_steps: binding_steps.clone(),
        missed_gain,
        fraction,
        total_offered,
        collector_improvement: missed_gain - total_offered,
    }))
}
