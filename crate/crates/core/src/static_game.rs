//! The one-shot game between two sharing organizations and an attacker.
//!
//! Organizations choose between `k_low` (index 0) and `k_high` (index 1); the
//! attacker chooses one of [`AttackAction::ALL`]. Only symmetric organization
//! strategies are reported: both organizations pick `k_low` with the same
//! probability `p`.
//!
//! [`solve_equilibrium`] tries, in order:
//!
//! 1. the no-attack pure equilibrium (attacks unprofitable in every cell),
//! 2. symmetric pure profiles found by exhaustive best-response checks,
//! 3. the background/homogeneity mix from the two indifference conditions,
//! 4. the remaining symmetric supports: attacker pure with mixing
//!    organizations, and attacker mixes of one attack with no attack.
//!
//! Every candidate is certified by [`crate::oracle::verify`] before it is
//! returned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, AttackAction, GameParams};
use crate::oracle;
use crate::tolerances;

const B: usize = 0;
const H: usize = 1;
const N: usize = 2;

/// Utilities of one joint action.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Cell {
    pub org1: f64,
    pub org2: f64,
    pub attacker: f64,
}

/// All 2×2×3 joint-action utilities, indexed `[org1 level][org2 level][action]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffTensor {
    levels: [u32; 2],
    cells: [[[Cell; 3]; 2]; 2],
}

impl PayoffTensor {
    pub fn build(params: &GameParams) -> Result<Self> {
        params.validate()?;
        let levels = params.levels();
        let mut cells = [[[Cell::default(); 3]; 2]; 2];
        for (i, &k1) in levels.iter().enumerate() {
            for (j, &k2) in levels.iter().enumerate() {
                for action in AttackAction::ALL {
                    cells[i][j][action.index()] = Cell {
                        org1: model::org_utility(k1, k2, action, params)?,
                        org2: model::org_utility(k2, k1, action, params)?,
                        attacker: model::attacker_utility(k1, k2, action, params)?,
                    };
                }
            }
        }
        Ok(PayoffTensor { levels, cells })
    }

    /// Wraps hand-made cells, e.g. for degenerate test games.
    pub fn from_cells(levels: [u32; 2], cells: [[[Cell; 3]; 2]; 2]) -> Self {
        PayoffTensor { levels, cells }
    }

    pub fn levels(&self) -> [u32; 2] {
        self.levels
    }

    /// Cell by level index (0 = `k_low`, 1 = `k_high`).
    pub fn get(&self, org1: usize, org2: usize, action: AttackAction) -> &Cell {
        &self.cells[org1][org2][action.index()]
    }

    /// Cell by anonymization level.
    pub fn cell(&self, k1: u32, k2: u32, action: AttackAction) -> Option<&Cell> {
        let i = self.levels.iter().position(|&k| k == k1)?;
        let j = self.levels.iter().position(|&k| k == k2)?;
        Some(self.get(i, j, action))
    }

    pub(crate) fn raw(&self, org1: usize, org2: usize, action: usize) -> &Cell {
        &self.cells[org1][org2][action]
    }

    /// Swapping the organizations swaps their utilities and leaves the
    /// attacker's unchanged.
    pub fn is_swap_symmetric(&self, tol: f64) -> bool {
        (0..2).all(|i| {
            (0..2).all(|j| {
                (0..3).all(|a| {
                    let x = self.raw(i, j, a);
                    let y = self.raw(j, i, a);
                    (x.org1 - y.org2).abs() <= tol && (x.attacker - y.attacker).abs() <= tol
                })
            })
        })
    }

    /// `E[u_a(action)]` when both organizations play `k_low` with probability `p`.
    pub fn attacker_expected(&self, p: f64, action: AttackAction) -> f64 {
        let w = [p, 1.0 - p];
        let a = action.index();
        let mut total = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                total += w[i] * w[j] * self.raw(i, j, a).attacker;
            }
        }
        total
    }

    /// Organization 1's expected utility from level index `own` against an
    /// opponent mixing with `p` and the attacker distribution `attacker`.
    pub fn org1_expected(&self, own: usize, p: f64, attacker: &[f64; 3]) -> f64 {
        let w = [p, 1.0 - p];
        let mut total = 0.0;
        for j in 0..2 {
            for a in 0..3 {
                total += w[j] * attacker[a] * self.raw(own, j, a).org1;
            }
        }
        total
    }

    /// `E[u_1(k_low)] − E[u_1(k_high)]` under one attack action.
    fn org1_level_gap(&self, p: f64, action: usize) -> f64 {
        let w = [p, 1.0 - p];
        (0..2)
            .map(|j| w[j] * (self.raw(0, j, action).org1 - self.raw(1, j, action).org1))
            .sum()
    }
}

pub fn build_tensor(params: &GameParams) -> Result<PayoffTensor> {
    PayoffTensor::build(params)
}

/// Attacker mixed strategy `(q_B, q_H, q_N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackerStrategy {
    pub background: f64,
    pub homogeneity: f64,
    pub no_attack: f64,
}

impl AttackerStrategy {
    pub fn pure(action: AttackAction) -> Self {
        let mut q = [0.0; 3];
        q[action.index()] = 1.0;
        Self::from_array(q)
    }

    pub fn from_array(q: [f64; 3]) -> Self {
        AttackerStrategy {
            background: q[B],
            homogeneity: q[H],
            no_attack: q[N],
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.background, self.homogeneity, self.no_attack]
    }

    pub fn probability(&self, action: AttackAction) -> f64 {
        self.as_array()[action.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    /// Attacks are unprofitable everywhere; organizations play the level that
    /// maximizes the attack-free utility.
    PureNoAttack,
    /// A pure profile in which the attacker attacks.
    PureDominant,
    Mixed,
}

impl EquilibriumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumKind::PureNoAttack => "pure-no-attack",
            EquilibriumKind::PureDominant => "pure-dominant",
            EquilibriumKind::Mixed => "mixed",
        }
    }
}

/// A symmetric strategy profile with its expected utilities and certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    /// Probability that each organization picks `k_low`.
    pub org_p: f64,
    pub attacker_dist: AttackerStrategy,
    pub expected_org_utility: f64,
    pub expected_attacker_utility: f64,
    /// Largest gain any player obtains by a unilateral pure deviation.
    pub regret: f64,
}

impl Equilibrium {
    /// Evaluates and certifies a symmetric profile.
    pub fn from_profile(
        kind: EquilibriumKind,
        org_p: f64,
        attacker_dist: AttackerStrategy,
        tensor: &PayoffTensor,
    ) -> Self {
        let mut eq = Equilibrium {
            kind,
            org_p,
            attacker_dist,
            expected_org_utility: 0.0,
            expected_attacker_utility: 0.0,
            regret: f64::INFINITY,
        };
        let (org, att) = expected_utilities(&eq, tensor);
        eq.expected_org_utility = org;
        eq.expected_attacker_utility = att;
        eq.regret = oracle::verify(&eq, tensor).max_regret();
        eq
    }
}

/// Expected organization-1 and attacker utilities of a symmetric profile.
pub fn expected_utilities(eq: &Equilibrium, tensor: &PayoffTensor) -> (f64, f64) {
    let w = [eq.org_p, 1.0 - eq.org_p];
    let q = eq.attacker_dist.as_array();
    let (mut org, mut att) = (0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for a in 0..3 {
                let weight = w[i] * w[j] * q[a];
                let cell = tensor.raw(i, j, a);
                org += weight * cell.org1;
                att += weight * cell.attacker;
            }
        }
    }
    (org, att)
}

/// Pure no-attack equilibrium, when every attack cell is unprofitable.
///
/// Organizations then play `argmax_k r(k) − c(k) + γ·k`, ties going to
/// `k_low`.
pub fn no_attack_pure_equilibrium(params: &GameParams) -> Result<Option<Equilibrium>> {
    let tensor = PayoffTensor::build(params)?;
    let attacks_unprofitable = (0..2).all(|i| {
        (0..2).all(|j| tensor.raw(i, j, B).attacker < 0.0 && tensor.raw(i, j, H).attacker < 0.0)
    });
    if !attacks_unprofitable {
        return Ok(None);
    }
    let attack_free = |k: u32| -> Result<f64> {
        Ok(params.reward_for(k)? - model::anonymization_cost(k, params.v_size, params.log_base)?
            + model::trust_value(params.gamma, k)?)
    };
    let low = attack_free(params.k_low)?;
    let high = attack_free(params.k_high)?;
    let p = if low >= high { 1.0 } else { 0.0 };
    Ok(Some(Equilibrium::from_profile(
        EquilibriumKind::PureNoAttack,
        p,
        AttackerStrategy::pure(AttackAction::NoAttack),
        &tensor,
    )))
}

/// Level recommended by the minimum-profit-factor dominance argument.
///
/// Returns `None` unless `δ_i·r(k_i) > γ·k_i − c(k_i)` holds for both levels,
/// with `δ_i` evaluated at the symmetric profile `(k_i, k_i)`. This is
/// reported next to the equilibrium and is not forced to agree with it.
pub fn org_dominant_strategy(params: &GameParams) -> Result<Option<u32>> {
    params.validate()?;
    let score = |k: u32| -> Result<(bool, f64)> {
        let delta = model::min_profit_factor(k, k, params)?;
        let reward = params.reward_for(k)?;
        let cost = model::anonymization_cost(k, params.v_size, params.log_base)?;
        let trust = model::trust_value(params.gamma, k)?;
        Ok((delta * reward > trust - cost, delta * reward - cost + trust))
    };
    let (low_holds, low) = score(params.k_low)?;
    let (high_holds, high) = score(params.k_high)?;
    if !(low_holds && high_holds) {
        return Ok(None);
    }
    Ok(Some(if low >= high { params.k_low } else { params.k_high }))
}

/// Which homogeneity probability the single-`p(H)` quadratic substitutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum HomogeneityChoice {
    #[default]
    Same,
    Different,
}

/// Roots of the closed-form quadratic in `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticRoots {
    /// Roots inside `[0, 1]`, ascending.
    pub roots: Vec<f64>,
    /// Both the quadratic and linear coefficients vanish; every `p` (or none)
    /// solves the equation and `roots` is empty.
    pub degenerate: bool,
    /// `[p², p, 1]` coefficients.
    pub coefficients: [f64; 3],
}

/// Closed-form attacker indifference using [`HomogeneityChoice::Same`].
pub fn solve_p_analytic(params: &GameParams) -> Result<AnalyticRoots> {
    solve_p_analytic_with(params, HomogeneityChoice::Same)
}

/// Closed-form attacker indifference `E[u_a(B)] = E[u_a(H)]` as a quadratic
/// in `p`, with one homogeneity probability for all cells.
///
/// Exact when `p_homog_same == p_homog_diff`; otherwise a cross-check for
/// [`solve_p_numeric`], which evaluates the full tensor.
pub fn solve_p_analytic_with(params: &GameParams, choice: HomogeneityChoice) -> Result<AnalyticRoots> {
    params.validate()?;
    let p_b = params.p_background;
    let p_h = match choice {
        HomogeneityChoice::Same => params.p_homog_same,
        HomogeneityChoice::Different => params.p_homog_diff,
    };
    let x = 1.0 / (params.alpha * f64::from(params.k_low) + 1.0);
    let y = 1.0 / (params.alpha * f64::from(params.k_high) + 1.0);
    let d1 = p_b - p_h;
    let d2 = p_b * p_b - p_h * p_h;
    let r = params.attacker_reward;

    let a = (2.0 * d2 * x * y - d2 * y * y - d2 * x * x) * r;
    let b = 2.0 * r * (d1 * x - d1 * y + d2 * y * y - d2 * x * y);
    let c = (2.0 * d1 * y - d2 * y * y) * r
        - (params.cost_attack_background - params.cost_attack_homog);

    let mut roots = Vec::new();
    let mut degenerate = false;
    if a.abs() < tolerances::QUADRATIC_LEADING {
        if b.abs() < tolerances::QUADRATIC_LEADING {
            degenerate = c.abs() < tolerances::QUADRATIC_LEADING;
        } else {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let q = -0.5 * (b + b.signum() * sq);
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    let mut roots: Vec<f64> = roots
        .into_iter()
        .filter(|r| r.is_finite() && (-tolerances::DEGENERACY..=1.0 + tolerances::DEGENERACY).contains(r))
        .map(|r| r.clamp(0.0, 1.0))
        .collect();
    sort_dedup(&mut roots);
    Ok(AnalyticRoots {
        roots,
        degenerate,
        coefficients: [a, b, c],
    })
}

/// All `p ∈ [0, 1]` solving the attacker's background/homogeneity indifference
/// on the full tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndifferenceRoots {
    pub roots: Vec<f64>,
    /// The two attacks have identical expected utility for every `p`.
    pub degenerate: bool,
}

/// Bisection on `g(p) = E[u_a(B)] − E[u_a(H)]`.
///
/// `g` is quadratic in `p` (a symmetric bilinear form), so `[0, 1]` is split at
/// the vertex of the interpolating parabola and each monotone piece is
/// bracketed separately; `g` may have two interior roots with equal signs
/// at the endpoints.
pub fn indifference_roots(tensor: &PayoffTensor) -> IndifferenceRoots {
    let g = |p: f64| {
        tensor.attacker_expected(p, AttackAction::BackgroundKnowledge)
            - tensor.attacker_expected(p, AttackAction::Homogeneity)
    };
    let (roots, degenerate) = unit_quadratic_roots(g);
    IndifferenceRoots { roots, degenerate }
}

/// A solved organization mixing probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Indifference {
    pub p: f64,
    /// Set when every `p` is a solution; `p` is then 0.5.
    pub degenerate: bool,
}

/// Smallest root of the attacker indifference condition, if any.
pub fn solve_p_numeric(params: &GameParams) -> Result<Option<Indifference>> {
    let tensor = PayoffTensor::build(params)?;
    Ok(solve_p_numeric_tensor(&tensor))
}

pub fn solve_p_numeric_tensor(tensor: &PayoffTensor) -> Option<Indifference> {
    let found = indifference_roots(tensor);
    if found.degenerate {
        return Some(Indifference {
            p: 0.5,
            degenerate: true,
        });
    }
    found.roots.first().map(|&p| Indifference {
        p,
        degenerate: false,
    })
}

/// Attacker's background-attack probability `q` (with `q_H = 1 − q`,
/// `q_N = 0`) that makes organization 1 indifferent between its levels when
/// both organizations mix with `p`.
///
/// `None` when the organization is indifferent regardless of `q` or when the
/// solution falls outside `[0, 1]`.
pub fn solve_q_given_p(p: f64, tensor: &PayoffTensor) -> Option<f64> {
    if !(0.0..=1.0).contains(&p) {
        return None;
    }
    let gap_b = tensor.org1_level_gap(p, B);
    let gap_h = tensor.org1_level_gap(p, H);
    let den = gap_h - gap_b;
    if den.abs() < tolerances::DEGENERACY {
        return None;
    }
    let q = gap_h / den;
    if (-tolerances::PROBABILITY_SLACK..=1.0 + tolerances::PROBABILITY_SLACK).contains(&q) {
        Some(q.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// `|E[u_1(k_low)] − E[u_1(k_high)]|` under a symmetric profile.
pub fn org_indifference_gap(p: f64, attacker: &AttackerStrategy, tensor: &PayoffTensor) -> f64 {
    let q = attacker.as_array();
    (tensor.org1_expected(0, p, &q) - tensor.org1_expected(1, p, &q)).abs()
}

/// Largest spread of the attacker's expected utilities over the actions it
/// plays with positive probability.
pub fn attacker_indifference_gap(p: f64, attacker: &AttackerStrategy, tensor: &PayoffTensor) -> f64 {
    let values: Vec<f64> = AttackAction::ALL
        .iter()
        .filter(|&&a| attacker.probability(a) > 0.0)
        .map(|&a| tensor.attacker_expected(p, a))
        .collect();
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Which solver stage produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    NoAttack,
    Pure,
    BackgroundHomogeneityMix,
    AttackerPure,
    AttackOrAbstainMix,
}

/// A candidate profile with its certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub stage: Stage,
    pub equilibrium: Equilibrium,
}

/// Everything the solver looked at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// All pure Nash profiles `(k₁, k₂, a)`, including asymmetric ones.
    pub pure_equilibria: Vec<(u32, u32, AttackAction)>,
    pub indifference: IndifferenceRoots,
    pub analytic: AnalyticRoots,
    pub candidates: Vec<Candidate>,
    pub dominant_level: Option<u32>,
}

pub fn diagnostics(params: &GameParams) -> Result<Diagnostics> {
    let tensor = PayoffTensor::build(params)?;
    let mut pure_equilibria = Vec::new();
    let levels = tensor.levels();
    for i in 0..2 {
        for j in 0..2 {
            for action in AttackAction::ALL {
                let profile = oracle::Profile {
                    org1_p: if i == 0 { 1.0 } else { 0.0 },
                    org2_p: if j == 0 { 1.0 } else { 0.0 },
                    attacker: AttackerStrategy::pure(action).as_array(),
                };
                if oracle::verify_profile(&profile, &tensor).max_regret() <= tolerances::DEGENERACY {
                    pure_equilibria.push((levels[i], levels[j], action));
                }
            }
        }
    }
    Ok(Diagnostics {
        pure_equilibria,
        indifference: indifference_roots(&tensor),
        analytic: solve_p_analytic(params)?,
        candidates: candidates(params, &tensor)?,
        dominant_level: org_dominant_strategy(params)?,
    })
}

/// Solves the game and returns the first certified symmetric equilibrium.
pub fn solve_equilibrium(params: &GameParams) -> Result<Equilibrium> {
    let tensor = PayoffTensor::build(params)?;
    let mut best: Option<Equilibrium> = None;
    for candidate in candidates(params, &tensor)? {
        let eq = candidate.equilibrium;
        if eq.regret <= tolerances::REGRET {
            return Ok(eq);
        }
        if best.as_ref().is_none_or(|b| eq.regret < b.regret) {
            best = Some(eq);
        }
    }
    let best_regret = best.as_ref().map_or(f64::INFINITY, |b| b.regret);
    Err(Error::EquilibriumNotFound {
        best: best.map(Box::new),
        best_regret,
        tolerance: tolerances::REGRET,
    })
}

/// Candidates in solver order. Candidates that fail their support checks
/// are still listed with their (large) regret.
fn candidates(params: &GameParams, tensor: &PayoffTensor) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    if let Some(eq) = no_attack_pure_equilibrium(params)? {
        out.push(Candidate {
            stage: Stage::NoAttack,
            equilibrium: eq,
        });
    }
    let mut push = |stage, kind, p, q: [f64; 3]| {
        out.push(Candidate {
            stage,
            equilibrium: Equilibrium::from_profile(kind, p, AttackerStrategy::from_array(q), tensor),
        })
    };

    for p in [1.0, 0.0] {
        for action in AttackAction::ALL {
            let kind = if action.is_attack() {
                EquilibriumKind::PureDominant
            } else {
                EquilibriumKind::PureNoAttack
            };
            push(Stage::Pure, kind, p, AttackerStrategy::pure(action).as_array());
        }
    }

    for &p in &indifference_roots(tensor).roots {
        let Some(q) = solve_q_given_p(p, tensor) else {
            continue;
        };
        // Attacks must beat abstaining.
        if tensor.attacker_expected(p, AttackAction::BackgroundKnowledge) < -tolerances::REGRET {
            continue;
        }
        push(
            Stage::BackgroundHomogeneityMix,
            EquilibriumKind::Mixed,
            p,
            [q, 1.0 - q, 0.0],
        );
    }

    for action in [AttackAction::BackgroundKnowledge, AttackAction::Homogeneity] {
        let a = action.index();
        let at_low = tensor.org1_level_gap(1.0, a);
        let at_high = tensor.org1_level_gap(0.0, a);
        let den = at_high - at_low;
        if den.abs() >= tolerances::DEGENERACY {
            let p = at_high / den;
            if p > 0.0 && p < 1.0 {
                push(
                    Stage::AttackerPure,
                    EquilibriumKind::Mixed,
                    p,
                    AttackerStrategy::pure(action).as_array(),
                );
            }
        }
    }

    for action in [AttackAction::BackgroundKnowledge, AttackAction::Homogeneity] {
        let a = action.index();
        let (roots, _) = unit_quadratic_roots(|p| tensor.attacker_expected(p, action));
        for p in roots {
            let gap_attack = tensor.org1_level_gap(p, a);
            let gap_abstain = tensor.org1_level_gap(p, N);
            let den = gap_abstain - gap_attack;
            if den.abs() < tolerances::DEGENERACY {
                continue;
            }
            let w = gap_abstain / den;
            if w > 0.0 && w < 1.0 {
                let mut q = [0.0; 3];
                q[a] = w;
                q[N] = 1.0 - w;
                push(Stage::AttackOrAbstainMix, EquilibriumKind::Mixed, p, q);
            }
        }
    }
    Ok(out)
}

/// Roots in `[0, 1]` of a function that is (up to rounding) a polynomial of
/// degree ≤ 2. Returns `(roots, identically_zero)`.
fn unit_quadratic_roots(f: impl Fn(f64) -> f64) -> (Vec<f64>, bool) {
    let f0 = f(0.0);
    let fh = f(0.5);
    let f1 = f(1.0);
    if f0.abs() <= tolerances::DEGENERACY
        && fh.abs() <= tolerances::DEGENERACY
        && f1.abs() <= tolerances::DEGENERACY
    {
        return (Vec::new(), true);
    }
    let a = 2.0 * (f0 + f1) - 4.0 * fh;
    let b = f1 - f0 - a;
    let mut breaks = vec![0.0];
    let mut vertex = None;
    if a.abs() > tolerances::DEGENERACY {
        let v = -b / (2.0 * a);
        if v > 0.0 && v < 1.0 {
            breaks.push(v);
            vertex = Some(v);
        }
    }
    breaks.push(1.0);

    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            roots.push(lo);
        } else if fhi != 0.0 && flo.signum() != fhi.signum() {
            roots.push(bisect(&f, lo, hi, flo));
        }
    }
    if f1 == 0.0 {
        roots.push(1.0);
    }
    // Double root at the vertex.
    if let Some(v) = vertex {
        if f(v).abs() <= tolerances::BISECTION && !roots.iter().any(|r| (r - v).abs() < 1e-9) {
            roots.push(v);
        }
    }
    sort_dedup(&mut roots);
    (roots, false)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

fn sort_dedup(roots: &mut Vec<f64>) {
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= tolerances::DEGENERACY);
}
