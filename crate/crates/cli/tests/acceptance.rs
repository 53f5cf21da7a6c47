//! Acceptance suite: one `criterion N: PASS|FAIL: detail` line per criterion.
//! Exits nonzero when any criterion fails.

use std::process::Command;

use anongame::contracts::{self, make_type, IcConstraints};
use anongame::model::{attack_success_prob, breach_joint, breach_single};
use anongame::oracle::{profile_utilities, GridSearch, Profile};
use anongame::repeated::{simulate_with, trust_trajectory, AttackScript, RewardRule, SimulationConfig};
use anongame::static_game::{attacker_indifference_gap, build_tensor, org_indifference_gap};
use anongame::{solve_equilibrium, AttackAction, Equilibrium, GameParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn calibrated(value: f64) -> GameParams {
    GameParams::default().with_dataset_value(value)
}

fn sweep_values() -> impl Iterator<Item = f64> {
    (1..=10).map(|i| f64::from(i) * 10.0)
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_anongame"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs `solve-static` and returns the single data row keyed by column.
fn solve_static_row(value: f64) -> Result<Vec<(String, String)>, String> {
    let out = binary(&["solve-static", "--value", &value.to_string()]);
    if !out.status.success() {
        return Err(format!("R={value}: exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty output")?;
    let row = lines.next().ok_or("no data row")?;
    Ok(header.split(',').map(String::from).zip(row.split(',').map(String::from)).collect())
}

fn field(row: &[(String, String)], name: &str) -> f64 {
    row.iter()
        .find(|(k, _)| k == name)
        .and_then(|(_, v)| v.parse().ok())
        .unwrap_or(f64::NAN)
}

fn verdict(failures: Vec<String>, detail: String) -> Outcome {
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(failures.join("; "))
    }
}

fn trust_dynamics() -> Outcome {
    let mut failures = Vec::new();
    let blocked = trust_trajectory(0.1, &[true; 6]);
    let last = *blocked.last().unwrap();
    if (last - 0.9859375).abs() > 1e-12 {
        failures.push(format!("6 blocked rounds end at {last}"));
    }
    let pattern: Vec<bool> = (0..30).map(|t| t % 2 == 1).collect();
    let alt = trust_trajectory(0.1, &pattern);
    let (a, b) = (alt[28], alt[29]);
    let cycle_err = (a - 1.0 / 3.0).abs().max((b - 2.0 / 3.0).abs());
    if cycle_err > 1e-6 || (a - 0.35).abs() > 0.035 || (b - 0.65).abs() > 0.035 {
        failures.push(format!("alternating cycle ends at ({a}, {b})"));
    }
    let pre = trust_trajectory(0.0, &[true; 6])[5];
    let dropped = trust_trajectory(pre, &[false])[0];
    if (dropped - pre / 2.0).abs() > 1e-12 || format!("{dropped:.4}") != "0.4922" {
        failures.push(format!("breach from {pre} lands at {dropped}"));
    }
    let recovered = *trust_trajectory(dropped, &[true; 6]).last().unwrap();
    if recovered <= 0.98 {
        failures.push(format!("recovery reaches only {recovered}"));
    }
    verdict(
        failures,
        format!("final {last}, cycle ({a:.9}, {b:.9}), drop {dropped}, recovery {recovered:.7}"),
    )
}

fn no_attack_region() -> Outcome {
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for value in sweep_values() {
        let row = solve_static_row(value)?;
        let q_n = field(&row, "q_n");
        let expected = if value <= 20.0 { 1.0 } else { 0.0 };
        if q_n != expected {
            failures.push(format!("R={value}: q_N = {q_n}, expected {expected}"));
        }
        seen.push(format!("{value}:{q_n}"));
    }
    verdict(failures, format!("q_N by R: {}", seen.join(" ")))
}

fn pure_org_strategies() -> Outcome {
    let mut failures = Vec::new();
    let params = GameParams::default();
    for (value, p, level) in [(10.0, 0.0, params.k_high), (20.0, 1.0, params.k_low)] {
        let row = solve_static_row(value)?;
        let got = field(&row, "p");
        if got != p {
            failures.push(format!("R={value}: P(k_L) = {got}, expected pure k={level}"));
        }
    }
    verdict(failures, "R=10 plays k_H, R=20 plays k_L".into())
}

fn certification() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = [0.0f64; 3];
    let search = GridSearch {
        resolution: 1000,
        keep: Some(1),
        asymmetric: false,
    };
    for value in sweep_values().filter(|&v| v >= 30.0) {
        let params = calibrated(value);
        let tensor = build_tensor(&params).map_err(|e| e.to_string())?;
        let eq = match solve_equilibrium(&params) {
            Ok(eq) => eq,
            Err(e) => {
                failures.push(format!("R={value}: {e}"));
                continue;
            }
        };
        let att = attacker_indifference_gap(eq.org_p, &eq.attacker_dist, &tensor);
        let org = org_indifference_gap(eq.org_p, &eq.attacker_dist, &tensor);
        worst = [worst[0].max(eq.regret), worst[1].max(att), worst[2].max(org)];
        if eq.regret > 1e-6 || att > 1e-9 || org > 1e-9 {
            failures.push(format!("R={value}: regret {}, gaps {att} / {org}", eq.regret));
        }
        let best = search.run(&tensor).map_err(|e| e.to_string())?;
        if let Some(c) = best.first() {
            if c.regret < eq.regret - 1e-3 {
                failures.push(format!("R={value}: grid regret {} beats solver {}", c.regret, eq.regret));
            }
        }
    }
    verdict(
        failures,
        format!("max regret {:.2e}, attacker gap {:.2e}, org gap {:.2e}", worst[0], worst[1], worst[2]),
    )
}

fn deviation_dominance() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut previous: Option<(f64, f64)> = None;
    let mut max_gain = f64::NEG_INFINITY;
    for value in sweep_values() {
        let params = calibrated(value);
        let tensor = build_tensor(&params).map_err(|e| e.to_string())?;
        let eq: Equilibrium = solve_equilibrium(&params).map_err(|e| format!("R={value}: {e}"))?;
        let base = Profile::from_equilibrium(&eq);
        let utilities = profile_utilities(&base, &tensor);
        for _ in 0..100 {
            let mut deviated = base;
            let player = rng.random_range(0..3);
            match player {
                0 => deviated.org1_p = rng.random(),
                1 => deviated.org2_p = rng.random(),
                _ => {
                    let w: [f64; 3] = [rng.random(), rng.random(), rng.random()];
                    let total: f64 = w.iter().sum();
                    deviated.attacker = w.map(|x| x / total);
                }
            }
            let gain = profile_utilities(&deviated, &tensor)[player] - utilities[player];
            max_gain = max_gain.max(gain);
            if gain > 1e-9 {
                failures.push(format!("R={value}: player {player} gains {gain}"));
            }
        }
        let current = (eq.expected_org_utility, eq.expected_attacker_utility);
        if let Some((org, att)) = previous {
            if current.0 < org - 1e-9 || current.1 < att - 1e-9 {
                failures.push(format!("R={value}: utilities drop to {current:?} from ({org}, {att})"));
            }
        }
        previous = Some(current);
    }
    verdict(failures, format!("1000 deviations, max gain {max_gain:.2e}, utilities monotone"))
}

fn closed_form_types(ks: &[u32]) -> Result<Vec<contracts::OrgType>, String> {
    ks.iter()
        .map(|&k| make_type(k, 1.0, 10.0, 10.0, 100.0).map_err(|e| e.to_string()))
        .collect()
}

fn two_type_closed_form() -> Outcome {
    let mut failures = Vec::new();
    let types = closed_form_types(&[3, 7])?;
    let menu = contracts::two_type_optimal(&types[0], &types[1]).map_err(|e| e.to_string())?;
    let r = menu.rewards();
    if r != [49.0, 49.0] {
        failures.push(format!("rewards {r:?}"));
    }
    if menu.entries[1].org_net_utility != 0.0 {
        failures.push(format!("high-type net utility {}", menu.entries[1].org_net_utility));
    }
    if r[0] < r[1] {
        failures.push("r_L < r_H".into());
    }
    match contracts::n_type_optimal(&types) {
        Ok(lp) => {
            let diff = lp.rewards().iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if diff > 1e-6 {
                failures.push(format!("LP rewards {:?} differ by {diff}", lp.rewards()));
            }
        }
        Err(e) => failures.push(format!("full-IC LP: {e}")),
    }
    let adjacent = contracts::n_type_optimal_with(&types, IcConstraints::Adjacent)
        .map(|m| format!("{:?}", m.rewards()))
        .unwrap_or_else(|e| e.to_string());
    println!("  diagnostic: adjacent-IC LP rewards {adjacent}");
    verdict(failures, format!("rewards {r:?}, LP matches"))
}

fn ic_audit() -> Outcome {
    let mut failures = Vec::new();
    let types = closed_form_types(&[3, 5, 7])?;
    let menu = contracts::monotone_closed_form(&types).map_err(|e| e.to_string())?;
    let cross = contracts::verify_menu(&menu);
    if !cross.diagonal_dominant() {
        let v: Vec<String> = cross
            .violations()
            .iter()
            .map(|v| format!("k={} prefers k={} by {:.3}", types[v.row].k, types[v.col].k, v.gain))
            .collect();
        failures.push(format!("rewards {:?}: {}", menu.rewards(), v.join(", ")));
    }
    for j in 0..types.len() {
        let mut rewards = menu.rewards();
        rewards[j] *= 1.1;
        let perturbed = contracts::ContractMenu::from_rewards(&types, &rewards);
        if !contracts::verify_menu(&perturbed).violations().iter().any(|v| v.col == j) {
            failures.push(format!("raising k={} reward undetected", types[j].k));
        }
    }
    verdict(failures, format!("diagonal maximal for rewards {:?}, perturbations detected", menu.rewards()))
}

fn long_term_bounds() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let fraction = 0.5;
    for (horizon, seed) in [(5usize, 1u64), (10, 2), (20, 3), (40, 4)] {
        let mut config = SimulationConfig::new(calibrated(50.0), horizon, 0.1, vec![50.0; horizon], seed);
        config.reward_rule = RewardRule::Contract;
        config.script = AttackScript::Equilibrium;
        let trace = simulate_with(&config).map_err(|e| e.to_string())?;
        for org in 0..2 {
            let Some(acc) = trace.long_term_accounting(org, fraction).map_err(|e| e.to_string())? else {
                continue;
            };
            checked += 1;
            let o = &acc.offer;
            if !(o.total_offered > 0.0 && o.total_offered < o.missed_gain) {
                failures.push(format!("T={horizon} org {org}: offered {} vs missed {}", o.total_offered, o.missed_gain));
            }
            let gap = acc.with_offer - acc.baseline - (1.0 - fraction) * o.missed_gain;
            if gap.abs() > 1e-9 * o.missed_gain.max(1.0) {
                failures.push(format!("T={horizon} org {org}: improvement off by {gap}"));
            }
        }
    }
    if checked == 0 {
        failures.push("no simulated horizon had a binding step".into());
    }
    verdict(failures, format!("{checked} offers checked"))
}

fn strategy_distance(a: &Equilibrium, b: &Equilibrium) -> f64 {
    let (qa, qb) = (a.attacker_dist.as_array(), b.attacker_dist.as_array());
    qa.iter()
        .zip(&qb)
        .map(|(x, y)| (x - y).abs())
        .fold((a.org_p - b.org_p).abs(), f64::max)
}

fn gamma_sensitivity() -> Outcome {
    let mut failures = Vec::new();
    let solve = |value: f64| -> Result<Vec<Equilibrium>, String> {
        (0..=10)
            .map(|i| {
                let mut params = calibrated(value);
                params.gamma = f64::from(i) / 10.0;
                solve_equilibrium(&params).map_err(|e| format!("R={value}, γ={}: {e}", params.gamma))
            })
            .collect()
    };
    let max_pairwise = |eqs: &[Equilibrium]| {
        let mut worst = 0.0f64;
        for a in eqs {
            for b in eqs {
                worst = worst.max(strategy_distance(a, b));
            }
        }
        worst
    };
    let flat = max_pairwise(&solve(50.0)?);
    if flat > 1e-6 {
        failures.push(format!("R=50: strategies move by {flat:.4} across γ"));
    }
    let moving = max_pairwise(&solve(20.0)?);
    if moving < 0.1 {
        failures.push(format!("R=20: strategies move only {moving:.4} across γ"));
    }
    verdict(failures, format!("R=50 spread {flat:.2e}, R=20 spread {moving:.3}"))
}

fn determinism() -> Outcome {
    let mut failures = Vec::new();
    let args = ["simulate", "--horizon", "25", "--value", "60", "--seed", "11"];
    let (a, b) = (binary(&args), binary(&args));
    if !a.status.success() || a.stdout.is_empty() || a.stdout != b.stdout {
        failures.push("simulate output differs between runs".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let mut params = GameParams::default();
        params.k_low = rng.random_range(1..10);
        params.k_high = rng.random_range(params.k_low + 1..=20);
        params.alpha = rng.random_range(0.01..5.0);
        params.p_background = rng.random();
        params.p_homog_same = rng.random();
        params.p_homog_diff = rng.random::<f64>() * params.p_background;
        let action = AttackAction::ALL[rng.random_range(0..3)];
        let levels = params.levels();
        let (k1, k2) = (levels[rng.random_range(0..2)], levels[rng.random_range(0..2)]);
        let p = attack_success_prob(action, k1, k2, &params).map_err(|e| e.to_string())?;
        let b1 = breach_single(p, params.alpha, k1).map_err(|e| e.to_string())?;
        let b2 = breach_single(p, params.alpha, k2).map_err(|e| e.to_string())?;
        let factored = breach_joint(action, k1, k2, &params).map_err(|e| e.to_string())?;
        worst = worst.max((factored - (b1 + b2 - b1 * b2)).abs());
    }
    if worst > 1e-12 {
        failures.push(format!("factored vs expanded breach differ by {worst}"));
    }
    verdict(failures, format!("identical CSV ({} bytes), breach forms agree to {worst:.1e}", a.stdout.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, trust_dynamics),
        (2, no_attack_region),
        (3, pure_org_strategies),
        (4, certification),
        (5, deviation_dominance),
        (6, two_type_closed_form),
        (7, ic_audit),
        (8, long_term_bounds),
        (9, gamma_sensitivity),
        (10, determinism),
    ];
    let mut failed = Vec::new();
    for (n, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {n}: PASS: {detail}"),
            Err(detail) => {
                println!("criterion {n}: FAIL: {detail}");
                failed.push(n);
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed {:?}",
        10 - failed.len(),
        failed.len(),
        failed
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
