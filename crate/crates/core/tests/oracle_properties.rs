mod common;

use anongame::oracle::{grid_search, profile_utilities, verify_profile, GridSearch, Profile};
use anongame::solve_equilibrium;
use anongame::static_game::{build_tensor, PayoffTensor};
use proptest::prelude::*;

fn reversed_utilities(profile: &Profile, tensor: &PayoffTensor) -> [f64; 3] {
    let w1 = [profile.org1_p, 1.0 - profile.org1_p];
    let w2 = [profile.org2_p, 1.0 - profile.org2_p];
    let mut out = [0.0; 3];
    for a in (0..3).rev() {
        let action = anongame::AttackAction::ALL[a];
        for j in (0..2).rev() {
            for i in (0..2).rev() {
                let weight = profile.attacker[a] * w2[j] * w1[i];
                let cell = tensor.get(i, j, action);
                out[2] += weight * cell.attacker;
                out[1] += weight * cell.org2;
                out[0] += weight * cell.org1;
            }
        }
    }
    out
}

fn simplex() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0).prop_filter_map("nonzero", |(a, b, c)| {
        let s = a + b + c;
        (s > 1e-6).then(|| [a / s, b / s, c / s])
    })
}

proptest! {
    #[test]
    fn summation_order_is_irrelevant(
        params in common::game_params(),
        p1 in 0.0f64..=1.0,
        p2 in 0.0f64..=1.0,
        q in simplex(),
    ) {
        let tensor = build_tensor(&params).unwrap();
        let profile = Profile { org1_p: p1, org2_p: p2, attacker: q };
        let a = profile_utilities(&profile, &tensor);
        let b = reversed_utilities(&profile, &tensor);
        for i in 0..3 {
            prop_assert!((a[i] - b[i]).abs() <= 1e-12 * a[i].abs().max(1.0));
        }
    }

    #[test]
    fn regrets_nonnegative(params in common::game_params(), p in 0.0f64..=1.0, q in simplex()) {
        let tensor = build_tensor(&params).unwrap();
        let report = verify_profile(&Profile::symmetric(p, q), &tensor);
        prop_assert!(report.max_regret_org >= 0.0 && report.max_regret_attacker >= 0.0);
    }
}

#[test]
fn regret_non_increasing_on_nested_grids() {
    for value in [30.0, 50.0, 80.0] {
        let tensor = build_tensor(&common::calibrated(value)).unwrap();
        let mut previous = f64::INFINITY;
        for resolution in [5, 10, 20, 40, 80, 160] {
            let best = GridSearch {
                resolution,
                keep: Some(1),
                asymmetric: false,
            }
            .run(&tensor)
            .unwrap()[0];
            assert!(best.regret <= previous, "R={value} res={resolution}");
            previous = best.regret;
        }
    }
}

#[test]
fn fine_grid_lands_next_to_solver() {
    let params = common::calibrated(50.0);
    let tensor = build_tensor(&params).unwrap();
    let eq = solve_equilibrium(&params).unwrap();
    let best = GridSearch {
        resolution: 1000,
        keep: Some(1),
        asymmetric: false,
    }
    .run(&tensor)
    .unwrap()[0];
    assert!((best.p - eq.org_p).abs() <= 2e-3, "grid p {} vs {}", best.p, eq.org_p);
    assert!((best.q_background - eq.attacker_dist.background).abs() <= 2e-3);
}

#[test]
fn grid_output_is_deterministic_and_sorted() {
    let tensor = build_tensor(&common::calibrated(60.0)).unwrap();
    let a = grid_search(&tensor, 30).unwrap();
    let b = grid_search(&tensor, 30).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0].regret <= w[1].regret));
    assert_eq!(a.len(), 31 * (31 * 32 / 2));
}
