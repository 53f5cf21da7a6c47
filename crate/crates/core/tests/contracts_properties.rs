use std::collections::BTreeSet;

use anongame::contracts::{
    long_term_offer, make_type, monotone_closed_form, n_type_optimal, two_type_optimal, verify_menu,
    ContractMenu, OrgType,
};
use proptest::prelude::*;

/// Types with cost falling in k relative to trust, so full IC is satisfiable.
fn trust_heavy_types(n: usize) -> impl Strategy<Value = Vec<OrgType>> {
    (
        proptest::collection::btree_set(1u32..15, n),
        0.5f64..=1.0,
        1.0f64..1.5,
        10.0f64..200.0,
    )
        .prop_map(|(ks, gamma, v_size, valuation)| {
            ks.into_iter()
                .map(|k| make_type(k, gamma, v_size, 10.0, valuation).unwrap())
                .collect()
        })
}

fn any_types(n: usize) -> impl Strategy<Value = Vec<OrgType>> {
    (
        proptest::collection::btree_set(1u32..15, n),
        0.0f64..=1.0,
        1.0f64..20.0,
        proptest::collection::vec(10.0f64..200.0, n),
    )
        .prop_map(|(ks, gamma, v_size, valuations)| {
            ks.into_iter()
                .zip(valuations)
                .map(|(k, v)| make_type(k, gamma, v_size, 10.0, v).unwrap())
                .collect()
        })
}

fn ic_holds(types: &[OrgType], rewards: &[f64]) -> bool {
    types.iter().enumerate().all(|(i, ti)| {
        let own = ti.theta * rewards[i] - ti.cost + ti.trust;
        types
            .iter()
            .enumerate()
            .all(|(j, tj)| own >= ti.theta * rewards[j] - tj.cost + tj.trust - 1e-9)
    })
}

proptest! {
    #[test]
    fn closed_form_binds_high_type(
        k_low in 1u32..10,
        dk in 1u32..10,
        gamma in 0.0f64..=1.0,
        v_size in 1.0f64..20.0,
    ) {
        let low = make_type(k_low, gamma, v_size, 10.0, 100.0).unwrap();
        let high = make_type(k_low + dk, gamma, v_size, 10.0, 100.0).unwrap();
        let menu = two_type_optimal(&low, &high).unwrap();
        prop_assert!(menu.entries[1].org_net_utility.abs() <= 1e-12 * high.cost.max(1.0));
        prop_assert!(menu.entries[0].reward >= menu.entries[1].reward);
    }

    #[test]
    fn incentive_compatible_menus_are_monotone(
        types in any_types(3),
        rewards in proptest::collection::vec(0.0f64..300.0, 3),
    ) {
        if ic_holds(&types, &rewards) {
            for (i, ti) in types.iter().enumerate() {
                for (j, tj) in types.iter().enumerate() {
                    if ti.theta > tj.theta {
                        prop_assert!(rewards[i] >= rewards[j] - 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn lp_beats_feasible_menus(
        types in trust_heavy_types(3),
        rewards in proptest::collection::vec(0.0f64..100.0, 3),
    ) {
        let best = n_type_optimal(&types).unwrap();
        prop_assert!(best.feasible);
        let candidate = ContractMenu::from_rewards(&types, &rewards);
        if candidate.feasible {
            prop_assert!(best.principal_utility >= candidate.principal_utility - 1e-9);
        }
    }

    #[test]
    fn diagonal_dominance_equals_ic(
        types in any_types(3),
        rewards in proptest::collection::vec(0.0f64..300.0, 3),
    ) {
        let menu = ContractMenu::from_rewards(&types, &rewards);
        prop_assert_eq!(verify_menu(&menu).diagonal_dominant(), ic_holds(&types, &rewards));
    }

    #[test]
    fn closed_form_monotone_for_any_count(types in any_types(4)) {
        let menu = monotone_closed_form(&types).unwrap();
        prop_assert!(menu.ir_violations().is_empty());
        let highest = types.iter().enumerate().max_by_key(|(_, t)| t.k).unwrap().0;
        prop_assert!(menu.entries[highest].org_net_utility.abs() <= 1e-9);
    }

    #[test]
    fn long_term_offer_respects_bounds(
        series in proptest::collection::vec((1u32..10, 0.0f64..100.0, 0.0f64..100.0), 1..20),
        picks in proptest::collection::vec(any::<bool>(), 20),
        fraction in 0.01f64..0.99,
    ) {
        let theta: Vec<f64> = series.iter().map(|s| 1.0 / f64::from(s.0)).collect();
        let v: Vec<f64> = series.iter().map(|s| s.1).collect();
        let r: Vec<f64> = series.iter().map(|s| s.2).collect();
        let steps: BTreeSet<usize> = (1..=series.len()).filter(|&s| picks[s - 1]).collect();
        if let Some(offer) = long_term_offer(&theta, &v, &r, &steps, fraction).unwrap() {
            let total = offer.per_step_minimum * steps.len() as f64;
            prop_assert!(total > 0.0);
            prop_assert!(total < offer.missed_gain);
            prop_assert!(offer.per_step_minimum > 0.0);
        }
    }
}

#[test]
fn three_type_lp_when_feasible() {
    let types: Vec<OrgType> = [3, 5, 7]
        .iter()
        .map(|&k| make_type(k, 1.0, 2.0, 10.0, 60.0).unwrap())
        .collect();
    let menu = n_type_optimal(&types).unwrap();
    assert!(verify_menu(&menu).diagonal_dominant());
    let rewards = menu.rewards();
    assert!(rewards[0] >= rewards[1] && rewards[1] >= rewards[2]);
}
