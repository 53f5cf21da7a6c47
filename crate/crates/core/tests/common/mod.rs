#![allow(dead_code)]

use anongame::GameParams;
use proptest::prelude::*;

/// Parameters satisfying every modeling assumption.
pub fn game_params() -> impl Strategy<Value = GameParams> {
    (
        (1u32..6, 1u32..8, 0.1f64..2.0, 0.0f64..=1.0),
        (0.01f64..0.3, 0.01f64..0.7, 0.01f64..0.7),
        (0.1f64..10.0, 0.01f64..6.0, 5.0f64..150.0),
        (1.0f64..20.0, prop_oneof![Just(2.0), Just(std::f64::consts::E), Just(10.0)]),
    )
        .prop_map(
            |((k_low, dk, alpha, gamma), (p_hd, db, ds), (c_h, dc, value), (v_size, log_base))| {
                GameParams {
                    k_low,
                    k_high: k_low + dk,
                    alpha,
                    gamma,
                    p_background: (p_hd + db).min(1.0),
                    p_homog_same: (p_hd + ds).min(1.0),
                    p_homog_diff: p_hd,
                    cost_attack_background: c_h + dc,
                    cost_attack_homog: c_h,
                    v_size,
                    log_base,
                    ..GameParams::default()
                }
                .with_dataset_value(value)
            },
        )
}

pub fn calibrated(value: f64) -> GameParams {
    GameParams::default().with_dataset_value(value)
}
