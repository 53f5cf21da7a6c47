//! Brute-force equilibrium verification.
//!
//! [`verify`] computes every player's best pure response exactly;
//! [`grid_search`] evaluates regret over a discretized strategy grid and is
//! independent of the analytic solvers in [`crate::static_game`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::AttackAction;
use crate::static_game::{Equilibrium, PayoffTensor};

/// A possibly asymmetric mixed profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    /// Organization 1's probability of `k_low`.
    pub org1_p: f64,
    pub org2_p: f64,
    /// `(q_B, q_H, q_N)`.
    pub attacker: [f64; 3],
}

impl Profile {
    pub fn symmetric(p: f64, attacker: [f64; 3]) -> Self {
        Profile {
            org1_p: p,
            org2_p: p,
            attacker,
        }
    }

    pub fn from_equilibrium(eq: &Equilibrium) -> Self {
        Self::symmetric(eq.org_p, eq.attacker_dist.as_array())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    Org1,
    Org2,
    Attacker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Level(u32),
    Attack(AttackAction),
}

/// A unilateral pure deviation and what it gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub player: Player,
    pub action: Move,
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub max_regret_org: f64,
    pub max_regret_attacker: f64,
    pub best_deviation: Deviation,
}

impl RegretReport {
    pub fn max_regret(&self) -> f64 {
        self.max_regret_org.max(self.max_regret_attacker)
    }
}

/// Expected `(org1, org2, attacker)` utilities of a profile.
pub fn profile_utilities(profile: &Profile, tensor: &PayoffTensor) -> [f64; 3] {
    let w1 = [profile.org1_p, 1.0 - profile.org1_p];
    let w2 = [profile.org2_p, 1.0 - profile.org2_p];
    let mut out = [0.0; 3];
    for i in 0..2 {
        for j in 0..2 {
            for a in 0..3 {
                let weight = w1[i] * w2[j] * profile.attacker[a];
                let cell = tensor.raw(i, j, a);
                out[0] += weight * cell.org1;
                out[1] += weight * cell.org2;
                out[2] += weight * cell.attacker;
            }
        }
    }
    out
}

/// Exact best-response regrets of a symmetric equilibrium.
pub fn verify(eq: &Equilibrium, tensor: &PayoffTensor) -> RegretReport {
    verify_profile(&Profile::from_equilibrium(eq), tensor)
}

/// Exact best-response regrets of any profile.
pub fn verify_profile(profile: &Profile, tensor: &PayoffTensor) -> RegretReport {
    let levels = tensor.levels();
    let base = profile_utilities(profile, tensor);
    let mut deviations = Vec::with_capacity(7);
    for (l, &k) in levels.iter().enumerate() {
        let pure = if l == 0 { 1.0 } else { 0.0 };
        let u1 = profile_utilities(&Profile { org1_p: pure, ..*profile }, tensor)[0];
        deviations.push(Deviation {
            player: Player::Org1,
            action: Move::Level(k),
            gain: u1 - base[0],
        });
        let u2 = profile_utilities(&Profile { org2_p: pure, ..*profile }, tensor)[1];
        deviations.push(Deviation {
            player: Player::Org2,
            action: Move::Level(k),
            gain: u2 - base[1],
        });
    }
    for action in AttackAction::ALL {
        let mut attacker = [0.0; 3];
        attacker[action.index()] = 1.0;
        let ua = profile_utilities(&Profile { attacker, ..*profile }, tensor)[2];
        deviations.push(Deviation {
            player: Player::Attacker,
            action: Move::Attack(action),
            gain: ua - base[2],
        });
    }
    let max_gain = |player: fn(&Player) -> bool| {
        deviations
            .iter()
            .filter(|d| player(&d.player))
            .map(|d| d.gain)
            .fold(0.0_f64, f64::max)
    };
    let max_regret_org = max_gain(|p| *p != Player::Attacker);
    let max_regret_attacker = max_gain(|p| *p == Player::Attacker);
    let best_deviation = deviations
        .iter()
        .copied()
        .reduce(|best, d| if d.gain > best.gain { d } else { best })
        .expect("deviation list is non-empty");
    RegretReport {
        max_regret_org,
        max_regret_attacker,
        best_deviation,
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCandidate {
    /// Organization 1's probability of `k_low` (both organizations' in
    /// symmetric mode).
    pub p: f64,
    pub org2_p: f64,
    pub q_background: f64,
    pub q_homogeneity: f64,
    pub q_no_attack: f64,
    pub regret: f64,
}

impl GridCandidate {
    pub fn attacker(&self) -> [f64; 3] {
        [self.q_background, self.q_homogeneity, self.q_no_attack]
    }
}

/// Grid-search configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSearch {
    /// Number of intervals per axis.
    pub resolution: u32,
    /// Keep only the best `keep` candidates; `None` keeps all.
    pub keep: Option<usize>,
    /// Let the organizations mix independently.
    pub asymmetric: bool,
}

impl GridSearch {
    pub fn new(resolution: u32) -> Self {
        GridSearch {
            resolution,
            keep: None,
            asymmetric: false,
        }
    }

    /// Candidates sorted by regret, ties by grid index.
    pub fn run(&self, tensor: &PayoffTensor) -> Result<Vec<GridCandidate>> {
        if self.resolution == 0 {
            return Err(Error::invalid("resolution", "must be at least 1"));
        }
        let n = self.resolution;
        let outer = if self.asymmetric { (n + 1) * (n + 1) } else { n + 1 };
        let keep = self.keep;
        let chunks: Vec<Vec<Keyed>> = (0..outer)
            .into_par_iter()
            .map(|idx| {
                let (i1, i2) = if self.asymmetric { (idx / (n + 1), idx % (n + 1)) } else { (idx, idx) };
                scan_orgs(tensor, n, i1, i2, keep)
            })
            .collect();
        let mut all: Vec<Keyed> = chunks.into_iter().flatten().collect();
        all.sort_unstable();
        if let Some(k) = keep {
            all.truncate(k);
        }
        Ok(all.into_iter().map(|k| k.candidate).collect())
    }
}

/// All symmetric candidates at `resolution`, sorted by regret.
pub fn grid_search(tensor: &PayoffTensor, resolution: u32) -> Result<Vec<GridCandidate>> {
    GridSearch::new(resolution).run(tensor)
}

#[derive(Debug, Clone, Copy)]
struct Keyed {
    candidate: GridCandidate,
    index: [u32; 4],
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.candidate
            .regret
            .total_cmp(&other.candidate.regret)
            .then_with(|| self.index.cmp(&other.index))
    }
}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Keyed {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Keyed {}

/// Scans the attacker simplex for fixed organization grid indices.
///
/// With `q_N = 1 − q_B − q_H`, each organization's level gap and the
/// attacker's mixed expectation are affine in `q_H` along a row of fixed
/// `q_B`, so the inner loop evaluates three affine forms per point.
fn scan_orgs(tensor: &PayoffTensor, n: u32, i1: u32, i2: u32, keep: Option<usize>) -> Vec<Keyed> {
    let step = 1.0 / f64::from(n);
    let p1 = f64::from(i1) * step;
    let p2 = f64::from(i2) * step;
    let w1 = [p1, 1.0 - p1];
    let w2 = [p2, 1.0 - p2];

    // Per attack action: org1's and org2's gap between playing k_low and
    // k_high, and the attacker's expectation.
    let mut gap1 = [0.0; 3];
    let mut gap2 = [0.0; 3];
    let mut att = [0.0; 3];
    for a in 0..3 {
        for m in 0..2 {
            gap1[a] += w2[m] * (tensor.raw(0, m, a).org1 - tensor.raw(1, m, a).org1);
            gap2[a] += w1[m] * (tensor.raw(m, 0, a).org2 - tensor.raw(m, 1, a).org2);
            for l in 0..2 {
                att[a] += w1[l] * w2[m] * tensor.raw(l, m, a).attacker;
            }
        }
    }
    let best_attack = att.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut heap: BinaryHeap<Keyed> = BinaryHeap::new();
    let mut all = Vec::new();
    let mut row = vec![0.0; n as usize + 1];
    for jb in 0..=n {
        let qb = f64::from(jb) * step;
        let base = |v: &[f64; 3]| v[0] * qb + v[2] * (1.0 - qb);
        let (base1, base2, base_a) = (base(&gap1), base(&gap2), base(&att));
        let (slope1, slope2, slope_a) = (gap1[1] - gap1[2], gap2[1] - gap2[2], att[1] - att[2]);
        let len = (n - jb) as usize + 1;
        // An organization mixing with `p` and level gap `d` regrets
        // `max((1 − p)·d, −p·d)`.
        for (jh, slot) in row[..len].iter_mut().enumerate() {
            let qh = jh as f64 * step;
            let d1 = base1 + qh * slope1;
            let d2 = base2 + qh * slope2;
            let r1 = ((1.0 - p1) * d1).max(-p1 * d1);
            let r2 = ((1.0 - p2) * d2).max(-p2 * d2);
            let ra = best_attack - (base_a + qh * slope_a);
            *slot = r1.max(r2).max(ra).max(0.0);
        }
        for (jh, &regret) in row[..len].iter().enumerate() {
            if let Some(k) = keep {
                if heap.len() >= k && heap.peek().is_some_and(|worst| regret > worst.candidate.regret) {
                    continue;
                }
            }
            let jh = jh as u32;
            let keyed = Keyed {
                candidate: GridCandidate {
                    p: p1,
                    org2_p: p2,
                    q_background: qb,
                    q_homogeneity: f64::from(jh) * step,
                    q_no_attack: f64::from(n - jb - jh) * step,
                    regret,
                },
                index: [i1, i2, jb, jh],
            };
            match keep {
                None => all.push(keyed),
                Some(k) => {
                    if heap.len() < k {
                        heap.push(keyed);
                    } else if heap.peek().is_some_and(|worst| keyed < *worst) {
                        heap.pop();
                        heap.push(keyed);
                    }
                }
            }
        }
    }
    match keep {
        None => all,
        Some(_) => heap.into_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GameParams;
    use crate::static_game::{build_tensor, AttackerStrategy, Equilibrium, EquilibriumKind};

    fn tensor(value: f64) -> PayoffTensor {
        build_tensor(&GameParams::default().with_dataset_value(value)).unwrap()
    }

    #[test]
    fn strict_pure_equilibrium_has_zero_regret() {
        let t = tensor(20.0);
        let profile = Profile::symmetric(1.0, [0.0, 0.0, 1.0]);
        let report = verify_profile(&profile, &t);
        assert_eq!(report.max_regret_org, 0.0);
        assert_eq!(report.max_regret_attacker, 0.0);
    }

    #[test]
    fn perturbed_equilibrium_has_regret() {
        let t = tensor(50.0);
        let eq = crate::static_game::solve_equilibrium(&GameParams::default().with_dataset_value(50.0)).unwrap();
        let shifted = Equilibrium::from_profile(
            EquilibriumKind::Mixed,
            (eq.org_p + 0.1).min(1.0),
            eq.attacker_dist,
            &t,
        );
        assert!(verify(&shifted, &t).max_regret() > 1e-3);
    }

    #[test]
    fn best_deviation_names_profitable_move() {
        let t = tensor(50.0);
        // Attacker abstaining while attacks pay.
        let eq = Equilibrium::from_profile(
            EquilibriumKind::PureNoAttack,
            1.0,
            AttackerStrategy::pure(AttackAction::NoAttack),
            &t,
        );
        let report = verify(&eq, &t);
        assert_eq!(report.best_deviation.player, Player::Attacker);
        assert!(report.max_regret_attacker > 0.0);
    }

    #[test]
    fn resolution_one_evaluates_six_corners() {
        let found = grid_search(&tensor(50.0), 1).unwrap();
        assert_eq!(found.len(), 6);
        assert!(grid_search(&tensor(50.0), 0).is_err());
    }

    #[test]
    fn known_pure_equilibrium_corner_has_zero_regret() {
        let found = grid_search(&tensor(20.0), 4).unwrap();
        let best = found[0];
        assert_eq!(best.regret, 0.0);
        assert_eq!((best.p, best.q_no_attack), (1.0, 1.0));
    }

    #[test]
    fn grid_regret_matches_verify() {
        let t = tensor(60.0);
        for c in grid_search(&t, 8).unwrap() {
            let exact = verify_profile(&Profile::symmetric(c.p, c.attacker()), &t).max_regret();
            assert!((exact - c.regret).abs() < 1e-9);
        }
    }

    #[test]
    fn keep_truncates_and_preserves_order() {
        let t = tensor(50.0);
        let full = grid_search(&t, 20).unwrap();
        let top = GridSearch {
            resolution: 20,
            keep: Some(5),
            asymmetric: false,
        }
        .run(&t)
        .unwrap();
        assert_eq!(&full[..5], &top[..]);
    }

    #[test]
    fn asymmetric_grid_contains_symmetric_points() {
        let t = tensor(50.0);
        let asym = GridSearch {
            resolution: 4,
            keep: None,
            asymmetric: true,
        }
        .run(&t)
        .unwrap();
        assert_eq!(asym.len(), 25 * 15);
        let sym_best = grid_search(&t, 4).unwrap()[0];
        assert!(asym[0].regret <= sym_best.regret);
    }
}
