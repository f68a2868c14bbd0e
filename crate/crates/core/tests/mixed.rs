mod common;

use common::{all_profiles, game_strategy};
use proptest::prelude::*;
use sateq_core::{
    epsilon_se_exists, is_epsilon_se, satisfaction_probability, uniform_epsilon, ActionProfile, MixedProfile,
    SatisfactionGame,
};

fn game_and_mixed() -> impl Strategy<Value = (SatisfactionGame, MixedProfile)> {
    game_strategy().prop_flat_map(|g| {
        let dists = g
            .action_counts()
            .iter()
            .map(|&n| {
                prop::collection::vec(1u32..=8, n).prop_map(|w| {
                    let total: u32 = w.iter().sum();
                    w.iter().map(|&x| x as f64 / total as f64).collect::<Vec<_>>()
                })
            })
            .collect::<Vec<_>>();
        (Just(g), dists.prop_map(MixedProfile::new))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn probability_matches_direct_sum((g, pi) in game_and_mixed()) {
        let counts = g.action_counts().to_vec();
        for k in 0..counts.len() {
            let direct: f64 = all_profiles(&counts)
                .into_iter()
                .filter(|a| g.is_satisfied(k, &ActionProfile::new(a.clone())).unwrap())
                .map(|a| a.iter().enumerate().map(|(j, &x)| pi.distributions[j][x]).product::<f64>())
                .sum();
            let p = satisfaction_probability(&g, &pi, k).unwrap();
            prop_assert!((p - direct).abs() < 1e-12, "{} vs {}", p, direct);
        }
    }

    #[test]
    fn uniform_epsilon_is_tight(g in game_strategy()) {
        let exists = epsilon_se_exists(&g).unwrap();
        let everyone_somewhere = (0..g.num_players())
            .all(|k| g.space().iter().any(|a| g.is_satisfied(k, &a).unwrap()));
        prop_assert_eq!(exists, everyone_somewhere);
        if !exists {
            prop_assert!(uniform_epsilon(&g).is_err());
            return Ok(());
        }
        let r = uniform_epsilon(&g).unwrap();
        let corner: f64 = g.action_counts().iter().map(|&n| 1.0 / n as f64).product();
        prop_assert!(r.epsilon <= 1.0 - corner + 1e-12);
        prop_assert_eq!(r.worst_case_bound, 1.0 - corner);
        if r.epsilon > 1e-6 {
            let u = MixedProfile::uniform(g.action_counts());
            prop_assert!(is_epsilon_se(&g, &u, r.epsilon).unwrap());
            prop_assert!(!is_epsilon_se(&g, &u, r.epsilon - 1e-6).unwrap());
        }
    }
}

#[test]
fn worst_case_construction_hits_the_bound() {
    for (n1, n2) in [(2, 2), (3, 2), (4, 3)] {
        // Each player satisfied at exactly one profile, different ones.
        let g = SatisfactionGame::from_fn(vec![n1, n2], move |k, a| {
            if k == 0 {
                a == [0, 0]
            } else {
                a == [n1 - 1, n2 - 1]
            }
        })
        .unwrap();
        let r = uniform_epsilon(&g).unwrap();
        let bound = 1.0 - 1.0 / (n1 * n2) as f64;
        assert_eq!(r.epsilon, bound);
        assert_eq!(r.worst_case_bound, bound);
    }
}
