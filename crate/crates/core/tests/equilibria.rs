mod common;

use common::{all_profiles, game_strategy, table_sat};
use proptest::prelude::*;
use sateq_core::{ActionProfile, ConstrainedGame, NormalFormGame, SatisfactionGame};

fn table_game() -> impl Strategy<Value = (Vec<usize>, Vec<Vec<bool>>)> {
    prop::collection::vec(1usize..=4, 1..=3).prop_flat_map(|counts| {
        let size: usize = counts.iter().product();
        let k = counts.len();
        (
            Just(counts),
            prop::collection::vec(prop::collection::vec(any::<bool>(), size), k),
        )
    })
}

fn profiles(v: &[Vec<usize>]) -> Vec<ActionProfile> {
    v.iter().cloned().map(ActionProfile::new).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn se_and_ne_match_table_scan((counts, table) in table_game()) {
        let g = SatisfactionGame::from_table(counts.clone(), table.clone()).unwrap();
        let all = all_profiles(&counts);
        let k = counts.len();

        let se: Vec<_> = all
            .iter()
            .filter(|a| (0..k).all(|j| table_sat(&counts, &table, j, a)))
            .cloned()
            .collect();
        prop_assert_eq!(g.enumerate_se().unwrap(), profiles(&se));

        // Binary-utility NE: no player gains by switching to another action.
        let ne: Vec<_> = all
            .iter()
            .filter(|a| {
                (0..k).all(|j| {
                    let here = table_sat(&counts, &table, j, a) as u8;
                    (0..counts[j]).all(|alt| {
                        let mut b = (*a).clone();
                        b[j] = alt;
                        table_sat(&counts, &table, j, &b) as u8 <= here
                    })
                })
            })
            .cloned()
            .collect();
        prop_assert_eq!(g.enumerate_ne_binary().unwrap(), profiles(&ne));
    }

    #[test]
    fn inclusion_chain(g in game_strategy(), salt in any::<u64>()) {
        let cg = ConstrainedGame::from_fn(g.clone(), move |k, a| {
            let mut h = salt ^ (k as u64).wrapping_mul(0x9E37_79B9);
            for &x in a {
                h = (h ^ x as u64).wrapping_mul(0x0100_0000_01b3);
            }
            (h % 7) as f64
        });
        let gne = cg.enumerate_gne().unwrap();
        let se = g.enumerate_se().unwrap();
        let ne = g.enumerate_ne_binary().unwrap();
        prop_assert!(gne.iter().all(|a| se.contains(a)));
        prop_assert!(se.iter().all(|a| ne.contains(a)));
    }

    #[test]
    fn best_response_se_is_pure_ne(
        counts in prop::collection::vec(1usize..=4, 2..=3),
        seed in any::<u64>(),
    ) {
        let size: usize = counts.iter().product();
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 5) as f64
        };
        let utilities: Vec<Vec<f64>> = (0..counts.len()).map(|_| (0..size).map(|_| next()).collect()).collect();
        let nf = NormalFormGame::from_table(counts.clone(), utilities.clone()).unwrap();
        let idx = |a: &[usize]| a.iter().zip(&counts).fold(0, |acc, (x, n)| acc * n + x);
        let pure_ne: Vec<_> = all_profiles(&counts)
            .into_iter()
            .filter(|a| {
                (0..counts.len()).all(|k| {
                    (0..counts[k]).all(|alt| {
                        let mut b = a.clone();
                        b[k] = alt;
                        utilities[k][idx(&b)] <= utilities[k][idx(a)]
                    })
                })
            })
            .collect();
        prop_assert_eq!(nf.best_response_game().enumerate_se().unwrap(), profiles(&pure_ne));
    }

    #[test]
    fn lattice_conditions_imply_an_se(g in game_strategy()) {
        let orders: Vec<Vec<usize>> = g.action_counts().iter().map(|&n| (0..n).collect()).collect();
        if g.check_lattice_conditions(&orders).unwrap().all() {
            prop_assert!(!g.enumerate_se().unwrap().is_empty());
        }
    }

    #[test]
    fn monotone_singleton_responses_have_an_se(
        counts in prop::collection::vec(1usize..=4, 1..=3),
        offsets in prop::collection::vec(0usize..4, 3),
    ) {
        // f_k(a_{-k}) = { min(N_k - 1, (offset_k + sum of others) / 2) } is
        // non-decreasing in the opponents' actions.
        let c = counts.clone();
        let g = SatisfactionGame::from_fn(counts.clone(), move |k, a| {
            let others: usize = a.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, x)| x).sum();
            a[k] == ((offsets[k] + others) / 2).min(c[k] - 1)
        })
        .unwrap();
        let orders: Vec<Vec<usize>> = counts.iter().map(|&n| (0..n).collect()).collect();
        let report = g.check_lattice_conditions(&orders).unwrap();
        prop_assert!(report.all());
        prop_assert!(!g.enumerate_se().unwrap().is_empty());
    }

    #[test]
    fn clipping_action_is_always_satisfying(g in game_strategy()) {
        for k in 0..g.num_players() {
            if let Some(c) = g.find_clipping_action(k).unwrap() {
                for a in g.space().iter() {
                    prop_assert!(g.is_satisfied(k, &a.with_action(k, c)).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_round_trip(g in game_strategy()) {
        let back = SatisfactionGame::from_json(&g.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.action_counts(), g.action_counts());
        for a in g.space().iter() {
            for k in 0..g.num_players() {
                prop_assert_eq!(back.is_satisfied(k, &a).unwrap(), g.is_satisfied(k, &a).unwrap());
            }
        }
    }
}

#[test]
fn example_game_sets() {
    let g = SatisfactionGame::two_by_two_example();
    let p = |v: &[usize]| ActionProfile::new(v.to_vec());
    assert_eq!(g.enumerate_se().unwrap(), vec![p(&[0, 1])]);
    assert_eq!(g.enumerate_ne_binary().unwrap(), vec![p(&[0, 1]), p(&[1, 0])]);
}
