mod common;

use common::game_strategy;
use proptest::prelude::*;
use sateq_core::{analyze_chain, run_batch, run_trial, ExplorationPolicy, SatisfactionGame, StopReason, TrialConfig};

fn nonempty_with_se(g: &SatisfactionGame) -> bool {
    g.correspondences_nonempty().unwrap() && !g.enumerate_se().unwrap().is_empty()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn absorbing_states_are_the_se(g in game_strategy()) {
        let report = analyze_chain(&g).unwrap();
        prop_assert!(report.rows_stochastic);
        let se: Vec<usize> = g
            .enumerate_se()
            .unwrap()
            .iter()
            .map(|a| g.space().index_of(a.actions()))
            .collect();
        prop_assert_eq!(&report.se, &se);
        if g.correspondences_nonempty().unwrap() {
            prop_assert!(report.absorbing_equals_se);
            prop_assert_eq!(report.all_reach_absorbing, !se.is_empty());
        }
    }

    #[test]
    fn trials_converge_and_stay_put(g in game_strategy(), seed in any::<u64>(), inverse in any::<bool>()) {
        prop_assume!(nonempty_with_se(&g));
        let policy = if inverse { ExplorationPolicy::InverseCount } else { ExplorationPolicy::Uniform };
        let cfg = TrialConfig { seed, policy, max_intervals: 10_000, stall_window: 10_000, ..TrialConfig::default() };
        let r = run_trial(&g, &cfg).unwrap();
        prop_assert!(r.converged);
        prop_assert!(g.is_se(&r.final_profile).unwrap());
        let n = r.intervals_to_convergence.unwrap();
        prop_assert_eq!(r.trace.len(), n + 1);

        // Continuing past convergence never moves: replay the same seed with a
        // larger budget and the trace is identical.
        let longer = run_trial(&g, &TrialConfig { max_intervals: 20_000, stall_window: 20_000, ..cfg }).unwrap();
        prop_assert_eq!(longer.trace, r.trace);
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let g = SatisfactionGame::from_fn(vec![4, 4, 3], |k, a| (a[0] + 2 * a[1] + a[2] + k) % 5 < 2).unwrap();
    let cfg = TrialConfig { seed: 2024, ..TrialConfig::default() };
    assert_eq!(run_trial(&g, &cfg).unwrap(), run_trial(&g, &cfg).unwrap());
    let a = run_batch(&g, &cfg, 50).unwrap();
    let b = run_batch(&g, &cfg, 50).unwrap();
    assert_eq!(a, b);
    assert!(a.results.iter().all(|r| r.reason != StopReason::Budget || r.intervals_played == 10_000));
}
