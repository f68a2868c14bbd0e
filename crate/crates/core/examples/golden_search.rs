//! Scans gain seeds for the shipped reference scenarios.
//!
//! Usage: cargo run --release -p sateq-core --example golden_search [first] [count]

use sateq_core::ese::enumerate_ese_bruteforce;
use sateq_core::{
    build_constrained_game, build_satisfaction_game, existence_condition, run_batch, ActionProfile, Channel,
    ExplorationPolicy, TrialConfig,
};

fn power_dominated(ch: &Channel, ese: &ActionProfile, other: &ActionProfile) -> bool {
    (0..2).any(|k| ch.power_grid(k)[other.get(k)] > ch.power_grid(k)[ese.get(k)])
}

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("integer")).collect();
    let first = args.first().copied().unwrap_or(0);
    let count = args.get(1).copied().unwrap_or(200);

    for seed in first..first + count {
        let ch = Channel::reference(seed);
        let g = build_satisfaction_game(&ch).unwrap();
        let (cg, costs) = build_constrained_game(&ch).unwrap();
        let se = g.enumerate_se().unwrap();
        let ese = enumerate_ese_bruteforce(&g, &costs).unwrap();
        let top = ch.levels[1] - 1;
        let feasible = existence_condition(&ch).unwrap();

        if feasible && se.len() > 1 && ese.len() == 1 {
            println!("feasible seed {seed}: {} SE, ESE {}", se.len(), ese[0]);
        }

        let stranded = g
            .satisfying_actions(0, &ActionProfile::new(vec![0, top]))
            .unwrap()
            .is_empty();
        let clipping = g.find_clipping_action(1).unwrap().is_some();
        if !(stranded && clipping && se.len() > 1 && ese.len() == 1) {
            continue;
        }
        if cg.enumerate_gne().unwrap() != vec![ActionProfile::new(vec![0, top])] {
            continue;
        }
        if !se.iter().filter(|a| **a != ese[0]).all(|a| power_dominated(&ch, &ese[0], a)) {
            continue;
        }
        let mut fractions = Vec::new();
        for policy in [ExplorationPolicy::Uniform, ExplorationPolicy::InverseCount] {
            let cfg = TrialConfig { seed: 1, policy, ..TrialConfig::default() };
            let s = run_batch(&g, &cfg, 1000).unwrap();
            fractions.push((s.fraction, s.stall_fraction()));
        }
        println!(
            "golden seed {seed}: {} SE, ESE {}, clipping {:?}, (converged, stalled) {:?}",
            se.len(),
            ese[0],
            g.find_clipping_action(1).unwrap(),
            fractions
        );
    }
}
