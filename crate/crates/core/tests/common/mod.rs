#![allow(dead_code)]

use proptest::prelude::*;
use sateq_core::{CostProfile, SatisfactionGame};

/// Action counts and a satisfaction table for up to 3 players with up to 4
/// actions each.
pub fn game_strategy() -> impl Strategy<Value = SatisfactionGame> {
    prop::collection::vec(1usize..=4, 1..=3).prop_flat_map(|counts| {
        let size: usize = counts.iter().product();
        let k = counts.len();
        prop::collection::vec(prop::collection::vec(any::<bool>(), size), k)
            .prop_map(move |table| SatisfactionGame::from_table(counts.clone(), table).unwrap())
    })
}

/// Random costs with values on a 1/64 lattice so potentials are exact sums.
pub fn costs_for(counts: &[usize]) -> impl Strategy<Value = CostProfile> {
    counts
        .iter()
        .map(|&n| prop::collection::vec((0u32..64).prop_map(|x| x as f64 / 64.0), n))
        .collect::<Vec<_>>()
        .prop_map(CostProfile::new)
}

/// Independent re-implementation of the satisfaction check from the raw table.
pub fn table_sat(counts: &[usize], table: &[Vec<bool>], k: usize, a: &[usize]) -> bool {
    let mut idx = 0;
    for (x, n) in a.iter().zip(counts) {
        idx = idx * n + x;
    }
    table[k][idx]
}

/// All profiles in lexicographic order, built by nested counting.
pub fn all_profiles(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in counts {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}
