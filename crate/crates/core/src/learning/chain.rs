//! The learning dynamics as a Markov chain over action profiles.
//!
//! Under uniform exploration the next profile depends only on the current
//! one: satisfied players stay put and each unsatisfied player `k` moves to
//! any of its `N_k` actions with probability `1/N_k`. Inverse-count
//! exploration has the same support, so reachability results carry over.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::SatisfactionGame;

/// Largest profile space for which the dense transition matrix is built.
pub const CHAIN_STATE_CAP: u64 = 4096;

/// Dense row-stochastic transition matrix indexed by profile index.
pub fn transition_matrix(game: &SatisfactionGame) -> Result<Vec<Vec<f64>>> {
    let space = game.space();
    let n = space.ensure_within(CHAIN_STATE_CAP.min(game.limits().graph_cap), "transition matrix")?;
    let k_players = space.num_players();
    let mut matrix = vec![vec![0.0; n]; n];
    let mut dst = vec![0usize; k_players];
    for (i, a) in space.iter().enumerate() {
        let movers: Vec<usize> = (0..k_players).filter(|&k| !game.sat(k, a.actions())).collect();
        let p: f64 = movers.iter().map(|&k| 1.0 / space.num_actions(k) as f64).product();
        // Enumerate all joint redraws of the unsatisfied players.
        dst.copy_from_slice(a.actions());
        for &k in &movers {
            dst[k] = 0;
        }
        loop {
            matrix[i][space.index_of(&dst)] += p;
            let mut carry = true;
            for &k in movers.iter().rev() {
                dst[k] += 1;
                if dst[k] < space.num_actions(k) {
                    carry = false;
                    break;
                }
                dst[k] = 0;
            }
            if carry {
                break;
            }
        }
    }
    Ok(matrix)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub states: usize,
    /// Indices with a self-transition probability of one.
    pub absorbing: Vec<usize>,
    pub se: Vec<usize>,
    pub absorbing_equals_se: bool,
    pub rows_stochastic: bool,
    /// Every state has a positive-probability path to some absorbing state.
    pub all_reach_absorbing: bool,
    /// Longest shortest path to absorption over all states that can reach one.
    pub max_steps_to_absorption: Option<usize>,
}

/// Absorption analysis of the uniform-exploration chain.
pub fn analyze_chain(game: &SatisfactionGame) -> Result<ChainReport> {
    let matrix = transition_matrix(game)?;
    let n = matrix.len();
    let space = game.space();

    let rows_stochastic = matrix
        .iter()
        .all(|row| (row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    let absorbing: Vec<usize> = (0..n).filter(|&i| matrix[i][i] >= 1.0 - 1e-12).collect();
    let se: Vec<usize> = space
        .iter()
        .enumerate()
        .filter(|(_, a)| game.all_sat(a.actions()))
        .map(|(i, _)| i)
        .collect();

    // Backward breadth-first search from the absorbing set.
    let mut predecessors = vec![Vec::new(); n];
    for (i, row) in matrix.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 && i != j {
                predecessors[j].push(i);
            }
        }
    }
    let mut dist: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &i in &absorbing {
        dist[i] = Some(0);
        queue.push_back(i);
    }
    while let Some(j) = queue.pop_front() {
        let d = dist[j].expect("queued states have a distance");
        for &i in &predecessors[j] {
            if dist[i].is_none() {
                dist[i] = Some(d + 1);
                queue.push_back(i);
            }
        }
    }

    Ok(ChainReport {
        states: n,
        absorbing_equals_se: absorbing == se,
        absorbing,
        se,
        rows_stochastic,
        all_reach_absorbing: dist.iter().all(Option::is_some),
        max_steps_to_absorption: dist.iter().flatten().copied().max(),
    })
}
