//! Efficient satisfaction equilibria.
//!
//! Players attach an effort (cost) to each of their actions. The efficient
//! equilibria are the generalized Nash equilibria of the cost-minimization
//! game constrained by the satisfaction correspondences. Because costs only
//! depend on the player's own action, that game admits the exact constrained
//! potential `phi(a) = sum_k c_k(a_k)`, and its equilibria can be read off as
//! sinks of the deviation graph: one vertex per profile and an arc for every
//! feasible unilateral deviation that strictly lowers the potential.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::game::SatisfactionGame;
use crate::profile::{ActionProfile, ProfileSpace};

/// Per-player action costs; `costs[k][i]` is the effort of action `i` for
/// player `k`. Lower is cheaper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostProfile {
    pub costs: Vec<Vec<f64>>,
}

impl CostProfile {
    pub fn new(costs: Vec<Vec<f64>>) -> Self {
        Self { costs }
    }

    /// `c_k(i) = i`.
    pub fn by_index(action_counts: &[usize]) -> Self {
        Self {
            costs: action_counts
                .iter()
                .map(|&n| (0..n).map(|i| i as f64).collect())
                .collect(),
        }
    }

    pub fn uniform(action_counts: &[usize], value: f64) -> Self {
        Self {
            costs: action_counts.iter().map(|&n| vec![value; n]).collect(),
        }
    }

    pub fn validate(&self, action_counts: &[usize]) -> Result<()> {
        if self.costs.len() != action_counts.len() {
            return Err(Error::Dimension(format!(
                "cost profile has {} players, expected {}",
                self.costs.len(),
                action_counts.len()
            )));
        }
        for (k, (c, &n)) in self.costs.iter().zip(action_counts).enumerate() {
            if c.len() != n {
                return Err(Error::Dimension(format!(
                    "costs of player {k} have {} entries, expected {n}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return arg(format!("non-finite cost for player {k}"));
            }
        }
        Ok(())
    }

    #[inline]
    fn potential_unchecked(&self, actions: &[usize]) -> f64 {
        actions
            .iter()
            .enumerate()
            .map(|(k, &a)| self.costs[k][a])
            .sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `phi(a) = sum_k c_k(a_k)`.
pub fn potential(costs: &CostProfile, a: &ActionProfile) -> Result<f64> {
    if costs.costs.len() != a.len() {
        return Err(Error::Dimension(format!(
            "profile has {} players, cost profile has {}",
            a.len(),
            costs.costs.len()
        )));
    }
    for (k, &x) in a.actions().iter().enumerate() {
        if x >= costs.costs[k].len() {
            return Err(Error::Dimension(format!(
                "action {x} of player {k} has no cost entry"
            )));
        }
    }
    Ok(costs.potential_unchecked(a.actions()))
}

/// Directed graph over all profiles, stored as sorted out-neighbour lists.
#[derive(Debug, Clone)]
pub struct DeviationGraph {
    space: ProfileSpace,
    adjacency: Vec<Vec<usize>>,
    potential_ties: bool,
}

impl DeviationGraph {
    /// Graph with explicit arcs, mainly for tests and tooling.
    pub fn from_edges(space: ProfileSpace, edges: &[(usize, usize)]) -> Result<Self> {
        let n = space.ensure_within(u64::MAX, "graph")?;
        let mut adjacency = vec![Vec::new(); n];
        for &(src, dst) in edges {
            if src >= n || dst >= n {
                return arg(format!("edge {src}->{dst} out of range for {n} vertices"));
            }
            if src == dst {
                return arg(format!("self-loop at vertex {src}"));
            }
            let d = space.profile_at(dst);
            let s = space.profile_at(src);
            let differing = s.actions().iter().zip(d.actions()).filter(|(x, y)| x != y).count();
            if differing != 1 {
                return arg(format!("edge {src}->{dst} is not a unilateral deviation"));
            }
            adjacency[src].push(dst);
        }
        for row in &mut adjacency {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self {
            space,
            adjacency,
            potential_ties: false,
        })
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, n: usize) -> &[usize] {
        &self.adjacency[n]
    }

    pub fn has_edge(&self, n: usize, m: usize) -> bool {
        self.adjacency[n].binary_search(&m).is_ok()
    }

    /// True when two profiles differing in one coordinate share a potential
    /// value. Sink analysis assumes this does not happen.
    pub fn has_potential_ties(&self) -> bool {
        self.potential_ties
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(n, row)| row.iter().map(move |&m| (n, m)))
    }

    /// Row `n` of the dense 0/1 matrix `B`.
    pub fn dense_row(&self, n: usize) -> Vec<u8> {
        let mut row = vec![0u8; self.vertex_count()];
        for &m in &self.adjacency[n] {
            row[m] = 1;
        }
        row
    }

    /// Indices of vertices with zero out-degree.
    pub fn sink_indices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&n| self.adjacency[n].is_empty())
            .collect()
    }

    /// Profiles of all sink vertices, in lexicographic order.
    pub fn sinks(&self) -> Vec<ActionProfile> {
        self.sink_indices()
            .into_iter()
            .map(|n| self.space.profile_at(n))
            .collect()
    }

    /// Sinks at which every player of `game` is satisfied.
    pub fn satisfied_sinks(&self, game: &SatisfactionGame) -> Vec<ActionProfile> {
        self.sinks()
            .into_iter()
            .filter(|a| game.all_sat(a.actions()))
            .collect()
    }

    /// Edge list, header `src_index,dst_index`.
    pub fn write_edge_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "src_index,dst_index")?;
        for (n, m) in self.edges() {
            writeln!(w, "{n},{m}")?;
        }
        Ok(())
    }

    /// Dense matrix `B` in row-major CSV without a header.
    pub fn write_dense_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut line = String::with_capacity(2 * self.vertex_count());
        for n in 0..self.vertex_count() {
            line.clear();
            for (i, b) in self.dense_row(n).into_iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push(if b == 1 { '1' } else { '0' });
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Builds the deviation graph: arc `n -> m` iff the profiles differ in exactly
/// one player `k`, `m_k ∈ f_k(n_{-k})` and `phi(m) < phi(n)`.
pub fn build_deviation_graph(game: &SatisfactionGame, costs: &CostProfile) -> Result<DeviationGraph> {
    costs.validate(game.action_counts())?;
    let space = game.space().clone();
    let n = space.ensure_within(game.limits().graph_cap, "deviation graph")?;
    let phi: Vec<f64> = space
        .iter()
        .map(|a| costs.potential_unchecked(a.actions()))
        .collect();

    let rows: Vec<(Vec<usize>, bool)> = (0..n)
        .into_par_iter()
        .map(|src| {
            let mut buf = vec![0; space.num_players()];
            space.decode_into(src, &mut buf);
            let mut row = Vec::new();
            let mut tie = false;
            for k in 0..space.num_players() {
                let own = buf[k];
                for alt in 0..space.num_actions(k) {
                    if alt == own {
                        continue;
                    }
                    buf[k] = alt;
                    let dst = space.index_of(&buf);
                    if phi[dst] == phi[src] {
                        tie = true;
                    }
                    if phi[dst] < phi[src] && game.sat(k, &buf) {
                        row.push(dst);
                    }
                }
                buf[k] = own;
            }
            row.sort_unstable();
            (row, tie)
        })
        .collect();

    let potential_ties = rows.iter().any(|(_, t)| *t);
    Ok(DeviationGraph {
        space,
        adjacency: rows.into_iter().map(|(r, _)| r).collect(),
        potential_ties,
    })
}

/// Efficient SE by exhaustive search: satisfaction equilibria at which no
/// player has a strictly cheaper action inside its correspondence.
pub fn enumerate_ese_bruteforce(game: &SatisfactionGame, costs: &CostProfile) -> Result<Vec<ActionProfile>> {
    costs.validate(game.action_counts())?;
    game.profile_count()?;
    let mut out = Vec::new();
    for a in game.space().iter() {
        if !game.all_sat(a.actions()) {
            continue;
        }
        let cheapest = (0..game.num_players()).all(|k| {
            let mine = costs.costs[k][a.get(k)];
            game.satisfying_actions_unchecked(k, a.actions())
                .into_iter()
                .all(|alt| mine <= costs.costs[k][alt])
        });
        if cheapest {
            out.push(a);
        }
    }
    Ok(out)
}

/// Checks the exact constrained potential property of the cost game with
/// utilities `-c_k` against the potential `-phi`.
pub fn verify_ecpg(game: &SatisfactionGame, costs: &CostProfile) -> Result<bool> {
    costs.validate(game.action_counts())?;
    verify_ecpg_with(game, costs, |a| costs.potential_unchecked(a))
}

/// As [`verify_ecpg`] with an arbitrary candidate `phi`.
///
/// Holds iff for every `a` in the union of the correspondence graphs, every
/// player `k` and every `a'_k ∈ f_k(a_{-k})`:
/// `(-c_k(a_k)) - (-c_k(a'_k)) = (-phi(a)) - (-phi(a'_k, a_{-k}))`.
pub fn verify_ecpg_with<P>(game: &SatisfactionGame, costs: &CostProfile, phi: P) -> Result<bool>
where
    P: Fn(&[usize]) -> f64,
{
    costs.validate(game.action_counts())?;
    game.profile_count()?;
    let k_players = game.num_players();
    let mut buf = vec![0; k_players];
    for a in game.space().iter() {
        let x = a.actions();
        if !(0..k_players).any(|k| game.sat(k, x)) {
            continue;
        }
        let phi_a = phi(x);
        for k in 0..k_players {
            buf.copy_from_slice(x);
            for alt in 0..game.space().num_actions(k) {
                buf[k] = alt;
                if !game.sat(k, &buf) {
                    continue;
                }
                let phi_b = phi(&buf);
                let lhs = -costs.costs[k][x[k]] + costs.costs[k][alt];
                let rhs = -phi_a + phi_b;
                let tol = 1e-9 * (1.0 + phi_a.abs() + phi_b.abs());
                if (lhs - rhs).abs() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether the correspondence graphs `F_1, ..., F_K` are non-empty and
/// pairwise identical.
pub fn check_identical_graphs(game: &SatisfactionGame) -> Result<bool> {
    let first = game.correspondence_graph(0)?;
    if !first.iter().any(|&b| b) {
        return Ok(false);
    }
    for k in 1..game.num_players() {
        if game.correspondence_graph(k)? != first {
            return Ok(false);
        }
    }
    Ok(true)
}
