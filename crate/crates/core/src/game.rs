//! Finite games in satisfaction form and their pure-strategy equilibrium sets.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{ActionProfile, ProfileSpace};

/// Default cap on the number of profiles any exhaustive pass may visit.
pub const DEFAULT_PROFILE_CAP: u64 = 10_000_000;
/// Default cap on the vertex count of pairwise structures (deviation graph,
/// lattice monotonicity check).
pub const DEFAULT_GRAPH_CAP: u64 = 10_000;

/// Enumeration caps carried by a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub profile_cap: u64,
    pub graph_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            profile_cap: DEFAULT_PROFILE_CAP,
            graph_cap: DEFAULT_GRAPH_CAP,
        }
    }
}

type Predicate = dyn Fn(usize, &[usize]) -> bool + Send + Sync;

#[derive(Clone)]
enum Oracle {
    /// `table[k * |A| + index(a)]`.
    Table(Arc<[bool]>),
    Predicate(Arc<Predicate>),
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Oracle::Table(t) => write!(f, "Table({} entries)", t.len()),
            Oracle::Predicate(_) => write!(f, "Predicate"),
        }
    }
}

/// A finite game in satisfaction form: players, finite action sets and for
/// each player a correspondence `f_k` given as the membership oracle
/// `a_k ∈ f_k(a_{-k})`.
///
/// Games are immutable once built and cheap to clone.
#[derive(Debug, Clone)]
pub struct SatisfactionGame {
    space: ProfileSpace,
    oracle: Oracle,
    limits: Limits,
}

impl SatisfactionGame {
    /// Explicit form from a player-major table: `table[k]` lists the
    /// satisfaction bit of player `k` for every profile in lexicographic order.
    pub fn from_table(action_counts: Vec<usize>, table: Vec<Vec<bool>>) -> Result<Self> {
        let space = ProfileSpace::new(action_counts)?;
        let k = space.num_players();
        if table.len() != k {
            return Err(Error::Dimension(format!(
                "satisfaction table has {} player rows, expected {k}",
                table.len()
            )));
        }
        let size = space.ensure_within(DEFAULT_PROFILE_CAP, "satisfaction table")?;
        for (player, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Dimension(format!(
                    "satisfaction row for player {player} has {} entries, expected {size}",
                    row.len()
                )));
            }
        }
        let flat: Vec<bool> = table.into_iter().flatten().collect();
        Ok(Self {
            space,
            oracle: Oracle::Table(flat.into()),
            limits: Limits::default(),
        })
    }

    /// Generated form: `pred(k, a)` decides `a_k ∈ f_k(a_{-k})`. The predicate
    /// must be deterministic.
    pub fn from_fn<F>(action_counts: Vec<usize>, pred: F) -> Result<Self>
    where
        F: Fn(usize, &[usize]) -> bool + Send + Sync + 'static,
    {
        Ok(Self {
            space: ProfileSpace::new(action_counts)?,
            oracle: Oracle::Predicate(Arc::new(pred)),
            limits: Limits::default(),
        })
    }

    /// Game whose oracle answers `value` everywhere.
    pub fn constant(action_counts: Vec<usize>, value: bool) -> Result<Self> {
        Self::from_fn(action_counts, move |_, _| value)
    }

    /// The two-player, two-action example with a unique SE at `(0,1)` and
    /// binary-utility Nash equilibria `(1,0)` and `(0,1)`.
    ///
    /// Utilities (player 1 rows, player 2 columns):
    /// `[(0,0) (1,1); (1,0) (0,0)]`.
    pub fn two_by_two_example() -> Self {
        Self::from_table(
            vec![2, 2],
            vec![
                vec![false, true, true, false],
                vec![false, true, false, false],
            ],
        )
        .expect("static table is well formed")
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn num_players(&self) -> usize {
        self.space.num_players()
    }

    pub fn action_counts(&self) -> &[usize] {
        self.space.action_counts()
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.oracle, Oracle::Table(_))
    }

    /// Number of profiles, checked against the profile cap.
    pub fn profile_count(&self) -> Result<usize> {
        self.space
            .ensure_within(self.limits.profile_cap, "profile space")
    }

    /// Oracle lookup without bounds checks on `k` or `actions`.
    #[inline]
    pub(crate) fn sat(&self, k: usize, actions: &[usize]) -> bool {
        match &self.oracle {
            Oracle::Table(t) => {
                let size = self.space.size() as usize;
                t[k * size + self.space.index_of(actions)]
            }
            Oracle::Predicate(p) => p(k, actions),
        }
    }

    #[inline]
    pub(crate) fn all_sat(&self, actions: &[usize]) -> bool {
        (0..self.num_players()).all(|k| self.sat(k, actions))
    }

    /// Whether `a_k ∈ f_k(a_{-k})`.
    pub fn is_satisfied(&self, k: usize, a: &ActionProfile) -> Result<bool> {
        self.space.check_player(k)?;
        self.space.check_profile(a.actions())?;
        Ok(self.sat(k, a.actions()))
    }

    /// Whether every player is satisfied at `a`.
    pub fn is_se(&self, a: &ActionProfile) -> Result<bool> {
        self.space.check_profile(a.actions())?;
        Ok(self.all_sat(a.actions()))
    }

    /// Utility `1{a_k ∈ f_k(a_{-k})}` of the binary normal-form reading.
    pub fn binary_utility(&self, k: usize, a: &ActionProfile) -> Result<u8> {
        Ok(self.is_satisfied(k, a)? as u8)
    }

    /// All pure satisfaction equilibria in lexicographic order.
    pub fn enumerate_se(&self) -> Result<Vec<ActionProfile>> {
        self.profile_count()?;
        Ok(self.space.iter().filter(|a| self.all_sat(a.actions())).collect())
    }

    /// Pure Nash equilibria of the normal-form game with binary utilities.
    ///
    /// An unsatisfied player has a profitable deviation exactly when
    /// `f_k(a_{-k})` is non-empty, so a profile is an NE iff every unsatisfied
    /// player faces an empty correspondence.
    pub fn enumerate_ne_binary(&self) -> Result<Vec<ActionProfile>> {
        self.profile_count()?;
        let mut buf = vec![0; self.num_players()];
        Ok(self
            .space
            .iter()
            .filter(|a| {
                (0..self.num_players()).all(|k| {
                    if self.sat(k, a.actions()) {
                        return true;
                    }
                    buf.copy_from_slice(a.actions());
                    !(0..self.space.num_actions(k)).any(|alt| {
                        buf[k] = alt;
                        self.sat(k, &buf)
                    })
                })
            })
            .collect())
    }

    /// `f_k(a_{-k})` as a sorted list of action indices. Player `k`'s own
    /// entry in `a` is ignored.
    pub fn satisfying_actions(&self, k: usize, a: &ActionProfile) -> Result<Vec<usize>> {
        self.space.check_player(k)?;
        self.space.check_profile(a.actions())?;
        Ok(self.satisfying_actions_unchecked(k, a.actions()))
    }

    pub(crate) fn satisfying_actions_unchecked(&self, k: usize, actions: &[usize]) -> Vec<usize> {
        let mut buf = actions.to_vec();
        (0..self.space.num_actions(k))
            .filter(|&alt| {
                buf[k] = alt;
                self.sat(k, &buf)
            })
            .collect()
    }

    /// Visits every opponent profile of player `k`, passing a full profile
    /// buffer whose entry `k` is `own`.
    pub(crate) fn for_each_opponent_profile(
        &self,
        k: usize,
        own: usize,
        mut visit: impl FnMut(&[usize]) -> bool,
    ) {
        let counts = self.space.action_counts();
        let mut buf = vec![0; counts.len()];
        buf[k] = own;
        loop {
            if !visit(&buf) {
                return;
            }
            let mut advanced = false;
            for j in (0..counts.len()).rev() {
                if j == k {
                    continue;
                }
                buf[j] += 1;
                if buf[j] < counts[j] {
                    advanced = true;
                    break;
                }
                buf[j] = 0;
            }
            if !advanced {
                return;
            }
        }
    }

    /// Least-index action of player `k` that satisfies it against every
    /// opponent profile, if any.
    pub fn find_clipping_action(&self, k: usize) -> Result<Option<usize>> {
        self.space.check_player(k)?;
        self.profile_count()?;
        for own in 0..self.space.num_actions(k) {
            let mut always = true;
            self.for_each_opponent_profile(k, own, |buf| {
                always = self.sat(k, buf);
                always
            });
            if always {
                return Ok(Some(own));
            }
        }
        Ok(None)
    }

    /// Membership bitmap of `F_k = {a : a_k ∈ f_k(a_{-k})}` over all
    /// profiles in lexicographic order.
    pub fn correspondence_graph(&self, k: usize) -> Result<Vec<bool>> {
        self.space.check_player(k)?;
        self.profile_count()?;
        Ok(self.space.iter().map(|a| self.sat(k, a.actions())).collect())
    }

    /// Whether `f_k(a_{-k})` is non-empty for every player and opponent profile.
    pub fn correspondences_nonempty(&self) -> Result<bool> {
        self.profile_count()?;
        for k in 0..self.num_players() {
            let mut all = true;
            self.for_each_opponent_profile(k, 0, |buf| {
                let mut probe = buf.to_vec();
                all = (0..self.space.num_actions(k)).any(|alt| {
                    probe[k] = alt;
                    self.sat(k, &probe)
                });
                all
            });
            if !all {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Explicit copy of this game with the oracle tabulated.
    pub fn materialize(&self) -> Result<Self> {
        if self.is_explicit() {
            return Ok(self.clone());
        }
        let size = self.profile_count()?;
        let k = self.num_players();
        let mut flat = Vec::with_capacity(k * size);
        for player in 0..k {
            flat.extend(self.space.iter().map(|a| self.sat(player, a.actions())));
        }
        Ok(Self {
            space: self.space.clone(),
            oracle: Oracle::Table(flat.into()),
            limits: self.limits,
        })
    }

    /// Checks the complete-lattice existence conditions under the product of
    /// the given per-player total orders.
    ///
    /// `orders[k]` lists player `k`'s actions from least to greatest.
    pub fn check_lattice_conditions(&self, orders: &[Vec<usize>]) -> Result<LatticeReport> {
        let k_players = self.num_players();
        if orders.len() != k_players {
            return Err(Error::Argument(format!(
                "expected {k_players} orders, got {}",
                orders.len()
            )));
        }
        let mut rank = Vec::with_capacity(k_players);
        for (k, order) in orders.iter().enumerate() {
            let n = self.space.num_actions(k);
            let mut r = vec![usize::MAX; n];
            if order.len() != n {
                return Err(Error::Argument(format!(
                    "order for player {k} has {} entries, expected {n}",
                    order.len()
                )));
            }
            for (pos, &a) in order.iter().enumerate() {
                if a >= n || r[a] != usize::MAX {
                    return Err(Error::Argument(format!(
                        "order for player {k} is not a permutation of 0..{n}"
                    )));
                }
                r[a] = pos;
            }
            rank.push(r);
        }

        let size = self
            .space
            .ensure_within(self.limits.graph_cap, "lattice check")?;

        // Per profile and player: (min rank, max rank) of f_k(a_{-k}).
        let mut bounds: Vec<Vec<Option<(usize, usize)>>> = Vec::with_capacity(size);
        let mut nonempty_ok = true;
        for a in self.space.iter() {
            let row: Vec<_> = (0..k_players)
                .map(|k| {
                    let sat = self.satisfying_actions_unchecked(k, a.actions());
                    let lo = sat.iter().map(|&x| rank[k][x]).min()?;
                    let hi = sat.iter().map(|&x| rank[k][x]).max()?;
                    Some((lo, hi))
                })
                .collect();
            if row.iter().any(Option::is_none) {
                nonempty_ok = false;
            }
            bounds.push(row);
        }

        let profiles: Vec<Vec<usize>> = self
            .space
            .iter()
            .map(|a| {
                a.actions()
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| rank[k][x])
                    .collect()
            })
            .collect();
        let precedes = |x: &[usize], y: &[usize]| x.iter().zip(y).all(|(a, b)| a <= b);

        let mut monotone_ok = true;
        'outer: for i in 0..size {
            if bounds[i].iter().any(Option::is_none) {
                continue;
            }
            for j in 0..size {
                if !precedes(&profiles[i], &profiles[j]) {
                    continue;
                }
                if bounds[j].iter().any(Option::is_none) {
                    continue;
                }
                let ordered = (0..k_players).all(|k| {
                    let (_, hi) = bounds[i][k].unwrap();
                    let (lo, _) = bounds[j][k].unwrap();
                    hi <= lo
                });
                if !ordered {
                    monotone_ok = false;
                    break 'outer;
                }
            }
        }

        Ok(LatticeReport {
            lattice_ok: true,
            nonempty_ok,
            monotone_ok,
        })
    }

    /// JSON document form; generated games are tabulated first.
    pub fn to_document(&self) -> Result<GameDocument> {
        let explicit = self.materialize()?;
        let size = explicit.space.size() as usize;
        let table = match &explicit.oracle {
            Oracle::Table(t) => t,
            Oracle::Predicate(_) => unreachable!("materialize returns a table"),
        };
        Ok(GameDocument {
            players: self.num_players(),
            actions: self.action_counts().to_vec(),
            satisfaction: table
                .chunks(size)
                .map(|row| row.iter().map(|&b| Bit(b)).collect())
                .collect(),
        })
    }

    pub fn from_document(doc: GameDocument) -> Result<Self> {
        if doc.players != doc.actions.len() {
            return Err(Error::Parse(format!(
                "field \"players\" is {} but \"actions\" lists {} players",
                doc.players,
                doc.actions.len()
            )));
        }
        let table = doc
            .satisfaction
            .into_iter()
            .map(|row| row.into_iter().map(|b| b.0).collect())
            .collect();
        Self::from_table(doc.actions, table).map_err(|e| match e {
            Error::Dimension(m) => Error::Parse(format!("field \"satisfaction\": {m}")),
            other => other,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.to_document()?).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GameDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(doc)
    }
}

/// Result of the complete-lattice existence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    /// Always true: a finite product of total orders is a complete lattice.
    pub lattice_ok: bool,
    /// `F(a)` is non-empty for every profile.
    pub nonempty_ok: bool,
    /// `a ⪯ a'` implies `b ⪯ b'` for all `b ∈ F(a)`, `b' ∈ F(a')`.
    pub monotone_ok: bool,
}

impl LatticeReport {
    pub fn all(&self) -> bool {
        self.lattice_ok && self.nonempty_ok && self.monotone_ok
    }
}

/// Serialized explicit game. `satisfaction[k]` is player `k`'s bit for each
/// profile in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub players: usize,
    pub actions: Vec<usize>,
    pub satisfaction: Vec<Vec<Bit>>,
}

/// Satisfaction bit; reads `true`/`false` or `1`/`0`, writes booleans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bit(pub bool);

impl Serialize for Bit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_bool(self.0)
    }
}

impl<'de> Deserialize<'de> for Bit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            B(bool),
            N(u64),
        }
        match Raw::deserialize(d)? {
            Raw::B(b) => Ok(Bit(b)),
            Raw::N(0) => Ok(Bit(false)),
            Raw::N(1) => Ok(Bit(true)),
            Raw::N(n) => Err(serde::de::Error::custom(format!(
                "satisfaction entry must be 0, 1, true or false, got {n}"
            ))),
        }
    }
}
