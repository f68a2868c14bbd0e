//! Fixtures shared by the benchmarks.

use sateq_core::SatisfactionGame;

/// Deterministic pseudo-random satisfaction game with `n` actions per player.
pub fn hashed_game(players: usize, n: usize, density_percent: u64) -> SatisfactionGame {
    SatisfactionGame::from_fn(vec![n; players], move |k, a| {
        let mut h = 0xcbf2_9ce4_8422_2325u64 ^ k as u64;
        for &x in a {
            h = (h ^ x as u64).wrapping_mul(0x0100_0000_01b3);
        }
        h % 100 < density_percent
    })
    .expect("valid action counts")
}
