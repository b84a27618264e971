//! Generating-function counting.
//!
//! `prod_j (1 + y x^{w_j})` is expanded once, truncated below the integer
//! threshold (only losing weights are ever read), and each player is then
//! divided back out. Coefficients count subsets, so they fit in `u128` for
//! up to 127 players and the division is exact.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use super::{grand_coalition_check, ss_from_sized_swings, EngineConfig, IndexVector, SwingCounts};
use crate::error::{Error, Result};
use crate::system::{VotingSystem, WordGame};

const MAX_PLAYERS: usize = 127;
const MAX_CELLS: usize = 1 << 24;

struct Layout {
    game: WordGame,
    // coefficients kept for weights 0..len, all of them losing
    len: usize,
}

fn layout(system: &VotingSystem, sized: bool) -> Result<Layout> {
    let n = system.players();
    if n > MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            engine: "dp",
            players: n,
            cap: MAX_PLAYERS,
        });
    }
    let game = system.scale_to_integers().to_word_game("dp")?;
    let len = game.threshold.min(game.total + 1);
    let rows = if sized { n + 1 } else { 1 };
    match usize::try_from(len) {
        Ok(len) if len.saturating_mul(rows) <= MAX_CELLS => Ok(Layout { game, len }),
        _ => Err(Error::WeightsTooLarge("dp")),
    }
}

/// Whether the DP tables for `system` stay within the memory budget.
pub(crate) fn fits(system: &VotingSystem) -> bool {
    layout(system, true).is_ok()
}

fn weight_counts(layout: &Layout) -> Vec<u128> {
    let len = layout.len;
    let mut f = vec![0u128; len];
    f[0] = 1;
    for &w in &layout.game.weights {
        let w = w as usize;
        if w == 0 {
            f.iter_mut().for_each(|c| *c *= 2);
        } else {
            for x in (w..len).rev() {
                f[x] += f[x - w];
            }
        }
    }
    f
}

fn divide_out(full: &[u128], w: usize) -> Vec<u128> {
    if w == 0 {
        return full.iter().map(|c| c / 2).collect();
    }
    let mut g = full.to_vec();
    for x in w..g.len() {
        g[x] -= g[x - w];
    }
    g
}

fn sized_counts(layout: &Layout) -> Vec<u128> {
    let (n, len) = (layout.game.players(), layout.len);
    let mut f = vec![0u128; (n + 1) * len];
    f[0] = 1;
    for (added, &w) in layout.game.weights.iter().enumerate() {
        let w = w as usize;
        for s in (0..=added).rev() {
            for x in (w..len).rev() {
                let from = f[s * len + x - w];
                f[(s + 1) * len + x] += from;
            }
        }
    }
    f
}

fn divide_out_sized(full: &[u128], len: usize, w: usize) -> Vec<u128> {
    let mut g = full.to_vec();
    let rows = g.len() / len;
    for s in 1..rows {
        for x in w..len {
            let prev = g[(s - 1) * len + x - w];
            g[s * len + x] -= prev;
        }
    }
    g
}

/// Losing weights `x` that `w` lifts to winning.
fn swing_window(game: &WordGame, len: usize, w: u64) -> std::ops::Range<usize> {
    let start = game.threshold.saturating_sub(w) as usize;
    start.min(len)..len
}

pub fn banzhaf_dp(system: &VotingSystem, cfg: &EngineConfig) -> Result<(SwingCounts, IndexVector)> {
    let layout = layout(system, false)?;
    let swings = cfg.run(|| {
        let full = weight_counts(&layout);
        layout
            .game
            .weights
            .par_iter()
            .map(|&w| {
                let others = divide_out(&full, w as usize);
                let window = swing_window(&layout.game, layout.len, w);
                BigUint::from(others[window].iter().sum::<u128>())
            })
            .collect::<Vec<_>>()
    })?;
    let counts = SwingCounts::new(swings);
    let index = counts.to_index()?;
    Ok((counts, index))
}

pub fn ss_dp(system: &VotingSystem, cfg: &EngineConfig) -> Result<IndexVector> {
    grand_coalition_check(system)?;
    let layout = layout(system, true)?;
    let n = layout.game.players();
    let len = layout.len;
    let sized = cfg.run(|| {
        let full = sized_counts(&layout);
        layout
            .game
            .weights
            .par_iter()
            .map(|&w| {
                let others = divide_out_sized(&full, len, w as usize);
                let window = swing_window(&layout.game, len, w);
                (0..n)
                    .map(|s| {
                        BigUint::from(
                            others[s * len..(s + 1) * len][window.clone()]
                                .iter()
                                .sum::<u128>(),
                        )
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    })?;
    Ok(ss_from_sized_swings(n, sized.into_iter()))
}

pub fn count_winning_dp(system: &VotingSystem) -> Result<BigUint> {
    let layout = layout(system, false)?;
    let losing: u128 = weight_counts(&layout).iter().sum();
    let all = BigUint::one() << layout.game.players();
    Ok(all - BigUint::from(losing))
}
