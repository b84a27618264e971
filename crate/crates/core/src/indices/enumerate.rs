use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use super::{
    factorials, grand_coalition_check, ss_from_sized_swings, EngineConfig, IndexVector,
    PivotCounts, SwingCounts, PERMUTATION_CAP,
};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::system::{VotingSystem, WordGame};

// Masks are u64 and one bit is kept spare.
const MASK_BITS: usize = 63;
const CHUNK_BITS: usize = 12;

struct Tally {
    swings: Vec<u64>,
    // swings[i] split by the size of the coalition without i: sized[i * n + s]
    sized: Vec<u64>,
}

impl Tally {
    fn zero(n: usize, sized: bool) -> Self {
        Tally {
            swings: vec![0; n],
            sized: if sized { vec![0; n * n] } else { Vec::new() },
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.swings.iter_mut().zip(other.swings) {
            *a += b;
        }
        for (a, b) in self.sized.iter_mut().zip(other.sized) {
            *a += b;
        }
        self
    }
}

fn word_game(system: &VotingSystem, cfg: &EngineConfig) -> Result<WordGame> {
    let cap = cfg.enum_cap.min(MASK_BITS);
    if system.players() > cap {
        return Err(Error::TooManyPlayers {
            engine: "enumeration",
            players: system.players(),
            cap,
        });
    }
    system.scale_to_integers().to_word_game("enumeration")
}

#[inline]
fn mask_weight(weights: &[u64], mut mask: u64) -> u64 {
    let mut total = 0;
    while mask != 0 {
        total += weights[mask.trailing_zeros() as usize];
        mask &= mask - 1;
    }
    total
}

fn tally_range(game: &WordGame, masks: std::ops::Range<u64>, sized: bool) -> Tally {
    let n = game.players();
    let mut tally = Tally::zero(n, sized);
    for mask in masks {
        let weight = mask_weight(&game.weights, mask);
        if !game.wins(weight) {
            continue;
        }
        let others = mask.count_ones() as usize - 1;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !game.wins(weight - game.weights[i]) {
                tally.swings[i] += 1;
                if sized {
                    tally.sized[i * n + others] += 1;
                }
            }
        }
    }
    tally
}

fn tally(game: &WordGame, sized: bool) -> Tally {
    let n = game.players();
    let space = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n);
    (0..space / chunk)
        .into_par_iter()
        .map(|c| tally_range(game, c * chunk..(c + 1) * chunk, sized))
        .reduce(|| Tally::zero(n, sized), Tally::merge)
}

/// Banzhaf index by streaming all `2^n` coalitions.
pub fn banzhaf_enum(
    system: &VotingSystem,
    cfg: &EngineConfig,
) -> Result<(SwingCounts, IndexVector)> {
    let game = word_game(system, cfg)?;
    let tally = cfg.run(|| tally(&game, false))?;
    let counts = SwingCounts::new(tally.swings.into_iter().map(BigUint::from).collect());
    let index = counts.to_index()?;
    Ok((counts, index))
}

/// Shapley-Shubik index as a weighted sum over swings:
/// `SS_i = sum over swings (S, i) of |S|! (n-1-|S|)! / n!`.
pub fn ss_enum_subsets(system: &VotingSystem, cfg: &EngineConfig) -> Result<IndexVector> {
    let game = word_game(system, cfg)?;
    grand_coalition_check(system)?;
    let n = game.players();
    let tally = cfg.run(|| tally(&game, true))?;
    Ok(ss_from_sized_swings(
        n,
        tally
            .sized
            .chunks(n)
            .map(|row| row.iter().copied().map(BigUint::from).collect()),
    ))
}

pub fn count_winning_enum(system: &VotingSystem, cfg: &EngineConfig) -> Result<BigUint> {
    let game = word_game(system, cfg)?;
    let n = game.players();
    let space = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n);
    let count = cfg.run(|| {
        (0..space / chunk)
            .into_par_iter()
            .map(|c| {
                (c * chunk..(c + 1) * chunk)
                    .filter(|&m| game.wins(mask_weight(&game.weights, m)))
                    .count() as u64
            })
            .sum::<u64>()
    })?;
    Ok(BigUint::from(count))
}

/// Shapley-Shubik index by walking every ordering of the players, using the
/// rational weights directly. Oracle only.
pub fn ss_enum_perms(system: &VotingSystem) -> Result<(PivotCounts, IndexVector)> {
    let n = system.players();
    if n > PERMUTATION_CAP {
        return Err(Error::TooManyPlayers {
            engine: "permutation",
            players: n,
            cap: PERMUTATION_CAP,
        });
    }
    grand_coalition_check(system)?;

    let weights = system.weights();
    let mut pivots = vec![0u64; n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut visit = |order: &[usize]| {
        let mut prefix = Rational::zero();
        for &p in order {
            prefix += &weights[p];
            if system.passes(&prefix) {
                pivots[p] += 1;
                return;
            }
        }
    };

    // Heap's algorithm, iterative form.
    let mut stack = vec![0usize; n];
    visit(&order);
    let mut i = 1;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(stack[i], i);
            }
            visit(&order);
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }

    let counts = PivotCounts {
        per_player: pivots.into_iter().map(BigUint::from).collect(),
        total: factorials(n)[n].clone(),
    };
    let index = counts.to_index();
    Ok((counts, index))
}
