//! Exact Banzhaf and Shapley-Shubik indices.
//!
//! Three independent routes are provided:
//!
//! * [`ss_enum_perms`] walks all `n!` orderings with rational arithmetic. It
//!   is the oracle for everything else and is limited to 9 players.
//! * [`banzhaf_enum`] / [`ss_enum_subsets`] stream all `2^n` coalitions of the
//!   integer-scaled game.
//! * [`banzhaf_dp`] / [`ss_dp`] count coalitions by weight (and size) with the
//!   generating function `prod_j (1 + y x^{w_j})`, then divide out each player
//!   in turn. Cost is pseudo-polynomial in the scaled quota.
//!
//! The pivot of an ordering is the first player whose arrival makes the
//! prefix winning under the system's own [`QuotaMode`](crate::QuotaMode).

mod dp;
mod enumerate;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::system::{IndexKind, IndexVector, VotingSystem};

pub use dp::{banzhaf_dp, count_winning_dp, ss_dp};
pub use enumerate::{banzhaf_enum, count_winning_enum, ss_enum_perms, ss_enum_subsets};

pub const DEFAULT_ENUM_CAP: usize = 24;
/// Orderings are only walked for systems this small.
pub const PERMUTATION_CAP: usize = 9;

/// Tuning knobs shared by all engines. Results never depend on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Largest player count accepted by the subset-enumeration engine.
    pub enum_cap: usize,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            enum_cap: DEFAULT_ENUM_CAP,
            workers: None,
        }
    }
}

impl EngineConfig {
    pub fn with_workers(workers: usize) -> Self {
        EngineConfig {
            workers: Some(workers),
            ..Default::default()
        }
    }

    pub(crate) fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(job()),
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map(|pool| pool.install(job))
                .map_err(|e| Error::WorkerPool(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Enumeration,
    Dp,
    /// DP when the scaled game fits its table, enumeration otherwise.
    Auto,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "enum" | "enumeration" => Ok(Engine::Enumeration),
            "dp" => Ok(Engine::Dp),
            "auto" => Ok(Engine::Auto),
            other => Err(Error::InvalidInput(format!("unknown engine {other:?}"))),
        }
    }
}

/// Critical-player counts per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwingCounts {
    pub per_player: Vec<BigUint>,
    pub total: BigUint,
}

impl SwingCounts {
    pub(crate) fn new(per_player: Vec<BigUint>) -> Self {
        let total = per_player.iter().sum();
        SwingCounts { per_player, total }
    }

    pub fn to_index(&self) -> Result<IndexVector> {
        if self.total.is_zero() {
            return Err(Error::DegenerateSystem("no player is ever critical".into()));
        }
        Ok(IndexVector {
            kind: IndexKind::Banzhaf,
            values: ratios(&self.per_player, &self.total),
        })
    }
}

/// Pivotal-ordering counts per player; `total` is `n!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotCounts {
    pub per_player: Vec<BigUint>,
    pub total: BigUint,
}

impl PivotCounts {
    pub fn to_index(&self) -> IndexVector {
        IndexVector {
            kind: IndexKind::ShapleyShubik,
            values: ratios(&self.per_player, &self.total),
        }
    }
}

fn ratios(numerators: &[BigUint], denom: &BigUint) -> Vec<Rational> {
    let denom = BigInt::from(denom.clone());
    numerators
        .iter()
        .map(|c| Rational::new(BigInt::from(c.clone()), denom.clone()))
        .collect()
}

pub(crate) fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for i in 1..=n {
        let next = &out[i - 1] * BigUint::from(i);
        out.push(next);
    }
    out
}

/// Turns per-size swing counts into Shapley-Shubik values:
/// `sum_s count[s] * s! (n-1-s)! / n!`.
pub(crate) fn ss_from_sized_swings(
    players: usize,
    sized: impl Iterator<Item = Vec<BigUint>>,
) -> IndexVector {
    let fact = factorials(players);
    let per_player: Vec<BigUint> = sized
        .map(|by_size| {
            by_size
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| c * &fact[s] * &fact[players - 1 - s])
                .sum()
        })
        .collect();
    PivotCounts {
        per_player,
        total: fact[players].clone(),
    }
    .to_index()
}

pub(crate) fn grand_coalition_check(system: &VotingSystem) -> Result<()> {
    if system.passes(&system.total_weight()) {
        Ok(())
    } else {
        Err(Error::DegenerateSystem(
            "the grand coalition does not reach the quota".into(),
        ))
    }
}

fn use_dp(system: &VotingSystem, engine: Engine, cfg: &EngineConfig) -> bool {
    match engine {
        Engine::Dp => true,
        Engine::Enumeration => false,
        Engine::Auto => dp::fits(system) || system.players() > cfg.enum_cap,
    }
}

pub fn banzhaf(
    system: &VotingSystem,
    engine: Engine,
    cfg: &EngineConfig,
) -> Result<(SwingCounts, IndexVector)> {
    if use_dp(system, engine, cfg) {
        banzhaf_dp(system, cfg)
    } else {
        banzhaf_enum(system, cfg)
    }
}

pub fn shapley_shubik(
    system: &VotingSystem,
    engine: Engine,
    cfg: &EngineConfig,
) -> Result<IndexVector> {
    if use_dp(system, engine, cfg) {
        ss_dp(system, cfg)
    } else {
        ss_enum_subsets(system, cfg)
    }
}

pub fn index(
    system: &VotingSystem,
    kind: IndexKind,
    engine: Engine,
    cfg: &EngineConfig,
) -> Result<IndexVector> {
    match kind {
        IndexKind::Banzhaf => banzhaf(system, engine, cfg).map(|(_, v)| v),
        IndexKind::ShapleyShubik => shapley_shubik(system, engine, cfg),
    }
}

/// Number of winning coalitions, counting the empty one among the `2^n`.
pub fn count_winning(system: &VotingSystem, cfg: &EngineConfig) -> Result<BigUint> {
    if dp::fits(system) || system.players() > cfg.enum_cap {
        count_winning_dp(system)
    } else {
        count_winning_enum(system, cfg)
    }
}

#[cfg(test)]
mod tests;
