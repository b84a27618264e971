//! Weighted voting systems, coalitions and winning tests.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, half, lcm_of_denominators, serde_text, Rational};

/// How a coalition's weight is compared against the quota.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotaMode {
    /// Winning iff weight >= quota.
    MeetsOrExceeds,
    /// Winning iff weight > quota.
    StrictlyExceeds,
}

impl QuotaMode {
    pub fn passes<T: PartialOrd>(self, weight: &T, quota: &T) -> bool {
        match self {
            QuotaMode::MeetsOrExceeds => weight >= quota,
            QuotaMode::StrictlyExceeds => weight > quota,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QuotaMode::MeetsOrExceeds => "ge",
            QuotaMode::StrictlyExceeds => "gt",
        }
    }
}

impl FromStr for QuotaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ge" | "meets" | "meets_or_exceeds" => Ok(QuotaMode::MeetsOrExceeds),
            "gt" | "strict" | "strictly_exceeds" => Ok(QuotaMode::StrictlyExceeds),
            other => Err(Error::InvalidInput(format!("unknown quota mode {other:?}"))),
        }
    }
}

/// A subset of player positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Coalition {
    members: Vec<usize>,
}

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Coalition { members }
    }

    pub fn empty() -> Self {
        Coalition::default()
    }

    pub fn grand(players: usize) -> Self {
        Coalition::new(0..players)
    }

    /// Bit `i` of `mask` set means player `i` is a member.
    pub fn from_mask(mask: u128) -> Self {
        Coalition {
            members: (0..128).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, player: usize) -> bool {
        self.members.binary_search(&player).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn without(&self, player: usize) -> Coalition {
        Coalition {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&m| m != player)
                .collect(),
        }
    }
}

/// Quota, comparison mode and an ordered weight list. Player `i` is position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VotingSystem {
    #[serde(with = "serde_text")]
    quota: Rational,
    mode: QuotaMode,
    #[serde(with = "serde_text::vec")]
    weights: Vec<Rational>,
}

impl VotingSystem {
    pub fn new(quota: Rational, mode: QuotaMode, weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSystem(
                "at least one player is required".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidSystem(format!(
                "negative weight {}",
                format_rational(w)
            )));
        }
        if !quota.is_positive() {
            return Err(Error::InvalidSystem(format!(
                "quota must be positive, got {}",
                format_rational(&quota)
            )));
        }
        Ok(VotingSystem {
            quota,
            mode,
            weights,
        })
    }

    /// `[1/2 strict; weights]`, the form iterated by the index map.
    pub fn strict_majority(weights: Vec<Rational>) -> Result<Self> {
        VotingSystem::new(half(), QuotaMode::StrictlyExceeds, weights)
    }

    pub fn quota(&self) -> &Rational {
        &self.quota
    }

    pub fn mode(&self) -> QuotaMode {
        self.mode
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn players(&self) -> usize {
        self.weights.len()
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    fn check(&self, coalition: &Coalition) -> Result<()> {
        match coalition.members().last() {
            Some(&p) if p >= self.players() => Err(Error::InvalidCoalition {
                position: p,
                players: self.players(),
            }),
            _ => Ok(()),
        }
    }

    pub fn coalition_weight(&self, coalition: &Coalition) -> Result<Rational> {
        self.check(coalition)?;
        Ok(coalition
            .members()
            .iter()
            .fold(Rational::zero(), |acc, &i| acc + &self.weights[i]))
    }

    pub fn passes(&self, weight: &Rational) -> bool {
        self.mode.passes(weight, &self.quota)
    }

    pub fn is_winning(&self, coalition: &Coalition) -> Result<bool> {
        Ok(self.passes(&self.coalition_weight(coalition)?))
    }

    /// Integer form: weights and quota multiplied by `2 * L`, `L` the lcm of all
    /// denominators (a factor 2 in the quota's denominator is absorbed by the
    /// doubling). Same winning coalitions as `self`.
    pub fn scale_to_integers(&self) -> ScaledSystem {
        let quota_denom = self.quota.denom() / self.quota.denom().gcd(&BigInt::from(2));
        let lcm = lcm_of_denominators(&self.weights).lcm(&quota_denom);
        let factor = Rational::from_integer(lcm * 2);
        let to_int = |r: &Rational| {
            let scaled = r * &factor;
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        };
        ScaledSystem {
            weights: self.weights.iter().map(to_int).collect(),
            doubled_quota: to_int(&self.quota),
            mode: self.mode,
        }
    }

    pub fn with_weights_permuted(&self, order: &[usize]) -> VotingSystem {
        VotingSystem {
            quota: self.quota.clone(),
            mode: self.mode,
            weights: order.iter().map(|&i| self.weights[i].clone()).collect(),
        }
    }
}

impl fmt::Display for VotingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.mode {
            QuotaMode::MeetsOrExceeds => "",
            QuotaMode::StrictlyExceeds => "_s",
        };
        write!(f, "[{}{}:", format_rational(&self.quota), sym)?;
        for (i, w) in self.weights.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{}", format_rational(w))?;
        }
        write!(f, "]")
    }
}

/// Integer-weighted equivalent of a [`VotingSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSystem {
    pub weights: Vec<BigInt>,
    pub doubled_quota: BigInt,
    pub mode: QuotaMode,
}

impl ScaledSystem {
    pub fn is_winning_weight(&self, weight: &BigInt) -> bool {
        self.mode.passes(weight, &self.doubled_quota)
    }

    /// Machine-word form used by the counting kernels: a coalition wins iff its
    /// weight is at least `threshold`.
    pub fn to_word_game(&self, engine: &'static str) -> Result<WordGame> {
        let total: BigInt = self.weights.iter().sum();
        let threshold = match self.mode {
            QuotaMode::MeetsOrExceeds => self.doubled_quota.clone(),
            QuotaMode::StrictlyExceeds => &self.doubled_quota + BigInt::one(),
        };
        // Keeping total + max weight inside u64 lets kernels add freely.
        let limit = BigInt::from(u64::MAX / 4);
        if total > limit || threshold > limit {
            return Err(Error::WeightsTooLarge(engine));
        }
        Ok(WordGame {
            weights: self.weights.iter().map(|w| w.to_u64().unwrap()).collect(),
            threshold: threshold.to_u64().unwrap(),
            total: total.to_u64().unwrap(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordGame {
    pub weights: Vec<u64>,
    pub threshold: u64,
    pub total: u64,
}

impl WordGame {
    pub fn players(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn wins(&self, weight: u64) -> bool {
        weight >= self.threshold
    }
}

/// Divides every weight by the total so the result sums to exactly 1.
pub fn normalize(weights: &[Rational]) -> Result<Vec<Rational>> {
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::InvalidInput(format!(
            "negative weight {}",
            format_rational(w)
        )));
    }
    let total = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
    if total.is_zero() {
        return Err(Error::DegenerateSystem("all weights are zero".into()));
    }
    Ok(weights.iter().map(|w| w / &total).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    Banzhaf,
    ShapleyShubik,
}

impl IndexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexKind::Banzhaf => "banzhaf",
            IndexKind::ShapleyShubik => "shapley_shubik",
        }
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "banzhaf" | "bb" | "bz" => Ok(IndexKind::Banzhaf),
            "ss" | "shapley_shubik" | "shapley-shubik" => Ok(IndexKind::ShapleyShubik),
            other => Err(Error::InvalidInput(format!("unknown index kind {other:?}"))),
        }
    }
}

/// Per-player power indices of one kind; entries lie in `[0, 1]` and sum to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexVector {
    pub kind: IndexKind,
    #[serde(with = "serde_text::vec")]
    pub values: Vec<Rational>,
}

impl IndexVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn is_well_formed(&self) -> bool {
        self.sum().is_one()
            && self
                .values
                .iter()
                .all(|v| !v.is_negative() && *v <= Rational::one())
    }
}
