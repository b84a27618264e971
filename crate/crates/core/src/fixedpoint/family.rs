//! Closed forms for two-class weight vectors.
//!
//! `AB` vectors are `(a, b, ..., b)` with one type-A player and `m` type-B
//! players, `a = 1 - m b`. `AAB` vectors are `(a, a, b, ..., b)` with
//! `a = (1 - m b) / 2`. Everything is evaluated in `[1/2_s; ...]` and hinges
//! on `F = floor(1/(2b))` and on whether `1/(2b)` is an integer.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::apply_index_map;
use crate::error::{Error, Result};
use crate::indices::{self, EngineConfig};
use crate::rational::{format_rational, int, serde_text, Rational};
use crate::system::{IndexKind, VotingSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Ab,
    Aab,
}

/// The two one-parameter `AB` families: `m = 2k - 1` with
/// `b = (k - C) / (2k^2 - k)`, and `m = 2k` with `b = (k - C) / (2k^2 + k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AbFamily {
    OddM,
    EvenM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub shape: Shape,
    /// Number of type-B players.
    pub m: usize,
    pub k: i64,
    pub offset: i64,
    #[serde(with = "serde_text")]
    pub b: Rational,
    #[serde(with = "serde_text")]
    pub a: Rational,
    pub valid: bool,
    pub reason: Option<String>,
}

impl FamilySpec {
    pub fn weights(&self) -> Vec<Rational> {
        let type_a = match self.shape {
            Shape::Ab => 1,
            Shape::Aab => 2,
        };
        let mut out = vec![self.a.clone(); type_a];
        out.extend(std::iter::repeat_n(self.b.clone(), self.m));
        out
    }

    pub fn players(&self) -> usize {
        self.m + if self.shape == Shape::Ab { 1 } else { 2 }
    }
}

/// `(1/(2b), floor(1/(2b)))`.
fn half_inverse(b: &Rational) -> (Rational, BigInt) {
    let t = b.recip() / int(2);
    let floor = t.floor().to_integer();
    (t, floor)
}

fn check_ab(m: usize, b: &Rational) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidFamily("m must be at least 1".into()));
    }
    if !b.is_positive() {
        return Err(Error::InvalidFamily(format!(
            "b = {} must be positive",
            format_rational(b)
        )));
    }
    if int(m as i64) * b >= Rational::one() {
        return Err(Error::InvalidFamily(format!(
            "m*b = {} must be below 1",
            format_rational(&(int(m as i64) * b))
        )));
    }
    Ok(())
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Shapley-Shubik power of the type-A player in `[1/2_s; a, b x m]`.
///
/// A is pivotal when `p` type-B players precede it with `m - 1/(2b) < p <= 1/(2b)`,
/// each `p` in `0..=m` accounting for `m!` of the `(m+1)!` orderings. Away from
/// the clipping at `0` and `m` this is `(2F - m + 1) / (m + 1)` for non-integer
/// `1/(2b)` and `(1 - m b) / (b (m + 1))` for integer `1/(2b)`.
pub fn ab_ss_power_of_a(m: usize, b: &Rational) -> Result<Rational> {
    check_ab(m, b)?;
    let (t, floor) = half_inverse(b);
    let mi = big(m as i64);
    let lowest = if t.is_integer() {
        &mi - &floor + 1
    } else {
        &mi - &floor
    };
    let lowest = lowest.max(BigInt::zero());
    let highest = floor.min(mi.clone());
    let count: BigInt = (highest - lowest + BigInt::one()).max(BigInt::zero());
    Ok(Rational::new(count, mi + 1))
}

fn family_b(family: AbFamily, k: i64, offset: i64) -> Rational {
    let denom = match family {
        AbFamily::OddM => 2 * k * k - k,
        AbFamily::EvenM => 2 * k * k + k,
    };
    Rational::new(big(k - offset), big(denom))
}

/// Family point with the explicit gate in place of "large enough k":
/// `floor(1/(2b))` must equal `k + C - 1` (odd `m`) or `k + C` (even `m`),
/// and `1/(2b)` must not be an integer.
pub fn ab_family_point(family: AbFamily, k: i64, offset: i64) -> Result<FamilySpec> {
    if k < 2 || offset < 1 || offset >= k {
        return Err(Error::InvalidFamily(format!(
            "need k >= 2 and 1 <= C < k, got k = {k}, C = {offset}"
        )));
    }
    let (m, expected_floor) = match family {
        AbFamily::OddM => (2 * k - 1, k + offset - 1),
        AbFamily::EvenM => (2 * k, k + offset),
    };
    let b = family_b(family, k, offset);
    let a = Rational::one() - int(m) * &b;
    let (t, floor) = half_inverse(&b);
    let reason = if t.is_integer() {
        Some(format!("1/(2b) integer ({})", format_rational(&t)))
    } else if floor != big(expected_floor) {
        Some(format!(
            "floor(1/(2b)) = {floor}, expected {expected_floor}"
        ))
    } else {
        None
    };
    Ok(FamilySpec {
        shape: Shape::Ab,
        m: m as usize,
        k,
        offset,
        b,
        a,
        valid: reason.is_none(),
        reason,
    })
}

/// `m = 2k - 1`, `b = (k - C) / (2k^2 - k)`.
pub fn odd_family_point(k: i64, offset: i64) -> Result<FamilySpec> {
    ab_family_point(AbFamily::OddM, k, offset)
}

/// `m = 2k`, `b = (k - C) / (2k^2 + k)`.
pub fn even_family_point(k: i64, offset: i64) -> Result<FamilySpec> {
    ab_family_point(AbFamily::EvenM, k, offset)
}

/// Every `b` with `0 < m b < 1` making `(a, b x m)` a Shapley-Shubik fixed
/// point, the uniform one included, by solving the closed form on each floor
/// branch.
pub fn ab_fixed_solutions(m: usize) -> Result<Vec<Rational>> {
    if m == 0 {
        return Err(Error::InvalidFamily("m must be at least 1".into()));
    }
    let mi = m as i64;
    let mut out = Vec::new();
    for floor in mi / 2..=mi {
        // (2F - m + 1)/(m + 1) = 1 - m b
        let power = Rational::new(big(2 * floor - mi + 1), big(mi + 1));
        let b = (Rational::one() - power) / int(mi);
        if !b.is_positive() || int(mi) * &b >= Rational::one() {
            continue;
        }
        let (t, f) = half_inverse(&b);
        if !t.is_integer() && f == big(floor) {
            out.push(b);
        }
    }
    // Integer branch: (1 - m b) / (b (m + 1)) = 1 - m b forces b = 1/(m + 1).
    let uniform = Rational::new(big(1), big(mi + 1));
    if half_inverse(&uniform).0.is_integer() {
        out.push(uniform);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Denominator used for the `m = 2k + 1` closed form of [`aab_ss_power_of_a`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AabDenominator {
    /// `(2k + 2)(2k + 3) = (m + 1)(m + 2)`, the count of orderings per `m!`.
    Corrected,
    /// `(2k + 1)(2k + 2)`, as printed in the original derivation. Kept so the
    /// discrepancy can be demonstrated.
    Printed,
}

fn check_aab(m: usize, b: &Rational) -> Result<(Rational, BigInt)> {
    check_ab(m, b)?;
    let (t, floor) = half_inverse(b);
    if t.is_integer() {
        return Err(Error::IntegerBoundary(format_rational(&t)));
    }
    Ok((t, floor))
}

/// Shapley-Shubik power of one type-A player in `[1/2_s; a, a, b x m]`.
pub fn aab_ss_power_of_a(m: usize, b: &Rational) -> Result<Rational> {
    aab_ss_power_of_a_with(m, b, AabDenominator::Corrected)
}

pub fn aab_ss_power_of_a_with(
    m: usize,
    b: &Rational,
    denominator: AabDenominator,
) -> Result<Rational> {
    let (_, floor) = check_aab(m, b)?;
    let floor = floor
        .to_i64()
        .ok_or_else(|| Error::InvalidFamily("b too small".into()))?;
    Ok(aab_power_at_floor(m, floor, denominator))
}

/// Closed form on the branch `floor(1/(2b)) = F`. Beyond `F = m` (odd `m`) or
/// `F = m - ... = 2k` (even `m`) every ordering count saturates, so `F` is
/// clamped there.
fn aab_power_at_floor(m: usize, floor: i64, denominator: AabDenominator) -> Rational {
    let k = (m / 2) as i64;
    if m.is_multiple_of(2) {
        let f = floor.min(2 * k);
        // one type-A ahead: sum_{p=k+1}^{F} (2k - p + 1); both: sum_{p=2k-F}^{k} (p + 1)
        let twice = (f - k) * (3 * k - f + 1) + (f - k + 1) * (3 * k - f + 2);
        Rational::new(big(twice), big(2 * (2 * k + 1) * (2 * k + 2)))
    } else {
        let f = floor.min(2 * k + 1);
        let numer = (f - k) * (3 * k - f + 3);
        let denom = match denominator {
            AabDenominator::Corrected => (2 * k + 2) * (2 * k + 3),
            AabDenominator::Printed => (2 * k + 1) * (2 * k + 2),
        };
        Rational::new(big(numer), big(denom))
    }
}

fn aab_floor_cap(m: usize) -> i64 {
    let k = (m / 2) as i64;
    if m.is_multiple_of(2) {
        2 * k
    } else {
        2 * k + 1
    }
}

/// Non-trivial solutions of `power(b) = (1 - m b) / 2` with `0 < m b < 1`,
/// found branch by branch over `F`. The uniform vector (a fixed point for odd
/// `m`) is left out. Every root
/// is also run through the engine when the system has at most 12 players; a
/// disagreement is an error.
pub fn aab_fixed_solutions(m: usize, cfg: &EngineConfig) -> Result<Vec<Rational>> {
    if m < 2 {
        return Err(Error::InvalidFamily(format!("need m >= 2, got {m}")));
    }
    let mi = m as i64;
    let cap = aab_floor_cap(m);
    let mut out = Vec::new();
    for floor in mi / 2..=cap {
        let power = aab_power_at_floor(m, floor, AabDenominator::Corrected);
        let b = (Rational::one() - power * int(2)) / int(mi);
        if !b.is_positive() || int(mi) * &b >= Rational::one() {
            continue;
        }
        // a == b is the uniform vector
        if (Rational::one() - int(mi) * &b) / int(2) == b {
            continue;
        }
        let (t, f) = half_inverse(&b);
        let on_branch = if floor == cap {
            f >= big(cap)
        } else {
            f == big(floor)
        };
        if on_branch && !t.is_integer() {
            out.push(b);
        }
    }
    out.sort();
    out.dedup();
    if m + 2 <= 12 {
        for b in &out {
            let point = aab_point(m, b.clone());
            if !apply_index_map(&point.weights(), IndexKind::ShapleyShubik, cfg)?
                .eq(&point.weights())
            {
                return Err(Error::ClosedFormMismatch(format!(
                    "m = {m}, b = {} is not an engine fixed point",
                    format_rational(b)
                )));
            }
        }
    }
    Ok(out)
}

/// `(a, a, b x m)` with `a = (1 - m b) / 2`.
pub fn aab_point(m: usize, b: Rational) -> FamilySpec {
    let a = (Rational::one() - int(m as i64) * &b) / int(2);
    let reason = match check_aab(m, &b) {
        Ok(_) if !a.is_positive() => Some("a must be positive".to_string()),
        Ok(_) => None,
        Err(e) => Some(e.to_string()),
    };
    FamilySpec {
        shape: Shape::Aab,
        m,
        k: (m / 2) as i64,
        offset: 0,
        a,
        b,
        valid: reason.is_none(),
        reason,
    }
}

/// Known closed-form classes: for `m = 2k`, `b = 1/(2k+1)` and
/// `b = k/((k+1)(2k+1))`; for `m = 2k + 1`, `b = (k+1)/(4(k+1)^2 - 1)`.
pub fn aab_verified_classes(k: i64, parity: Parity) -> Vec<Rational> {
    let mut out = match parity {
        Parity::Even => vec![
            Rational::new(big(1), big(2 * k + 1)),
            Rational::new(big(k), big((k + 1) * (2 * k + 1))),
        ],
        Parity::Odd => vec![Rational::new(big(k + 1), big(4 * (k + 1) * (k + 1) - 1))],
    };
    out.dedup();
    out
}

fn binomial(n: i64, r: i64) -> BigInt {
    if r < 0 || n < 0 || r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigInt::one(), |acc, i| acc * big(n - i) / big(i + 1))
}

fn binomial_range(n: i64, lo: i64, hi: i64) -> BigInt {
    (lo.max(0)..=hi.min(n)).map(|r| binomial(n, r)).sum()
}

/// Banzhaf indices `(type A, each type B)` of `[1/2_s; a, b x m]` by counting
/// critical players per class with binomial coefficients. Bounds use strict
/// inequalities throughout, so the result is also exact when `1/(2b)` is an
/// integer.
pub fn ab_banzhaf_index(m: usize, b: &Rational) -> Result<(Rational, Rational)> {
    check_ab(m, b)?;
    let (t, floor) = half_inverse(b);
    let floor = floor
        .to_i64()
        .ok_or_else(|| Error::InvalidFamily("b too small".into()))?;
    let ceil = if t.is_integer() { floor } else { floor + 1 };
    let m = m as i64;
    // without A: exactly floor + 1 type-B players
    let b_alone = binomial(m - 1, floor);
    // with A: q type-B players, m - ceil + 1 <= q <= floor
    let q_min = m - ceil + 1;
    let a_swings = binomial_range(m, q_min, floor);
    let b_with_a = if q_min >= 1 {
        binomial(m - 1, q_min - 1)
    } else {
        BigInt::zero()
    };
    let per_b = b_alone + b_with_a;
    let total = big(m) * &per_b + &a_swings;
    if total.is_zero() {
        return Err(Error::DegenerateSystem("no player is ever critical".into()));
    }
    Ok((
        Rational::new(a_swings, total.clone()),
        Rational::new(per_b, total),
    ))
}

/// Type-B Banzhaf index on a family point, in the specialised form where the
/// swing ranges are written in terms of `k` and `C` directly.
pub fn family_banzhaf_closed_form(family: AbFamily, k: i64, offset: i64) -> Rational {
    let c = offset;
    let (per_b, a_swings, m) = match family {
        AbFamily::OddM => (
            binomial(2 * k - 2, k + c - 1) + binomial(2 * k - 2, k - c - 1),
            binomial_range(2 * k - 1, k - c, k + c - 1),
            2 * k - 1,
        ),
        AbFamily::EvenM => (
            binomial(2 * k - 1, k + c) + binomial(2 * k - 1, k - c),
            binomial_range(2 * k, k - c + 1, k + c),
            2 * k,
        ),
    };
    let total = big(m) * &per_b + a_swings;
    Rational::new(per_b, total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BanzhafCheck {
    pub point: FamilySpec,
    /// Specialised closed form for a type-B player.
    #[serde(with = "serde_text")]
    pub closed_form: Rational,
    /// General binomial count from [`ab_banzhaf_index`].
    #[serde(with = "serde_text")]
    pub binomial_count: Rational,
    /// Type-B index from the DP engine.
    #[serde(with = "serde_text")]
    pub engine: Rational,
}

impl BanzhafCheck {
    /// The closed form gives back `b`, i.e. the point is also a Banzhaf fixed point.
    pub fn holds(&self) -> bool {
        self.closed_form == self.point.b
    }

    pub fn engine_confirms(&self) -> bool {
        self.engine == self.point.b
    }

    /// All three evaluations agree.
    pub fn consistent(&self) -> bool {
        self.closed_form == self.engine && self.binomial_count == self.engine
    }
}

/// Whether a family point is also a Banzhaf fixed point. Points failing the
/// floor gate are evaluated too (the answer is then expected to be negative).
pub fn family_banzhaf_check(
    family: AbFamily,
    k: i64,
    offset: i64,
    cfg: &EngineConfig,
) -> Result<BanzhafCheck> {
    let point = ab_family_point(family, k, offset)?;
    let closed_form = family_banzhaf_closed_form(family, k, offset);
    let binomial_count = ab_banzhaf_index(point.m, &point.b)?.1;
    let system = VotingSystem::strict_majority(point.weights())?;
    let engine = indices::banzhaf_dp(&system, cfg)?.1.values[1].clone();
    Ok(BanzhafCheck {
        point,
        closed_form,
        binomial_count,
        engine,
    })
}
