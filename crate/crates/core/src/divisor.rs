//! Divisor voting systems: players are the divisors of `n`, each weighted by
//! itself, with quota `(sigma(n) + 1) / 2` when `sigma(n)` is even and
//! `sigma(n) / 2` when it is odd (always compared with `>=`).

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{self, EngineConfig};
use crate::rational::{format_list, int, Rational};
use crate::system::{IndexKind, IndexVector, QuotaMode, VotingSystem};

fn require_n(n: u64) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidInput(format!(
            "n must be at least 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// All divisors of `n`, largest first.
pub fn divisors_of(n: u64) -> Result<Vec<u64>> {
    require_n(n)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.reverse();
    large.extend(small);
    Ok(large)
}

pub fn sigma_of(n: u64) -> Result<u64> {
    Ok(divisors_of(n)?.iter().sum())
}

/// `sigma(n) - 2n`: 0 for perfect numbers, positive for abundant ones.
pub fn abundance_class(n: u64) -> Result<i64> {
    Ok(sigma_of(n)? as i64 - 2 * n as i64)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSystem {
    pub n: u64,
    /// Strictly descending, `n` first and `1` last.
    pub divisors: Vec<u64>,
    pub sigma: u64,
    pub abundance_excess: i64,
    pub system: VotingSystem,
}

impl DivisorSystem {
    pub fn divisor_count(&self) -> usize {
        self.divisors.len()
    }

    pub fn position_of(&self, divisor: u64) -> Option<usize> {
        self.divisors.iter().position(|&d| d == divisor)
    }
}

pub fn divisor_quota(sigma: u64) -> Rational {
    if sigma.is_multiple_of(2) {
        Rational::new(BigInt::from(sigma + 1), BigInt::from(2))
    } else {
        Rational::new(BigInt::from(sigma), BigInt::from(2))
    }
}

pub fn divisor_system(n: u64) -> Result<DivisorSystem> {
    let divisors = divisors_of(n)?;
    let sigma: u64 = divisors.iter().sum();
    let weights = divisors.iter().map(|&d| int(d as i64)).collect();
    let system = VotingSystem::new(divisor_quota(sigma), QuotaMode::MeetsOrExceeds, weights)?;
    Ok(DivisorSystem {
        n,
        sigma,
        abundance_excess: sigma as i64 - 2 * n as i64,
        divisors,
        system,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityBranch {
    Even,
    Odd,
    NotApplicable,
}

/// Groups of divisors that the closed forms speak about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorClass {
    /// The divisor `n` itself.
    Whole,
    /// The divisor 1.
    One,
    /// Proper divisors other than 1 (for perfect numbers: every divisor but `n`).
    Other,
}

impl DivisorClass {
    pub fn positions(self, case_k: i64, divisor_count: usize) -> Vec<usize> {
        let last = divisor_count - 1;
        match self {
            DivisorClass::Whole => vec![0],
            DivisorClass::One => vec![last],
            DivisorClass::Other if case_k == 0 => (1..=last).collect(),
            DivisorClass::Other => (1..last).collect(),
        }
    }
}

/// Closed-form predictions for one divisor system, evaluated at its divisor count.
/// Only classes the case derives are present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CasePrediction {
    pub case_k: i64,
    pub parity_branch: ParityBranch,
    pub divisor_count: usize,
    pub predictions: Vec<ClassPrediction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPrediction {
    pub class: DivisorClass,
    pub kind: IndexKind,
    #[serde(with = "crate::rational::serde_text")]
    pub value: Rational,
}

impl CasePrediction {
    pub fn get(&self, class: DivisorClass, kind: IndexKind) -> Option<&Rational> {
        self.predictions
            .iter()
            .find(|p| p.class == class && p.kind == kind)
            .map(|p| &p.value)
    }
}

fn frac(numer: BigInt, denom: BigInt) -> Option<Rational> {
    (denom > BigInt::zero()).then(|| Rational::new(numer, denom))
}

/// Closed forms for `sigma(n) = 2n + k`, `k` in `0..=5`, as functions of the
/// divisor count `d`. `parity` matters only for `k = 4` and `k = 5`.
pub fn case_formulas_at(k: i64, parity: ParityBranch, d: usize) -> Result<CasePrediction> {
    use DivisorClass::*;
    use IndexKind::*;

    let di = d as i64;
    let b = |x: i64| BigInt::from(x);
    let pow = BigInt::one() << (d - 1);
    let dd = |offset: BigInt| &pow + offset;
    let mut out: Vec<(DivisorClass, IndexKind, Option<Rational>)> = Vec::new();

    let parity = match k {
        4 | 5 => match parity {
            ParityBranch::NotApplicable => {
                return Err(Error::InvalidInput(format!(
                    "case k={k} needs the parity of n"
                )))
            }
            p => p,
        },
        _ => ParityBranch::NotApplicable,
    };

    match (k, parity) {
        (0, _) => {
            let denom = dd(b(di - 2));
            out.push((Whole, Banzhaf, frac(&pow - 1, denom.clone())));
            out.push((Other, Banzhaf, frac(b(1), denom)));
            out.push((Whole, ShapleyShubik, frac(b(di - 1), b(di))));
            out.push((Other, ShapleyShubik, frac(b(1), b(di * (di - 1)))));
        }
        (1, _) => {
            out.push((Other, Banzhaf, frac(b(2), dd(b(2 * (di - 2))))));
            out.push((Other, ShapleyShubik, frac(b(2), b(di * (di - 1)))));
        }
        (2, _) => {
            out.push((One, Banzhaf, frac(b(1), dd(b(3 * (di - 2) - 2)))));
            out.push((One, ShapleyShubik, frac(b(1), b(di * (di - 1)))));
        }
        (3, _) => {
            out.push((Other, Banzhaf, frac(b(4), dd(b(4 * (di - 2) - 4)))));
            out.push((Other, ShapleyShubik, frac(b(2), b((di - 1) * (di - 2)))));
        }
        (4 | 5, ParityBranch::Even) => {
            let offset = if k == 4 { -1 } else { -2 };
            out.push((One, Banzhaf, frac(b(1), dd(b(5 * (di - 3) + offset)))));
            out.push((One, ShapleyShubik, frac(b(2), b(di * (di - 1) * (di - 2)))));
        }
        (4 | 5, _) => {
            let offset = if k == 4 { -3 } else { -6 };
            out.push((Other, Banzhaf, frac(b(4), dd(b(4 * (di - 2) + offset)))));
            out.push((Other, ShapleyShubik, frac(b(2), b(di - 1))));
        }
        _ => return Err(Error::UnsupportedCase(k)),
    }

    Ok(CasePrediction {
        case_k: k,
        parity_branch: parity,
        divisor_count: d,
        predictions: out
            .into_iter()
            .filter_map(|(class, kind, value)| {
                value.map(|value| ClassPrediction { class, kind, value })
            })
            .collect(),
    })
}

pub fn case_formula_indices(ds: &DivisorSystem) -> Result<CasePrediction> {
    let parity = if ds.n.is_multiple_of(2) {
        ParityBranch::Even
    } else {
        ParityBranch::Odd
    };
    case_formulas_at(ds.abundance_excess, parity, ds.divisor_count())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub class: DivisorClass,
    pub kind: IndexKind,
    pub divisor: u64,
    #[serde(with = "crate::rational::serde_text")]
    pub predicted: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub computed: Rational,
    pub matches: bool,
}

/// Both index vectors of a divisor system and where they differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisagreementReport {
    pub n: u64,
    pub divisors: Vec<u64>,
    pub sigma: u64,
    pub abundance_excess: i64,
    pub banzhaf: IndexVector,
    pub shapley_shubik: IndexVector,
    /// Positions (into `divisors`) where the two vectors differ.
    pub witnesses: Vec<usize>,
    /// Closed-form comparisons, present when `k` is in `0..=5`.
    pub formula_checks: Vec<FormulaCheck>,
}

impl DisagreementReport {
    pub fn witness_divisors(&self) -> Vec<u64> {
        self.witnesses.iter().map(|&i| self.divisors[i]).collect()
    }

    /// `None` when no closed form applies.
    pub fn formula_match(&self) -> Option<bool> {
        (!self.formula_checks.is_empty()).then(|| self.formula_checks.iter().all(|c| c.matches))
    }

    pub fn formula_mismatches(&self) -> impl Iterator<Item = &FormulaCheck> {
        self.formula_checks.iter().filter(|c| !c.matches)
    }
}

pub fn compare_with_formulas(
    ds: &DivisorSystem,
    banzhaf: &IndexVector,
    ss: &IndexVector,
) -> Result<Vec<FormulaCheck>> {
    let prediction = case_formula_indices(ds)?;
    let mut checks = Vec::new();
    for p in &prediction.predictions {
        let computed = match p.kind {
            IndexKind::Banzhaf => banzhaf,
            IndexKind::ShapleyShubik => ss,
        };
        for pos in p.class.positions(prediction.case_k, ds.divisor_count()) {
            let value = computed.values[pos].clone();
            checks.push(FormulaCheck {
                class: p.class,
                kind: p.kind,
                divisor: ds.divisors[pos],
                matches: value == p.value,
                predicted: p.value.clone(),
                computed: value,
            });
        }
    }
    Ok(checks)
}

/// Computes both indices with the DP engine and lists the divisors on which
/// they disagree. Closed-form mismatches are recorded, never raised.
pub fn disagreement_report(n: u64, cfg: &EngineConfig) -> Result<DisagreementReport> {
    let ds = divisor_system(n)?;
    let banzhaf = indices::banzhaf_dp(&ds.system, cfg)?.1;
    let ss = indices::ss_dp(&ds.system, cfg)?;
    let witnesses = (0..ds.divisor_count())
        .filter(|&i| banzhaf.values[i] != ss.values[i])
        .collect();
    let formula_checks = if (0..=5).contains(&ds.abundance_excess) {
        compare_with_formulas(&ds, &banzhaf, &ss)?
    } else {
        Vec::new()
    };
    Ok(DisagreementReport {
        n,
        sigma: ds.sigma,
        abundance_excess: ds.abundance_excess,
        divisors: ds.divisors,
        banzhaf,
        shapley_shubik: ss,
        witnesses,
        formula_checks,
    })
}

/// Reports for every `n` in `2..=limit` with `0 <= sigma(n) - 2n <= max_excess`,
/// in increasing `n`.
pub fn disagreement_sweep(
    limit: u64,
    max_excess: i64,
    cfg: &EngineConfig,
) -> Result<Vec<DisagreementReport>> {
    let targets: Vec<u64> = sigma_table(limit)
        .into_iter()
        .enumerate()
        .skip(2)
        .filter(|&(n, s)| (0..=max_excess).contains(&(s as i64 - 2 * n as i64)))
        .map(|(n, _)| n as u64)
        .collect();
    targets
        .par_iter()
        .map(|&n| disagreement_report(n, cfg))
        .collect()
}

/// `sigma(k)` for `k` in `0..=limit` by summing over multiples.
pub fn sigma_table(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut sigma = vec![0u64; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            sigma[m] += d as u64;
        }
    }
    sigma
}

fn divisor_count_table(limit: u64) -> Vec<usize> {
    let limit = limit as usize;
    let mut count = vec![0usize; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            count[m] += 1;
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbundantEntry {
    pub n: u64,
    pub divisor_count: usize,
    pub excess: i64,
}

/// Every abundant `n <= limit`, optionally only those with exactly
/// `divisor_count` divisors.
pub fn scan_abundant(limit: u64, divisor_count: Option<usize>) -> Vec<AbundantEntry> {
    let sigma = sigma_table(limit);
    let counts = divisor_count_table(limit);
    (2..=limit as usize)
        .filter(|&n| sigma[n] > 2 * n as u64)
        .filter(|&n| divisor_count.is_none_or(|d| counts[n] == d))
        .map(|n| AbundantEntry {
            n: n as u64,
            divisor_count: counts[n],
            excess: sigma[n] as i64 - 2 * n as i64,
        })
        .collect()
}

/// Abundant numbers up to `limit` grouped by divisor count.
pub fn abundant_census(limit: u64) -> BTreeMap<usize, Vec<u64>> {
    let mut census: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for e in scan_abundant(limit, None) {
        census.entry(e.divisor_count).or_default().push(e.n);
    }
    census
}

/// Numbers with `sigma(n) = 2n + 1` up to `limit` (none are known).
pub fn quasiperfect_search(limit: u64) -> Vec<u64> {
    sigma_table(limit)
        .into_iter()
        .enumerate()
        .skip(2)
        .filter(|&(n, s)| s == 2 * n as u64 + 1)
        .map(|(n, _)| n as u64)
        .collect()
}

/// Divisor systems of `p*n` and `m*n` compared through `d <-> d`, `p*d <-> m*d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PnMnReport {
    pub n: u64,
    pub p: u64,
    pub m: u64,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub count_pn: BigUint,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub count_mn: BigUint,
    pub counts_equal: bool,
    pub banzhaf_equal: bool,
    pub ss_equal: bool,
    /// `(p sigma(n) + sigma(n)) / 2 + 1`, the threshold used in the bijection argument.
    #[serde(with = "crate::rational::serde_text")]
    pub bijection_quota_pn: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub bijection_quota_mn: Rational,
}

impl PnMnReport {
    pub fn indices_equal(&self) -> bool {
        self.banzhaf_equal && self.ss_equal
    }
}

fn check_multiplier(name: &str, q: u64, n: u64, sigma: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::PreconditionFailed(format!(
            "{name} = {q} is not prime"
        )));
    }
    if q <= sigma + 1 {
        return Err(Error::PreconditionFailed(format!(
            "{name} > sigma(n) + 1 fails: {name} = {q}, sigma({n}) + 1 = {}",
            sigma + 1
        )));
    }
    if n.is_multiple_of(q) {
        return Err(Error::PreconditionFailed(format!(
            "{name} = {q} divides n = {n}"
        )));
    }
    Ok(())
}

pub fn compare_pn_mn(n: u64, p: u64, m: u64, cfg: &EngineConfig) -> Result<PnMnReport> {
    let sigma = sigma_of(n)?;
    check_multiplier("p", p, n, sigma)?;
    check_multiplier("m", m, n, sigma)?;
    let overflow = || Error::InvalidInput("p*n or m*n overflows u64".into());
    let pn = divisor_system(p.checked_mul(n).ok_or_else(overflow)?)?;
    let mn = divisor_system(m.checked_mul(n).ok_or_else(overflow)?)?;

    // position in mn's list for each position in pn's list
    let image: Vec<usize> = pn
        .divisors
        .iter()
        .map(|&e| {
            let target = if e % p == 0 { e / p * m } else { e };
            mn.position_of(target)
                .expect("p*n and m*n share the divisor structure of n")
        })
        .collect();
    let aligned = |a: &IndexVector, b: &IndexVector| {
        image
            .iter()
            .enumerate()
            .all(|(i, &j)| a.values[i] == b.values[j])
    };

    let count_pn = indices::count_winning(&pn.system, cfg)?;
    let count_mn = indices::count_winning(&mn.system, cfg)?;
    let banzhaf_equal = aligned(
        &indices::banzhaf_dp(&pn.system, cfg)?.1,
        &indices::banzhaf_dp(&mn.system, cfg)?.1,
    );
    let ss_equal = aligned(
        &indices::ss_dp(&pn.system, cfg)?,
        &indices::ss_dp(&mn.system, cfg)?,
    );
    let bijection_quota =
        |q: u64| Rational::new(BigInt::from((q + 1) * sigma), BigInt::from(2)) + Rational::one();
    Ok(PnMnReport {
        n,
        p,
        m,
        counts_equal: count_pn == count_mn,
        count_pn,
        count_mn,
        banzhaf_equal,
        ss_equal,
        bijection_quota_pn: bijection_quota(p),
        bijection_quota_mn: bijection_quota(m),
    })
}

pub const SCAN_CSV_HEADER: [&str; 8] = [
    "n",
    "d",
    "sigma",
    "k",
    "banzhaf_vector",
    "ss_vector",
    "witness_positions",
    "formula_match",
];

/// One row per report; vectors and positions are `;`-separated.
pub fn write_scan_csv<W: Write>(reports: &[DisagreementReport], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidInput(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCAN_CSV_HEADER).map_err(io)?;
    for r in reports {
        let positions: Vec<String> = r.witnesses.iter().map(|p| p.to_string()).collect();
        let formula = match r.formula_match() {
            Some(true) => "Y",
            Some(false) => "N",
            None => "NA",
        };
        w.write_record([
            r.n.to_string(),
            r.divisors.len().to_string(),
            r.sigma.to_string(),
            r.abundance_excess.to_string(),
            format_list(&r.banzhaf.values, ";"),
            format_list(&r.shapley_shubik.values, ";"),
            positions.join(";"),
            formula.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidInput(format!("csv output: {e}")))
}
