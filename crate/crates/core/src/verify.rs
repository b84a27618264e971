//! Reproducible checks of every published claim the crate covers.
//!
//! A [`Check`] is either a hard check, which fails its suite, or a finding,
//! which is reported with its outcome but never fails anything.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::Serialize;

use crate::divisor::{self, AbundantEntry};
use crate::error::{Error, Result};
use crate::fixedpoint::{self, AabDenominator, AbFamily};
use crate::indices::{self, EngineConfig};
use crate::rational::{format_list, format_tuple, ratio, Rational};
use crate::system::{IndexKind, QuotaMode, VotingSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Perfect,
    Disagreement,
    CaseCheck,
    AbundanceCensus,
    PnMnCounts,
    PnMnIndices,
    AabTables,
    Erratum,
    Families,
    JointFixedPoints,
    Engines,
    Perf,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Perfect,
        Suite::Disagreement,
        Suite::CaseCheck,
        Suite::AbundanceCensus,
        Suite::PnMnCounts,
        Suite::PnMnIndices,
        Suite::AabTables,
        Suite::Erratum,
        Suite::Families,
        Suite::JointFixedPoints,
        Suite::Engines,
        Suite::Perf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Perfect => "perfect",
            Suite::Disagreement => "prop21",
            Suite::CaseCheck => "casecheck",
            Suite::AbundanceCensus => "prop22census",
            Suite::PnMnCounts => "prop24",
            Suite::PnMnIndices => "conj23",
            Suite::AabTables => "tables32",
            Suite::Erratum => "erratum",
            Suite::Families => "families",
            Suite::JointFixedPoints => "sec33",
            Suite::Engines => "engines",
            Suite::Perf => "perf",
        }
    }

    /// What the suite is about, printed next to every check.
    pub fn claim(self) -> &'static str {
        match self {
            Suite::Perfect => "perfect numbers: indices equal the closed forms",
            Suite::Disagreement => {
                "sigma(n) = 2n + k, 0 <= k <= 5: Banzhaf and Shapley-Shubik differ on some divisor"
            }
            Suite::CaseCheck => "closed forms for k = 1..5 compared with the engine",
            Suite::AbundanceCensus => "abundant numbers by divisor count",
            Suite::PnMnCounts => "divisor systems of pn and mn have equal winning-coalition counts",
            Suite::PnMnIndices => "divisor systems of pn and mn have corresponding index vectors",
            Suite::AabTables => "(a, a, b, ..., b) Shapley-Shubik fixed-point tables",
            Suite::Erratum => "m = 2k + 1 denominator of the (a, a, b, ..., b) closed form",
            Suite::Families => "(a, b, ..., b) Shapley-Shubik fixed-point families",
            Suite::JointFixedPoints => {
                "joint Banzhaf and Shapley-Shubik fixed points in the (a, b, ..., b) families"
            }
            Suite::Engines => "enumeration, permutation and DP engines agree",
            Suite::Perf => "DP engine on the 24-player divisor system of 360",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub finding: bool,
    pub detail: String,
}

impl Check {
    /// Fails the run when `passed` is false.
    pub fn is_failure(&self) -> bool {
        !self.passed && !self.finding
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyBounds {
    /// Sweep limit for the disagreement suite.
    pub max_n: u64,
    pub n: u64,
    pub p: u64,
    pub m: u64,
    pub census_limit: u64,
    /// Largest `k` for the (a, b, ..., b) family checks.
    pub family_max_k: i64,
    /// Largest `k` for the joint fixed-point checks.
    pub joint_max_k: i64,
    pub random_systems: usize,
    pub seed: u64,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds {
            max_n: 1000,
            n: 12,
            p: 31,
            m: 37,
            census_limit: 100,
            family_max_k: 6,
            joint_max_k: 8,
            random_systems: 200,
            seed: 0x5eed_1e55,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.is_failure())
    }
}

struct Collector {
    suite: Suite,
    checks: Vec<Check>,
}

impl Collector {
    fn new(suite: Suite) -> Self {
        Collector {
            suite,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.push(name, passed, false, detail);
    }

    fn finding(&mut self, name: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.push(name, holds, true, detail);
    }

    fn push(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        finding: bool,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            passed,
            finding,
            detail: detail.into(),
        });
    }
}

pub fn run(suites: &[Suite], bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<Report> {
    let mut report = Report::default();
    for &suite in suites {
        report.checks.extend(run_suite(suite, bounds, cfg)?);
    }
    Ok(report)
}

pub fn run_suite(suite: Suite, bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<Vec<Check>> {
    let mut c = Collector::new(suite);
    match suite {
        Suite::Perfect => perfect(&mut c, cfg)?,
        Suite::Disagreement => disagreement(&mut c, bounds, cfg)?,
        Suite::CaseCheck => case_check(&mut c, cfg)?,
        Suite::AbundanceCensus => census(&mut c, bounds),
        Suite::PnMnCounts => pn_mn_counts(&mut c, bounds, cfg)?,
        Suite::PnMnIndices => pn_mn_indices(&mut c, bounds, cfg)?,
        Suite::AabTables => tables(&mut c, cfg)?,
        Suite::Erratum => erratum(&mut c)?,
        Suite::Families => families(&mut c, bounds, cfg)?,
        Suite::JointFixedPoints => joint(&mut c, bounds, cfg)?,
        Suite::Engines => engines(&mut c, bounds, cfg)?,
        Suite::Perf => perf(&mut c, cfg)?,
    }
    Ok(c.checks)
}

fn perfect(c: &mut Collector, cfg: &EngineConfig) -> Result<()> {
    for n in [6, 28, 496] {
        let r = divisor::disagreement_report(n, cfg)?;
        let mismatches: Vec<String> = r
            .formula_mismatches()
            .map(|m| format!("{} of {}", m.kind.as_str(), m.divisor))
            .collect();
        c.check(
            format!("n = {n}"),
            r.formula_match() == Some(true),
            format!(
                "banzhaf {} ss {}{}",
                format_tuple(&r.banzhaf.values),
                format_tuple(&r.shapley_shubik.values),
                if mismatches.is_empty() {
                    String::new()
                } else {
                    format!("; mismatches: {}", mismatches.join(", "))
                }
            ),
        );
    }
    Ok(())
}

fn disagreement(c: &mut Collector, bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<()> {
    let reports = divisor::disagreement_sweep(bounds.max_n, 5, cfg)?;
    for r in &reports {
        c.check(
            format!(
                "n = {} (k = {}, d = {})",
                r.n,
                r.abundance_excess,
                r.divisors.len()
            ),
            !r.witnesses.is_empty(),
            format!("differ at divisors {:?}", r.witness_divisors()),
        );
    }
    Ok(())
}

fn case_check(c: &mut Collector, cfg: &EngineConfig) -> Result<()> {
    for n in [20, 18, 12, 70] {
        let r = divisor::disagreement_report(n, cfg)?;
        let detail: Vec<String> = r
            .formula_checks
            .iter()
            .map(|f| {
                format!(
                    "{}({}) predicted {} engine {}",
                    if f.kind == IndexKind::Banzhaf {
                        "B"
                    } else {
                        "SS"
                    },
                    f.divisor,
                    f.predicted,
                    f.computed
                )
            })
            .collect();
        c.finding(
            format!("n = {n} (k = {})", r.abundance_excess),
            r.formula_match() == Some(true),
            detail.join("; "),
        );
        c.check(
            format!("n = {n} has a disagreement witness"),
            !r.witnesses.is_empty(),
            format!("differ at divisors {:?}", r.witness_divisors()),
        );
    }
    Ok(())
}

fn census(c: &mut Collector, bounds: &VerifyBounds) {
    let limit = bounds.census_limit;
    let six: Vec<u64> = divisor::scan_abundant(limit, Some(6))
        .iter()
        .map(|e| e.n)
        .collect();
    c.finding(
        format!("only 20 is abundant with 6 divisors (n <= {limit})"),
        six == [20],
        format!("abundant with 6 divisors: {six:?}"),
    );
    let few: Vec<AbundantEntry> = divisor::scan_abundant(limit, None)
        .into_iter()
        .filter(|e| e.divisor_count <= 5)
        .collect();
    c.finding(
        format!("every abundant number has more than 5 divisors (n <= {limit})"),
        few.is_empty(),
        format!("{} counterexamples", few.len()),
    );
    let census: Vec<String> = divisor::abundant_census(limit)
        .iter()
        .map(|(d, ns)| format!("d={d}: {}", ns.len()))
        .collect();
    c.finding("census", true, census.join(", "));
}

fn pn_mn_cases(bounds: &VerifyBounds) -> Vec<(u64, u64, u64)> {
    let mut cases = vec![(bounds.n, bounds.p, bounds.m)];
    if (bounds.n, bounds.p, bounds.m) != (6, 31, 37) {
        cases.push((6, 31, 37));
    }
    cases
}

fn pn_mn_counts(c: &mut Collector, bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<()> {
    for (n, p, m) in pn_mn_cases(bounds) {
        let r = divisor::compare_pn_mn(n, p, m, cfg)?;
        c.check(
            format!("n = {n}, p = {p}, m = {m}"),
            r.counts_equal,
            format!("winning coalitions {} vs {}", r.count_pn, r.count_mn),
        );
    }
    Ok(())
}

fn pn_mn_indices(c: &mut Collector, bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<()> {
    let r = divisor::compare_pn_mn(bounds.n, bounds.p, bounds.m, cfg)?;
    c.check(
        format!("n = {}, p = {}, m = {}", r.n, r.p, r.m),
        r.indices_equal(),
        format!(
            "banzhaf equal: {}, ss equal: {}",
            r.banzhaf_equal, r.ss_equal
        ),
    );
    Ok(())
}

/// Published solutions, keyed by number of type-B players.
pub fn published_aab_tables() -> Vec<(usize, Vec<Rational>)> {
    let row = |m: usize, bs: &[(i64, i64)]| (m, bs.iter().map(|&(p, q)| ratio(p, q)).collect());
    vec![
        row(2, &[(1, 3)]),
        row(4, &[(2, 15), (1, 5)]),
        row(6, &[(3, 28), (1, 7)]),
        row(8, &[(13, 180), (4, 45), (1, 9)]),
        row(10, &[(7, 110), (5, 66), (1, 11)]),
        row(3, &[(2, 15)]),
        row(5, &[(3, 35), (11, 105)]),
        row(7, &[(4, 63), (11, 126)]),
        row(9, &[(5, 99), (31, 495), (37, 495)]),
    ]
}

fn tables(c: &mut Collector, cfg: &EngineConfig) -> Result<()> {
    for (m, published) in published_aab_tables() {
        let mut expected = published.clone();
        expected.sort();
        let solved = fixedpoint::aab_fixed_solutions(m, cfg)?;
        c.check(
            format!("m = {m}: solver reproduces the table"),
            solved == expected,
            format!("solver {{{}}}", format_list(&solved, ", ")),
        );
        for b in published {
            let point = fixedpoint::aab_point(m, b.clone());
            let fixed =
                fixedpoint::is_fixed_point(&point.weights(), IndexKind::ShapleyShubik, cfg)?;
            c.check(
                format!("m = {m}, b = {b}: engine fixed point"),
                fixed,
                format!("{} players", point.players()),
            );
        }
    }
    Ok(())
}

fn erratum(c: &mut Collector) -> Result<()> {
    let b = ratio(2, 15);
    let point = fixedpoint::aab_point(3, b.clone());
    let system = VotingSystem::new(ratio(1, 2), QuotaMode::StrictlyExceeds, point.weights())?;
    let (counts, oracle) = indices::ss_enum_perms(&system)?;
    let oracle_a = oracle.values[0].clone();
    let printed = fixedpoint::aab_ss_power_of_a_with(3, &b, AabDenominator::Printed)?;
    let corrected = fixedpoint::aab_ss_power_of_a_with(3, &b, AabDenominator::Corrected)?;
    c.check(
        "permutation oracle confirms b = 2/15 is fixed",
        oracle_a == point.a && oracle.values == point.weights(),
        format!("{} orderings, A power {oracle_a}", counts.total),
    );
    c.check(
        "printed denominator (2k+1)(2k+2) fails",
        printed != oracle_a,
        format!("gives {printed}, oracle {oracle_a}"),
    );
    c.check(
        "corrected denominator (2k+2)(2k+3) holds",
        corrected == oracle_a,
        format!("gives {corrected}"),
    );
    Ok(())
}

fn families(c: &mut Collector, bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<()> {
    for family in [AbFamily::OddM, AbFamily::EvenM] {
        for k in 2..=bounds.family_max_k {
            for offset in 1..k {
                let p = fixedpoint::ab_family_point(family, k, offset)?;
                if !p.valid {
                    continue;
                }
                let closed = fixedpoint::ab_ss_power_of_a(p.m, &p.b)?;
                let fixed =
                    fixedpoint::is_fixed_point(&p.weights(), IndexKind::ShapleyShubik, cfg)?;
                c.check(
                    format!("{family:?} k = {k}, C = {offset}"),
                    closed == p.a && fixed,
                    format!(
                        "a = {}, b = {}, closed form {closed}, engine fixed: {fixed}",
                        p.a, p.b
                    ),
                );
            }
        }
    }
    Ok(())
}

fn joint(c: &mut Collector, bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<()> {
    let show = |chk: &fixedpoint::BanzhafCheck| {
        let mut s = format!(
            "b = {}, closed form {}, engine {}",
            chk.point.b, chk.closed_form, chk.engine
        );
        if let Some(reason) = &chk.point.reason {
            s.push_str(&format!("; outside the family: {reason}"));
        }
        s
    };
    let base = fixedpoint::family_banzhaf_check(AbFamily::OddM, 3, 1, cfg)?;
    c.check(
        "odd m, k = 3, C = 1 is a joint fixed point",
        base.holds() && base.engine_confirms(),
        show(&base),
    );
    for k in 2..=bounds.joint_max_k {
        for offset in 1..k {
            let odd = fixedpoint::family_banzhaf_check(AbFamily::OddM, k, offset, cfg)?;
            if offset == 1 {
                c.finding(
                    format!("odd m, k = {k}, C = 1 joint fixed point"),
                    odd.holds() && odd.engine_confirms(),
                    show(&odd),
                );
            } else {
                c.check(
                    format!("odd m, k = {k}, C = {offset} is not Banzhaf-fixed"),
                    !odd.holds() && !odd.engine_confirms(),
                    show(&odd),
                );
            }
            let even = fixedpoint::family_banzhaf_check(AbFamily::EvenM, k, offset, cfg)?;
            c.check(
                format!("even m, k = {k}, C = {offset} is not Banzhaf-fixed"),
                !even.holds() && !even.engine_confirms(),
                show(&even),
            );
        }
    }
    Ok(())
}

/// Seeded random systems: up to 12 players, integer weights up to 50,
/// quota anywhere in `1..=total`, both modes.
pub fn random_systems(count: usize, seed: u64) -> Vec<VotingSystem> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=12);
            let weights: Vec<i64> = (0..n).map(|_| rng.random_range(0..=50)).collect();
            let total = weights.iter().sum::<i64>().max(1);
            let quota = rng.random_range(1..=total);
            let mode = if rng.random_bool(0.5) {
                QuotaMode::MeetsOrExceeds
            } else {
                QuotaMode::StrictlyExceeds
            };
            VotingSystem::new(
                ratio(quota, 1),
                mode,
                weights.into_iter().map(|w| ratio(w, 1)).collect(),
            )
            .expect("generated systems are valid")
        })
        .collect()
}

fn same_outcome<T: PartialEq>(a: Result<T>, b: Result<T>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(Error::DegenerateSystem(_)), Err(Error::DegenerateSystem(_))) => true,
        _ => false,
    }
}

fn engines(c: &mut Collector, bounds: &VerifyBounds, cfg: &EngineConfig) -> Result<()> {
    let systems = random_systems(bounds.random_systems, bounds.seed);
    let (mut bz, mut ss, mut perms, mut small) = (0, 0, 0, 0);
    let mut bad = Vec::new();
    for (i, sys) in systems.iter().enumerate() {
        let b_ok = same_outcome(
            indices::banzhaf_dp(sys, cfg),
            indices::banzhaf_enum(sys, cfg),
        );
        let s_ok = same_outcome(indices::ss_dp(sys, cfg), indices::ss_enum_subsets(sys, cfg));
        bz += b_ok as usize;
        ss += s_ok as usize;
        let mut p_ok = true;
        if sys.players() <= 7 {
            small += 1;
            p_ok = same_outcome(
                indices::ss_enum_subsets(sys, cfg),
                indices::ss_enum_perms(sys).map(|(_, v)| v),
            );
            perms += p_ok as usize;
        }
        if !(b_ok && s_ok && p_ok) {
            bad.push(i);
        }
    }
    let n = systems.len();
    c.check(
        "banzhaf dp = enumeration",
        bz == n,
        format!("{bz}/{n} systems"),
    );
    c.check(
        "ss dp = subset enumeration",
        ss == n,
        format!("{ss}/{n} systems"),
    );
    c.check(
        "ss subsets = permutations (n <= 7)",
        perms == small,
        format!(
            "{perms}/{small} systems{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failing {bad:?}")
            }
        ),
    );
    Ok(())
}

pub const PERF_BUDGET: Duration = Duration::from_secs(10);

fn perf(c: &mut Collector, cfg: &EngineConfig) -> Result<()> {
    let ds = divisor::divisor_system(360)?;
    let start = Instant::now();
    let v = indices::ss_dp(&ds.system, cfg)?;
    let elapsed = start.elapsed();
    c.check(
        "ss_dp on n = 360 (24 players, sigma = 1170)",
        v.is_well_formed() && elapsed <= PERF_BUDGET,
        format!("{:.3} s, sums to {}", elapsed.as_secs_f64(), v.sum()),
    );
    Ok(())
}
