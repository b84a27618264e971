//! The index map `w -> index([1/2_s; w])` and its fixed points.
//!
//! Weight vectors always sum to 1 and coalitions win by strictly exceeding
//! 1/2, so the map sends the probability simplex to itself.

pub mod family;

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::{self, Engine, EngineConfig};
use crate::rational::{serde_text, Rational};
use crate::system::{IndexKind, VotingSystem};

pub use family::*;

fn check_simplex(weights: &[Rational]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidInput("no weights".into()));
    }
    if weights.iter().any(|w| w.is_negative()) {
        return Err(Error::InvalidInput("weights must be non-negative".into()));
    }
    let total = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
    if !total.is_one() {
        return Err(Error::InvalidInput(format!(
            "weights must sum to 1 (got {total}); normalize first"
        )));
    }
    Ok(())
}

/// One application of the index map.
pub fn apply_index_map(
    weights: &[Rational],
    kind: IndexKind,
    cfg: &EngineConfig,
) -> Result<Vec<Rational>> {
    check_simplex(weights)?;
    let system = VotingSystem::strict_majority(weights.to_vec())?;
    let index = indices::index(&system, kind, Engine::Auto, cfg)?;
    debug_assert!(index.is_well_formed());
    Ok(index.values)
}

pub fn is_fixed_point(weights: &[Rational], kind: IndexKind, cfg: &EngineConfig) -> Result<bool> {
    Ok(apply_index_map(weights, kind, cfg)? == weights)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Outcome {
    /// `states[state]` maps to itself.
    #[serde(rename = "fixed")]
    FixedPoint { state: usize },
    /// The map re-entered `states[entry]`; the cycle has `length` states.
    Cycle { entry: usize, length: usize },
    #[serde(rename = "max_iters")]
    MaxIterationsReached,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub kind: IndexKind,
    #[serde(with = "serde_text::nested")]
    pub states: Vec<Vec<Rational>>,
    pub outcome: Outcome,
}

impl IterationTrace {
    pub fn last(&self) -> &[Rational] {
        self.states
            .last()
            .expect("a trace holds its starting state")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("traces always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("trace json: {e}")))
    }
}

/// Applies the index map until a state repeats or `max_iters` applications
/// have been made. A fixed point is not appended twice.
pub fn iterate(
    weights: &[Rational],
    kind: IndexKind,
    max_iters: usize,
    cfg: &EngineConfig,
) -> Result<IterationTrace> {
    if max_iters == 0 {
        return Err(Error::InvalidInput("max_iters must be at least 1".into()));
    }
    check_simplex(weights)?;
    let mut states = vec![weights.to_vec()];
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::from([(weights.to_vec(), 0)]);
    for _ in 0..max_iters {
        let current = states.len() - 1;
        let next = apply_index_map(&states[current], kind, cfg)?;
        match seen.get(&next) {
            Some(&entry) if entry == current => {
                return Ok(IterationTrace {
                    kind,
                    states,
                    outcome: Outcome::FixedPoint { state: current },
                })
            }
            Some(&entry) => {
                return Ok(IterationTrace {
                    kind,
                    outcome: Outcome::Cycle {
                        entry,
                        length: states.len() - entry,
                    },
                    states,
                })
            }
            None => {
                seen.insert(next.clone(), states.len());
                states.push(next);
            }
        }
    }
    Ok(IterationTrace {
        kind,
        states,
        outcome: Outcome::MaxIterationsReached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn rats(pairs: &[(i64, i64)]) -> Vec<Rational> {
        pairs.iter().map(|&(p, q)| ratio(p, q)).collect()
    }

    #[test]
    fn map_examples() {
        let start = rats(&[(1, 2), (1, 4), (1, 4)]);
        let once = apply_index_map(&start, IndexKind::ShapleyShubik, &cfg()).unwrap();
        assert_eq!(once, rats(&[(2, 3), (1, 6), (1, 6)]));
        let twice = apply_index_map(&once, IndexKind::ShapleyShubik, &cfg()).unwrap();
        assert_eq!(twice, vec![int(1), int(0), int(0)]);
        let thirds = vec![ratio(1, 3); 3];
        for kind in [IndexKind::Banzhaf, IndexKind::ShapleyShubik] {
            assert_eq!(apply_index_map(&thirds, kind, &cfg()).unwrap(), thirds);
        }
        assert!(apply_index_map(&rats(&[(1, 2), (1, 4)]), IndexKind::Banzhaf, &cfg()).is_err());
    }

    #[test]
    fn trace_examples() {
        let trace = iterate(
            &rats(&[(1, 2), (1, 4), (1, 4)]),
            IndexKind::ShapleyShubik,
            10,
            &cfg(),
        )
        .unwrap();
        assert_eq!(
            trace.states,
            vec![
                rats(&[(1, 2), (1, 4), (1, 4)]),
                rats(&[(2, 3), (1, 6), (1, 6)]),
                vec![int(1), int(0), int(0)],
            ]
        );
        assert_eq!(trace.outcome, Outcome::FixedPoint { state: 2 });

        let mut point = vec![ratio(1, 3)];
        point.extend(std::iter::repeat_n(ratio(2, 15), 5));
        let trace = iterate(&point, IndexKind::ShapleyShubik, 5, &cfg()).unwrap();
        assert_eq!(trace.states.len(), 1);
        assert_eq!(trace.outcome, Outcome::FixedPoint { state: 0 });

        let trace = iterate(
            &rats(&[(1, 2), (1, 4), (1, 4)]),
            IndexKind::ShapleyShubik,
            1,
            &cfg(),
        )
        .unwrap();
        assert_eq!(trace.outcome, Outcome::MaxIterationsReached);
        assert!(iterate(&point, IndexKind::Banzhaf, 0, &cfg()).is_err());
    }

    #[test]
    fn uniform_vectors_are_fixed() {
        for n in 1..=9 {
            let uniform = vec![ratio(1, n); n as usize];
            for kind in [IndexKind::Banzhaf, IndexKind::ShapleyShubik] {
                let trace = iterate(&uniform, kind, 3, &cfg()).unwrap();
                assert_eq!(trace.outcome, Outcome::FixedPoint { state: 0 });
            }
        }
    }

    #[test]
    fn trace_json_round_trip() {
        let trace = iterate(
            &rats(&[(1, 2), (1, 4), (1, 4)]),
            IndexKind::ShapleyShubik,
            10,
            &cfg(),
        )
        .unwrap();
        let json = trace.to_json();
        assert_eq!(
            json,
            r#"{"kind":"shapley_shubik","states":[["1/2","1/4","1/4"],["2/3","1/6","1/6"],["1","0","0"]],"outcome":{"type":"fixed","state":2}}"#
        );
        assert_eq!(IterationTrace::from_json(&json).unwrap(), trace);
    }

    fn arb_simplex() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec(0i64..12, 1..=8)
            .prop_filter("not all zero", |ws| ws.iter().any(|&w| w > 0))
            .prop_map(|ws| {
                crate::system::normalize(&ws.iter().map(|&w| int(w)).collect::<Vec<_>>()).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn map_conserves_total(ws in arb_simplex()) {
            for kind in [IndexKind::Banzhaf, IndexKind::ShapleyShubik] {
                let out = apply_index_map(&ws, kind, &cfg()).unwrap();
                prop_assert!(out.iter().fold(Rational::zero(), |a, v| a + v).is_one());
                prop_assert!(out.iter().all(|v| !v.is_negative() && *v <= Rational::one()));
            }
        }

        #[test]
        fn iteration_is_deterministic(ws in arb_simplex()) {
            let a = iterate(&ws, IndexKind::Banzhaf, 20, &EngineConfig::with_workers(1)).unwrap();
            let b = iterate(&ws, IndexKind::Banzhaf, 20, &EngineConfig::with_workers(3)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
