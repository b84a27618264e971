use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::rational::{int, ratio};
use crate::system::{Coalition, QuotaMode};

fn ints(ws: &[i64]) -> Vec<Rational> {
    ws.iter().map(|&w| int(w)).collect()
}

fn ge(quota: i64, ws: &[i64]) -> VotingSystem {
    VotingSystem::new(int(quota), QuotaMode::MeetsOrExceeds, ints(ws)).unwrap()
}

fn divisor6() -> VotingSystem {
    VotingSystem::new(ratio(13, 2), QuotaMode::MeetsOrExceeds, ints(&[6, 3, 2, 1])).unwrap()
}

fn rats(pairs: &[(i64, i64)]) -> Vec<Rational> {
    pairs.iter().map(|&(p, q)| ratio(p, q)).collect()
}

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

/// Swing counts straight from the definition, on rational weights.
fn brute_force_swings(sys: &VotingSystem) -> Vec<u64> {
    let n = sys.players();
    let mut counts = vec![0; n];
    for mask in 0u128..(1 << n) {
        let c = Coalition::from_mask(mask);
        if !sys.is_winning(&c).unwrap() {
            continue;
        }
        for &i in c.members() {
            if !sys.is_winning(&c.without(i)).unwrap() {
                counts[i] += 1;
            }
        }
    }
    counts
}

#[test]
fn banzhaf_examples() {
    let (counts, index) = banzhaf_enum(&ge(3, &[2, 1, 1]), &cfg()).unwrap();
    assert_eq!(
        counts.per_player,
        vec![BigUint::from(3u8), BigUint::from(1u8), BigUint::from(1u8)]
    );
    assert_eq!(index.values, rats(&[(3, 5), (1, 5), (1, 5)]));

    let (_, dictator) = banzhaf_enum(&ge(3, &[3, 1, 1]), &cfg()).unwrap();
    assert_eq!(dictator.values, ints(&[1, 0, 0]));

    let expected = rats(&[(7, 10), (1, 10), (1, 10), (1, 10)]);
    assert_eq!(
        banzhaf_enum(&divisor6(), &cfg()).unwrap().1.values,
        expected
    );
    assert_eq!(banzhaf_dp(&divisor6(), &cfg()).unwrap().1.values, expected);
}

#[test]
fn banzhaf_degenerate_when_nobody_is_critical() {
    let sys = ge(2, &[1]);
    assert!(matches!(
        banzhaf_enum(&sys, &cfg()),
        Err(Error::DegenerateSystem(_))
    ));
    assert!(matches!(
        banzhaf_dp(&sys, &cfg()),
        Err(Error::DegenerateSystem(_))
    ));
    assert!(matches!(
        ss_dp(&sys, &cfg()),
        Err(Error::DegenerateSystem(_))
    ));
    assert!(matches!(
        ss_enum_perms(&sys),
        Err(Error::DegenerateSystem(_))
    ));
    assert!(matches!(
        ss_enum_subsets(&sys, &cfg()),
        Err(Error::DegenerateSystem(_))
    ));
}

#[test]
fn ss_permutation_examples() {
    let (counts, index) = ss_enum_perms(&ge(3, &[2, 1, 1])).unwrap();
    assert_eq!(counts.total, BigUint::from(6u8));
    assert_eq!(index.values, rats(&[(2, 3), (1, 6), (1, 6)]));

    let strict = VotingSystem::strict_majority(rats(&[(1, 2), (1, 4), (1, 4)])).unwrap();
    assert_eq!(
        ss_enum_perms(&strict).unwrap().1.values,
        rats(&[(2, 3), (1, 6), (1, 6)])
    );

    let expected = rats(&[(3, 4), (1, 12), (1, 12), (1, 12)]);
    assert_eq!(ss_enum_perms(&divisor6()).unwrap().1.values, expected);
    assert_eq!(ss_dp(&divisor6(), &cfg()).unwrap().values, expected);
}

#[test]
fn ss_subset_examples() {
    assert_eq!(
        ss_enum_subsets(&ge(3, &[2, 1, 1]), &cfg()).unwrap().values,
        rats(&[(2, 3), (1, 6), (1, 6)])
    );
    assert_eq!(
        ss_enum_subsets(&ge(2, &[1, 1, 1]), &cfg()).unwrap().values,
        vec![ratio(1, 3); 3]
    );
    assert_eq!(
        ss_enum_subsets(&ge(3, &[3, 1, 1]), &cfg()).unwrap().values,
        ints(&[1, 0, 0])
    );
    assert_eq!(
        ss_dp(&ge(3, &[1, 1, 1, 1, 1]), &cfg()).unwrap().values,
        vec![ratio(1, 5); 5]
    );
}

#[test]
fn permutation_cap_is_enforced() {
    let sys = ge(5, &[1; 10]);
    assert!(matches!(
        ss_enum_perms(&sys),
        Err(Error::TooManyPlayers { .. })
    ));
    let small_cap = EngineConfig {
        enum_cap: 4,
        workers: None,
    };
    assert!(matches!(
        banzhaf_enum(&ge(3, &[1; 5]), &small_cap),
        Err(Error::TooManyPlayers { .. })
    ));
}

#[test]
fn winning_counts() {
    assert_eq!(
        count_winning(&divisor6(), &cfg()).unwrap(),
        BigUint::from(7u8)
    );
    assert_eq!(
        count_winning_enum(&divisor6(), &cfg()).unwrap(),
        BigUint::from(7u8)
    );
    assert_eq!(
        count_winning(&ge(1, &[1]), &cfg()).unwrap(),
        BigUint::from(1u8)
    );
    let strict = VotingSystem::strict_majority(rats(&[(1, 2), (1, 4), (1, 4)])).unwrap();
    assert_eq!(count_winning_dp(&strict).unwrap(), BigUint::from(3u8));
    assert_eq!(
        count_winning_enum(&strict, &cfg()).unwrap(),
        BigUint::from(3u8)
    );
    assert_eq!(
        count_winning_dp(&ge(100, &[1, 2])).unwrap(),
        BigUint::zero()
    );
}

#[test]
fn zero_weight_players_are_dummies() {
    let sys =
        VotingSystem::strict_majority(rats(&[(1, 2), (0, 1), (1, 4), (1, 4), (0, 1)])).unwrap();
    let bz = banzhaf_dp(&sys, &cfg()).unwrap().1;
    let ss = ss_dp(&sys, &cfg()).unwrap();
    for v in [&bz, &ss] {
        assert!(v.values[1].is_zero() && v.values[4].is_zero());
    }
    assert_eq!(bz, banzhaf_enum(&sys, &cfg()).unwrap().1);
    assert_eq!(ss, ss_enum_perms(&sys).unwrap().1);
    assert_eq!(ss.values, rats(&[(2, 3), (0, 1), (1, 6), (1, 6), (0, 1)]));
}

#[test]
fn worker_count_does_not_change_results() {
    let sys = ge(40, &[17, 13, 11, 9, 8, 7, 5, 4, 3, 2, 2, 1, 1, 1]);
    let one = EngineConfig::with_workers(1);
    let many = EngineConfig::with_workers(4);
    assert_eq!(
        banzhaf_enum(&sys, &one).unwrap(),
        banzhaf_enum(&sys, &many).unwrap()
    );
    assert_eq!(
        banzhaf_dp(&sys, &one).unwrap(),
        banzhaf_dp(&sys, &many).unwrap()
    );
    assert_eq!(ss_dp(&sys, &one).unwrap(), ss_dp(&sys, &many).unwrap());
    assert_eq!(
        ss_enum_subsets(&sys, &one).unwrap(),
        ss_enum_subsets(&sys, &many).unwrap()
    );
}

#[test]
fn auto_engine_handles_large_weights() {
    // Scaled threshold far beyond the DP budget: auto falls back to enumeration.
    let huge = VotingSystem::new(
        int(1 << 40),
        QuotaMode::MeetsOrExceeds,
        ints(&[1 << 40, 1 << 39, 1 << 39]),
    )
    .unwrap();
    assert!(matches!(
        banzhaf_dp(&huge, &cfg()),
        Err(Error::WeightsTooLarge(_))
    ));
    let (_, v) = banzhaf(&huge, Engine::Auto, &cfg()).unwrap();
    assert_eq!(v.values, rats(&[(3, 5), (1, 5), (1, 5)]));
}

fn arb_int_system(max_players: usize) -> impl Strategy<Value = VotingSystem> {
    (
        prop::collection::vec(0i64..=50, 1..=max_players),
        any::<bool>(),
        0u32..1000,
    )
        .prop_map(|(ws, strict, q)| {
            let total: i64 = ws.iter().sum();
            let quota = 1 + (q as i64 * total.max(1)) / 1000;
            let mode = if strict {
                QuotaMode::StrictlyExceeds
            } else {
                QuotaMode::MeetsOrExceeds
            };
            VotingSystem::new(int(quota), mode, ints(&ws)).unwrap()
        })
}

fn same<T: PartialEq + std::fmt::Debug>(
    a: Result<T>,
    b: Result<T>,
) -> std::result::Result<(), TestCaseError> {
    match (a, b) {
        (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
        (Err(Error::DegenerateSystem(_)), Err(Error::DegenerateSystem(_))) => {}
        (x, y) => prop_assert!(false, "engines diverged: {:?} vs {:?}", x, y),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn enumeration_matches_definition(sys in arb_int_system(8)) {
        let brute = brute_force_swings(&sys);
        if let Ok((counts, _)) = banzhaf_enum(&sys, &cfg()) {
            let got: Vec<BigUint> = brute.iter().map(|&c| BigUint::from(c)).collect();
            prop_assert_eq!(counts.per_player, got);
        } else {
            prop_assert!(brute.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn dp_matches_enumeration(sys in arb_int_system(12)) {
        same(banzhaf_dp(&sys, &cfg()), banzhaf_enum(&sys, &cfg()))?;
        same(ss_dp(&sys, &cfg()), ss_enum_subsets(&sys, &cfg()))?;
        prop_assert_eq!(count_winning_dp(&sys).unwrap(), count_winning_enum(&sys, &cfg()).unwrap());
    }

    #[test]
    fn subsets_match_permutations(sys in arb_int_system(7)) {
        same(ss_enum_subsets(&sys, &cfg()), ss_enum_perms(&sys).map(|(_, v)| v))?;
    }

    #[test]
    fn vectors_are_normalized_and_symmetric(sys in arb_int_system(10)) {
        for kind in [IndexKind::Banzhaf, IndexKind::ShapleyShubik] {
            if let Ok(v) = index(&sys, kind, Engine::Dp, &cfg()) {
                prop_assert!(v.is_well_formed());
                let ws = sys.weights();
                for i in 0..ws.len() {
                    if ws[i].is_zero() {
                        prop_assert!(v.values[i].is_zero());
                    }
                    for j in 0..ws.len() {
                        if ws[i] == ws[j] {
                            prop_assert_eq!(&v.values[i], &v.values[j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn scale_invariance(sys in arb_int_system(9), (p, q) in (1i64..20, 1i64..20)) {
        let factor = ratio(p, q);
        let scaled = VotingSystem::new(
            sys.quota() * &factor,
            sys.mode(),
            sys.weights().iter().map(|w| w * &factor).collect(),
        ).unwrap();
        for engine in [Engine::Enumeration, Engine::Dp] {
            for kind in [IndexKind::Banzhaf, IndexKind::ShapleyShubik] {
                same(index(&sys, kind, engine, &cfg()), index(&scaled, kind, engine, &cfg()))?;
            }
        }
    }

    #[test]
    fn relabeling_permutes_indices(sys in arb_int_system(9), seed in any::<u64>()) {
        let n = sys.players();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted = sys.with_weights_permuted(&order);
        for kind in [IndexKind::Banzhaf, IndexKind::ShapleyShubik] {
            if let (Ok(a), Ok(b)) = (index(&sys, kind, Engine::Dp, &cfg()), index(&permuted, kind, Engine::Dp, &cfg())) {
                for (pos, &orig) in order.iter().enumerate() {
                    prop_assert_eq!(&b.values[pos], &a.values[orig]);
                }
            }
        }
    }
}
