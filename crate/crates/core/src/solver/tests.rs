use std::time::Duration;

use num_bigint::BigInt;

use super::*;
use crate::combinatorics::{all_ksets, KSet};
use crate::Rational;

fn family(n: u32, k: u32, sets: &[&[u32]]) -> Family {
    let sets: Vec<KSet> = sets
        .iter()
        .map(|s| KSet::from_elements(n, s).unwrap())
        .collect();
    Family::from_sets(n, k, sets).unwrap()
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn small_values() {
    for (n, k, s, want) in [
        (6, 2, 3, 10u64),
        (8, 2, 4, 21),
        (7, 2, 3, 11),
        (7, 3, 2, 15),
        (6, 3, 2, 10),
        (5, 2, 2, 4),
    ] {
        let p = Problem::max_size(n, k, s);
        let r = solve_max_family(&p).unwrap();
        assert_eq!(r.optimum_u64(), want, "f({n},{k},{s})");
        assert!(r.proven_optimal);
        assert!(certify(&p, &r).ok());

        let lc = solve_max_family(&p.clone().left_compressed()).unwrap();
        assert_eq!(lc.optimum_u64(), want, "left-compressed f({n},{k},{s})");
        assert!(crate::shifting::is_left_compressed(&lc.witnesses[0]));
    }
}

#[test]
fn without_seed_the_search_still_finds_the_optimum() {
    let mut p = Problem::max_size(7, 2, 3);
    p.seed_incumbent = false;
    assert_eq!(solve_max_family(&p).unwrap().optimum_u64(), 11);
}

#[test]
fn kleitman_optima_are_the_avoiding_families() {
    let optima = enumerate_optima(&Problem::max_size(6, 2, 3)).unwrap();
    let mut expected: Vec<Family> = (1..=6)
        .map(|x| kleitman_extremal(6, 2, x).unwrap())
        .collect();
    expected.sort_by(|a, b| a.members().cmp(b.members()));
    assert_eq!(optima, expected);
}

#[test]
fn intersecting_optima_at_n_equal_2k() {
    // one set from each complementary pair, every choice intersecting
    let brute = |n: u32, k: u32| {
        let sets = all_ksets(n, k);
        let want = sets.len() / 2;
        let mut count = 0;
        for mask in 0u64..(1 << sets.len()) {
            if mask.count_ones() as usize != want {
                continue;
            }
            let chosen: Vec<u64> = (0..sets.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| sets[i])
                .collect();
            let intersecting = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| a & b != 0));
            count += usize::from(intersecting);
        }
        count
    };
    assert_eq!(
        enumerate_optima(&Problem::max_size(4, 2, 2)).unwrap().len(),
        brute(4, 2)
    );
    assert_eq!(brute(4, 2), 8);
    assert_eq!(
        enumerate_optima(&Problem::max_size(6, 3, 2)).unwrap().len(),
        brute(6, 3)
    );
    assert_eq!(brute(6, 3), 1024);
}

#[test]
fn too_many_optima_is_an_error() {
    let err = enumerate_optima(&Problem::max_size(8, 4, 2)).unwrap_err();
    assert!(matches!(err, EmcError::CapExceeded(_)));
}

#[test]
fn first_witness_is_canonical() {
    for (n, k, s) in [(6, 2, 3), (7, 2, 3), (6, 3, 2), (7, 3, 2)] {
        let p = Problem::max_size(n, k, s);
        let best = solve_max_family(&p).unwrap();
        let all = solve(&p, true).unwrap();
        assert_eq!(best.witnesses.len(), 1);
        assert_eq!(best.witnesses[0], all.witnesses[0]);
        assert!(all
            .witnesses
            .windows(2)
            .all(|w| w[0].members() < w[1].members()));
    }
}

#[test]
fn deterministic_across_workers() {
    for p in [
        Problem::max_size(8, 2, 4),
        Problem::max_size(7, 2, 3),
        Problem::max_size(10, 3, 3).left_compressed(),
    ] {
        let runs: Vec<SolverResult> = [1, 2, 8]
            .iter()
            .map(|&w| solve_max_family(&p.clone().with_workers(w)).unwrap())
            .collect();
        for r in &runs[1..] {
            assert_eq!(r.optimum, runs[0].optimum);
            assert_eq!(r.witnesses, runs[0].witnesses);
            assert_eq!(r.nodes_explored, runs[0].nodes_explored);
        }
    }
    let mut p = Problem::max_size(7, 2, 3);
    let counts: Vec<u64> = [1, 4, 12]
        .iter()
        .map(|&d| {
            p.split_depth = d;
            solve_max_family(&p).unwrap().optimum_u64()
        })
        .collect();
    assert_eq!(counts, vec![11, 11, 11]);
}

#[test]
fn degree_constraints() {
    let p = Problem::max_size(6, 2, 3).with_min_degree(1);
    let r = solve_max_family(&p).unwrap();
    assert!(r.optimum_u64() < 10);
    assert!(certify(&p, &r).ok());
    assert!(r.witnesses[0].degree_profile().min_degree >= 1);

    let p = Problem::max_size(6, 2, 3).with_max_degree(2);
    let r = solve_max_family(&p).unwrap();
    assert!(r.witnesses[0].degree_profile().max_degree <= 2);
    assert!(certify(&p, &r).ok());

    let err = solve_max_family(&Problem::max_size(6, 2, 3).with_min_degree(6)).unwrap_err();
    assert!(matches!(err, EmcError::Infeasible(_)));
}

#[test]
fn forced_and_forbidden_members() {
    let matching = family(6, 2, &[&[1, 2], &[3, 4], &[5, 6]]);
    let mut p = Problem::max_size(6, 2, 3);
    p.forced = Some(matching);
    assert!(matches!(
        solve_max_family(&p).unwrap_err(),
        EmcError::Infeasible(_)
    ));

    let mut p = Problem::max_size(6, 2, 3);
    p.forced = Some(family(6, 2, &[&[1, 2], &[3, 4]]));
    let r = solve_max_family(&p).unwrap();
    assert!(r.witnesses[0].contains(KSet::from_elements(6, &[1, 2]).unwrap()));
    assert!(certify(&p, &r).ok());

    let mut p = Problem::max_size(6, 2, 3);
    p.forbidden = Some(family(6, 2, &[&[1, 2]]));
    let r = solve_max_family(&p).unwrap();
    assert_eq!(r.optimum_u64(), 10);
    assert!(!r.witnesses[0].contains(KSet::from_elements(6, &[1, 2]).unwrap()));

    let mut p = Problem::max_size(6, 2, 3);
    p.forced = Some(family(6, 2, &[&[1, 2]]));
    p.forbidden = Some(family(6, 2, &[&[1, 2]]));
    assert!(matches!(
        solve_max_family(&p).unwrap_err(),
        EmcError::InvalidParameters(_)
    ));
}

#[test]
fn validation() {
    assert!(matches!(
        solve_max_family(
            &Problem::max_size(6, 2, 3)
                .left_compressed()
                .with_min_degree(1)
        )
        .unwrap_err(),
        EmcError::InvalidParameters(_)
    ));
    assert!(matches!(
        solve_max_family(&Problem::max_size(40, 20, 2)).unwrap_err(),
        EmcError::CapExceeded(_)
    ));
    assert!(matches!(
        solve_max_family(&Problem::max_size(6, 2, 1)).unwrap_err(),
        EmcError::InvalidParameters(_)
    ));
    assert!(solve_max_family(&Problem::min_disjoint_pairs(6, 2, 3, 2)).is_err());
}

#[test]
fn budgets_truncate_without_lying() {
    let mut p = Problem::max_size(9, 2, 4);
    p.node_budget = Some(50);
    let r = solve_max_family(&p).unwrap();
    assert!(!r.proven_optimal);
    assert!(p.admits(&r.witnesses[0]));
    assert_eq!(r.witnesses[0].len() as u64, r.optimum_u64());

    let mut p = Problem::max_size(9, 2, 4);
    p.time_budget = Some(Duration::ZERO);
    p.node_budget = Some(5000);
    assert!(!solve_max_family(&p).unwrap().proven_optimal);
    assert!(enumerate_optima(&p).is_err());
}

#[test]
fn min_disjoint_pairs_values() {
    for (n, k, size, cap, want) in [
        (6, 2, 5, 5, 0u64),
        (6, 2, 5, 4, 2),
        (6, 2, 3, 1, 3),
        (6, 2, 4, 2, 2),
        (5, 2, 10, 4, 15),
    ] {
        let p = Problem::min_disjoint_pairs(n, k, size, cap);
        let r = solve_min_disjoint_pairs(&p).unwrap();
        assert_eq!(r.optimum_u64(), want, "({n},{k},{size},{cap})");
        assert!(certify(&p, &r).ok());
        let again = solve_min_disjoint_pairs(&p.clone().with_workers(3)).unwrap();
        assert_eq!(again.witnesses, r.witnesses);
        assert_eq!(again.nodes_explored, r.nodes_explored);
    }
    let too_big = Problem::min_disjoint_pairs(6, 2, 16, 5);
    assert!(matches!(
        solve_min_disjoint_pairs(&too_big).unwrap_err(),
        EmcError::Infeasible(_)
    ));
    let cramped = Problem::min_disjoint_pairs(6, 2, 4, 1);
    assert!(matches!(
        solve_min_disjoint_pairs(&cramped).unwrap_err(),
        EmcError::Infeasible(_)
    ));
}

#[test]
fn min_disjoint_pairs_all_optima() {
    // 3 edges, no two disjoint, max degree 2: only triangles
    let p = Problem::min_disjoint_pairs(5, 2, 3, 2);
    let r = solve(&p, true).unwrap();
    assert_eq!(r.optimum_u64(), 0);
    assert_eq!(r.witnesses.len(), 10);
}

#[test]
fn kleitman_reports() {
    let r = kleitman_check(3, 2, 1).unwrap();
    assert!(r.pass);
    assert_eq!(r.optima, 6);
    assert_eq!(r.optimum, BigCount::from(10u32));

    let r = kleitman_check(4, 2, 2).unwrap();
    assert!(r.pass);
    assert_eq!(r.optima, 8);
    assert_eq!(r.optimum, BigCount::from(21u32));

    let r = kleitman_check(2, 2, 1).unwrap();
    assert!(r.value_matches);
    assert_eq!(r.optimum, BigCount::from(3u32));
    assert_eq!(r.optima, 8);
    assert!(!r.unique);
    assert!(!r.pass);
}

#[test]
fn drop_ratio_reports() {
    for (s, k, f, ratio, gap) in [
        (3, 2, 11u32, q(11, 21), q(1, 7)),
        (2, 2, 4, q(2, 5), q(1, 10)),
        (2, 3, 15, q(3, 7), q(1, 14)),
    ] {
        let r = drop_ratio_check(s, k, 1).unwrap();
        assert_eq!(r.optimum, BigCount::from(f));
        assert_eq!(r.ratio, ratio);
        assert_eq!(r.gap, gap);
        assert!(r.pass);
    }
}

#[test]
fn emc_reports() {
    for (n, k, s) in [(9, 3, 3), (10, 3, 3), (7, 2, 3), (12, 2, 3)] {
        let r = emc_consistency(n, k, s, 1).unwrap();
        assert!(r.consistent, "({n},{k},{s})");
        assert!(crate::shifting::is_left_compressed(&r.witness));
    }
    assert!(emc_consistency(5, 2, 3, 1).is_err());
    let json = serde_json::to_value(emc_consistency(7, 2, 3, 1).unwrap()).unwrap();
    assert_eq!(json["optimum"], "11");
    assert_eq!(json["witness"]["sets"].as_array().unwrap().len(), 11);
}
