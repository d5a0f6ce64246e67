//! Every public per-instance entry point against raw enumeration of all `m^n` assignments.

use bbp_core::solvers::{
    count_bruteforce, count_valid, count_valid_stirling, prob_bruteforce, prob_counting, prob_day_recurrence,
    prob_direct, prob_stirling, solve, AlgorithmId, Mode, ProblemInstance, DEFAULT_BRUTE_LIMIT,
};
use bbp_core::ratio;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Number of the `m^n` birthday assignments with no day above `r`.
fn enumerate(m: usize, n: usize, r: usize) -> (u64, u64) {
    let total = (m as u64).pow(n as u32);
    let mut valid = 0;
    let mut loads = vec![0usize; m];
    for code in 0..total {
        loads.iter_mut().for_each(|l| *l = 0);
        let mut c = code;
        for _ in 0..n {
            loads[(c % m as u64) as usize] += 1;
            c /= m as u64;
        }
        if loads.iter().all(|&l| l <= r) {
            valid += 1;
        }
    }
    (valid, total)
}

fn inst(m: usize, n: usize, r: usize) -> ProblemInstance {
    ProblemInstance::new(m, n, r).unwrap()
}

#[test]
fn entry_points_match_enumeration() {
    for m in 1..=4 {
        for n in 0..=7 {
            for r in 1..=3 {
                let i = inst(m, n, r);
                let (valid, total) = enumerate(m, n, r);
                let truth = ratio(valid, total).unwrap();
                assert_eq!(prob_day_recurrence(i), truth, "day {i}");
                assert_eq!(prob_counting(i), truth, "counting {i}");
                assert_eq!(prob_stirling(i), truth, "stirling {i}");
                assert_eq!(prob_direct(i, Mode::Exact).exact.unwrap(), truth, "direct {i}");
                assert_eq!(prob_bruteforce(i).unwrap(), truth, "brute {i}");
                for algo in AlgorithmId::ALL {
                    assert_eq!(solve(i, algo, Mode::Exact).unwrap().exact.unwrap(), truth, "{algo} {i}");
                }

                let valid = BigUint::from(valid);
                assert_eq!(count_valid(i), valid);
                assert_eq!(count_valid_stirling(i), valid);
                assert_eq!(count_bruteforce(i, DEFAULT_BRUTE_LIMIT).unwrap(), valid);
            }
        }
    }
}

#[test]
fn classic_birthday_numbers() {
    // 365 * 364 * ... * (365 - n + 1) / 365^n, computed directly.
    let falling = |n: u64| (0..n).map(|i| BigUint::from(365 - i)).product::<BigUint>();
    for n in [1u64, 10, 22, 23, 40] {
        let expected = ratio(falling(n), BigUint::from(365u32).pow(n as u32)).unwrap();
        let i = inst(365, n as usize, 1);
        for algo in [AlgorithmId::Direct, AlgorithmId::Stirling, AlgorithmId::Counting] {
            assert_eq!(solve(i, algo, Mode::Exact).unwrap().exact.unwrap(), expected, "{algo} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrences_agree(m in 1usize..=14, n in 0usize..=20, r in 1usize..=5) {
        let i = inst(m, n, r);
        let direct = prob_direct(i, Mode::Exact).exact.unwrap();
        prop_assert_eq!(&prob_day_recurrence(i), &direct);
        prop_assert_eq!(&prob_counting(i), &direct);
        prop_assert_eq!(&prob_stirling(i), &direct);
    }

    #[test]
    fn oracle_agrees_when_small(m in 1usize..=6, n in 0usize..=9, r in 1usize..=4) {
        let i = inst(m, n, r);
        let (valid, total) = enumerate(m, n, r);
        prop_assert_eq!(prob_direct(i, Mode::Exact).exact.unwrap(), ratio(valid, total).unwrap());
    }
}
