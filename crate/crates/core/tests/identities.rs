//! Counting identities checked against independently computed values.

use bbp_core::solvers::{coeff_next, coeff_seed, count_t, count_valid, Double, ExactField, ProblemInstance};
use bbp_core::stirling::{restricted_stirling2, stirling2};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn pascal(max_n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                let left = if k > 0 { prev[k - 1].clone() } else { BigUint::zero() };
                left + prev.get(k).cloned().unwrap_or_default()
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Ordered sequences of `k` nonempty blocks of size at most `r` covering `n` labelled items,
/// built by choosing the first block: `L(n, k) = sum_j C(n, j) L(n - j, k - 1)`.
fn ordered_blocks(max_n: usize, r: usize) -> Vec<Vec<BigUint>> {
    let c = pascal(max_n);
    let mut l = vec![vec![BigUint::zero(); max_n + 1]; max_n + 1];
    l[0][0] = BigUint::one();
    for n in 1..=max_n {
        for k in 1..=n {
            l[n][k] = (1..=r.min(n)).map(|j| &c[n][j] * &l[n - j][k - 1]).sum();
        }
    }
    l
}

fn factorial(k: usize) -> BigUint {
    (1..=k).map(BigUint::from).product()
}

#[test]
fn occupancy_counts_factor_through_restricted_stirling() {
    let c = pascal(12);
    for r in 1..=4 {
        let l = ordered_blocks(14, r);
        for m in 1..=12usize {
            for n in 0..=14usize {
                for k in 0..=m.min(n) {
                    let t = count_t(m as i64, n as i64, k as i64, r as i64);
                    let via_stirling = &c[m][k] * factorial(k) * restricted_stirling2(n, k as i64, r);
                    assert_eq!(t, via_stirling, "m={m} n={n} k={k} r={r}");
                    assert_eq!(t, &c[m][k] * &l[n][k], "m={m} n={n} k={k} r={r}");
                }
            }
        }
    }
}

#[test]
fn restricted_stirling_equals_classic_without_a_binding_cap() {
    for n in 0..=12usize {
        for k in 0..=n as i64 {
            for r in n.max(1)..=n + 2 {
                assert_eq!(restricted_stirling2(n, k, r), stirling2(n, k), "n={n} k={k} r={r}");
            }
        }
    }
}

#[test]
fn worked_partition_counts() {
    assert_eq!(restricted_stirling2(4, 2, 3), BigUint::from(7u32));
    assert_eq!(restricted_stirling2(5, 2, 3), BigUint::from(10u32));
    assert_eq!(restricted_stirling2(5, 3, 3), BigUint::from(25u32));
    assert_eq!(stirling2(4, 2), BigUint::from(7u32));
}

/// `C(n-1, r) (m-1)^(n-1-r) / m^(n-1)` evaluated directly.
fn closed_form(m: usize, n: usize, r: usize) -> BigRational {
    let c = &pascal(n - 1)[n - 1][r];
    let num = BigInt::from(c.clone()) * BigInt::from(m - 1).pow((n - 1 - r) as u32);
    BigRational::new(num, BigInt::from(m).pow((n - 1) as u32))
}

#[test]
fn coefficient_chain_matches_closed_form() {
    for m in 1..=20 {
        for r in 1..=5 {
            let mut exact = coeff_seed(&ExactField, m, r);
            let mut double = coeff_seed(&Double, m, r);
            assert_eq!(exact, closed_form(m, r + 1, r), "m={m} r={r}");
            for n in r + 2..=60 {
                exact = coeff_next(&ExactField, &exact, m, n, r);
                double = coeff_next(&Double, &double, m, n, r);
                let truth = closed_form(m, n, r);
                assert_eq!(exact, truth, "m={m} n={n} r={r}");
                let t = truth.to_f64().unwrap();
                assert!((double - t).abs() <= 1e-13 * t.max(f64::MIN_POSITIVE), "m={m} n={n} r={r}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valid_count_is_the_sum_over_occupied_days(m in 1usize..=20, n in 0usize..=30, r in 1usize..=6) {
        let total: BigUint = (0..=m.min(n)).map(|k| count_t(m as i64, n as i64, k as i64, r as i64)).sum();
        prop_assert_eq!(total, count_valid(ProblemInstance::new(m, n, r).unwrap()));
    }

    #[test]
    fn every_assignment_occupies_some_number_of_days(m in 1usize..=15, n in 0usize..=15) {
        // With the cap at n nothing is excluded, so the T sum is all m^n assignments.
        let r = n.max(1) as i64;
        let total: BigUint = (0..=m.min(n)).map(|k| count_t(m as i64, n as i64, k as i64, r)).sum();
        prop_assert_eq!(total, BigUint::from(m).pow(n as u32));
    }

    #[test]
    fn stirling_row_sums_are_bell_numbers(n in 0usize..=25) {
        // Bell numbers by the triangle B(n+1) = sum_k C(n, k) B(k).
        let c = pascal(n);
        let mut bell = vec![BigUint::one()];
        for i in 0..n {
            bell.push((0..=i).map(|k| &c[i][k] * &bell[k]).sum());
        }
        let row: BigUint = (0..=n as i64).map(|k| stirling2(n, k)).sum();
        prop_assert_eq!(row, bell[n].clone());
    }
}
