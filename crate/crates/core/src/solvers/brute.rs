//! Reference oracle: enumerate occupancy vectors and sum multinomial coefficients.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::ProblemInstance;
use crate::arith::{BigCount, BinomialTable, ExactProbability};
use crate::error::{Deadline, Error, Result};

/// Largest number of bounded compositions the oracle will enumerate by default.
pub const DEFAULT_BRUTE_LIMIT: u64 = 10_000_000;

/// Number of `(k_1..k_m)` with `sum = n` and every `k_i <= r`.
pub fn count_bounded_compositions(m: usize, n: usize, r: usize) -> BigCount {
    // ways[j]: compositions of j into the days seen so far.
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for _ in 0..m {
        let mut next = vec![BigUint::zero(); n + 1];
        for (j, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for k in 0..=r.min(n - j) {
                next[j + k] += w;
            }
        }
        ways = next;
    }
    ways.swap_remove(n)
}

pub fn prob_bruteforce(inst: ProblemInstance) -> Result<ExactProbability> {
    prob_bruteforce_with_limit(inst, DEFAULT_BRUTE_LIMIT)
}

pub fn prob_bruteforce_with_limit(inst: ProblemInstance, limit: u64) -> Result<ExactProbability> {
    prob_with(inst, limit, &Deadline::NONE)
}

/// Valid assignment count by enumeration.
pub fn count_bruteforce(inst: ProblemInstance, limit: u64) -> Result<BigCount> {
    count_with(inst, limit, &Deadline::NONE)
}

pub(crate) fn prob_with(inst: ProblemInstance, limit: u64, deadline: &Deadline) -> Result<ExactProbability> {
    Ok(inst.prob_of_count(count_with(inst, limit, deadline)?))
}

pub(crate) fn count_with(inst: ProblemInstance, limit: u64, deadline: &Deadline) -> Result<BigCount> {
    let ProblemInstance { m, n, r } = inst;
    let total = count_bounded_compositions(m, n, r);
    if total.to_u64().is_none_or(|c| c > limit) {
        return Err(Error::TooLarge { count: total, limit });
    }
    let mut binom = BinomialTable::new(r);
    binom.ensure(n);

    // Depth-first over days. Each frame: next day, people left, product of
    // binomials C(left_before, k) chosen so far (the multinomial in factored form).
    let mut sum = BigUint::zero();
    let mut stack: Vec<(usize, usize, BigUint)> = vec![(0, n, BigUint::one())];
    let mut visited = 0u64;
    while let Some((day, left, weight)) = stack.pop() {
        visited += 1;
        if visited.is_multiple_of(4096) {
            deadline.check()?;
        }
        if left == 0 {
            sum += weight;
            continue;
        }
        if day == m {
            continue;
        }
        let days_after = m - day - 1;
        for k in 0..=r.min(left) {
            if left - k > days_after * r {
                continue;
            }
            stack.push((day + 1, left - k, &weight * binom.get(left, k as i64)));
        }
    }
    Ok(sum)
}
