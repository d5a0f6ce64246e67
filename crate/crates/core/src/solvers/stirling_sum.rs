//! Choose the `k` occupied days, label the blocks of a restricted set partition with them:
//! `N = sum_k C(m, k) k! {n brace k}_{<=r}`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::ProblemInstance;
use crate::arith::{binomial, factorial, BigCount, ExactProbability};
use crate::error::{unbounded, Deadline, Result};
use crate::stirling::StirlingTable;

/// Restricted Stirling table plus the sum over occupied days, reusable across `m`.
#[derive(Debug, Clone)]
pub struct StirlingSum {
    table: StirlingTable,
    r: usize,
}

impl StirlingSum {
    /// Covers every `n' <= max_n` with up to `max_k` occupied days.
    pub fn build(max_n: usize, max_k: usize, r: usize, deadline: &Deadline) -> Result<Self> {
        Ok(StirlingSum { table: StirlingTable::build(max_n, max_k, Some(r), deadline)?, r })
    }

    pub(crate) fn footprint(max_n: usize, max_k: usize, r: usize) -> crate::error::Footprint {
        StirlingTable::footprint(max_n, max_k, Some(r))
    }

    /// `N(m, n)`; needs `n <= max_n` and `min(m, n) <= max_k`.
    pub fn count_valid(&self, m: usize, n: usize) -> BigCount {
        if n == 0 {
            return BigUint::one();
        }
        let lo = n.div_ceil(self.r);
        let hi = m.min(n);
        if lo > hi {
            return BigUint::zero();
        }
        // C(m, k) and k! advanced together across the k range.
        let mut choose = binomial(m as u64, lo as i64);
        let mut fact = factorial(lo as u64);
        let mut total = BigUint::zero();
        for k in lo..=hi {
            if k > lo {
                choose = choose * (m - k + 1) / k;
                fact *= k;
            }
            total += &choose * &fact * self.table.get(n, k as i64);
        }
        total
    }
}

pub fn count_valid_stirling(inst: ProblemInstance) -> BigCount {
    unbounded(count_with(inst, &Deadline::NONE))
}

pub fn prob_stirling(inst: ProblemInstance) -> ExactProbability {
    unbounded(prob_with(inst, &Deadline::NONE))
}

pub(crate) fn count_with(inst: ProblemInstance, deadline: &Deadline) -> Result<BigCount> {
    let ProblemInstance { m, n, r } = inst;
    if inst.trivially_invalid() {
        return Ok(BigUint::zero());
    }
    Ok(StirlingSum::build(n, m.min(n), r, deadline)?.count_valid(m, n))
}

pub(crate) fn prob_with(inst: ProblemInstance, deadline: &Deadline) -> Result<ExactProbability> {
    if inst.trivially_valid() {
        return Ok(ExactProbability::one());
    }
    Ok(inst.prob_of_count(count_with(inst, deadline)?))
}
