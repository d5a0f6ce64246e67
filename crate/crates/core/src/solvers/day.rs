//! Condition on how many people land on one day, recurse on the remaining days.
//!
//! `P(m, n) = sum_{k <= min(n, r)} C(n, k) (1/m)^k (1 - 1/m)^(n-k) P(m-1, n-k)`
//! with `P(1, n) = [n <= r]` and `P(m, 0) = 1`, in reduced rationals throughout.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::ProblemInstance;
use crate::arith::{BinomialTable, ExactProbability};
use crate::error::{unbounded, Deadline, Footprint, Result};

type Q = Ratio<BigUint>;

/// `P(m', n')` for `1 <= m' <= max_m`, `0 <= n' <= max_n`.
#[derive(Debug, Clone)]
pub struct DayTable {
    r: usize,
    // rows[m' - 1][n']
    rows: Vec<Vec<Q>>,
}

impl DayTable {
    pub fn build(max_m: usize, max_n: usize, r: usize, deadline: &Deadline) -> Result<Self> {
        assert!(max_m >= 1 && r >= 1);
        Self::footprint(max_m, max_n, r).check()?;
        let mut binom = BinomialTable::new(r);
        binom.ensure(max_n);
        let first: Vec<Q> = (0..=max_n).map(|n| if n <= r { Q::one() } else { Q::zero() }).collect();
        let mut rows = vec![first];
        for m in 2..=max_m {
            deadline.check()?;
            let inv_m = Q::new(BigUint::one(), BigUint::from(m));
            let stay = Q::new(BigUint::from(m - 1), BigUint::from(m));
            let hit_pows = powers(&inv_m, r.min(max_n));
            let miss_pows = powers(&stay, max_n);
            let prev = rows.last().expect("row for m-1");
            let row: Vec<Q> = (0..=max_n)
                .map(|n| {
                    (0..=n.min(r)).fold(Q::zero(), |acc, k| {
                        let below = &prev[n - k];
                        if below.is_zero() {
                            return acc;
                        }
                        let weight = Q::from_integer(binom.get(n, k as i64).clone())
                            * &hit_pows[k]
                            * &miss_pows[n - k];
                        acc + weight * below
                    })
                })
                .collect();
            rows.push(row);
        }
        Ok(DayTable { r, rows })
    }

    pub(crate) fn footprint(max_m: usize, max_n: usize, r: usize) -> Footprint {
        let mut size = Footprint::default();
        for m in 2..=max_m {
            // Numerator and denominator both near m^n.
            let top = max_n.min(m * r);
            size.add(top + 1, top as f64 * (m as f64).log2());
        }
        size
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `P(m, n)`; panics outside the table.
    pub fn prob(&self, m: usize, n: usize) -> ExactProbability {
        self.rows[m - 1][n].clone().into()
    }
}

fn powers(base: &Q, up_to: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(Q::one());
    for i in 1..=up_to {
        let next = &out[i - 1] * base;
        out.push(next);
    }
    out
}

pub fn prob_day_recurrence(inst: ProblemInstance) -> ExactProbability {
    unbounded(prob_with(inst, &Deadline::NONE))
}

pub(crate) fn prob_with(inst: ProblemInstance, deadline: &Deadline) -> Result<ExactProbability> {
    if inst.trivially_valid() {
        return Ok(ExactProbability::one());
    }
    if inst.trivially_invalid() {
        return Ok(ExactProbability::zero());
    }
    Ok(DayTable::build(inst.m, inst.n, inst.r, deadline)?.prob(inst.m, inst.n))
}
