//! Count assignments by the number of occupied days.
//!
//! `T(m, n, k)` is the number of ways `n` people take birthdays on exactly `k`
//! of `m` days with at most `r` per day. Adding person `n` either opens a new
//! day (`m - k + 1` choices) or joins one of the `k` occupied days; the joins
//! that would push a full day to `r + 1` are removed by the last term:
//!
//! `T(m,n,k) = (m-k+1) T(m,n-1,k-1) + k T(m,n-1,k) - m C(n-1,r) T(m-1,n-1-r,k-1)`

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::ProblemInstance;
use crate::arith::{BigCount, BinomialTable, ExactProbability};
use crate::error::{unbounded, Deadline, Footprint, Result};

/// Closed-form cases of `T`; `None` when the recurrence applies.
#[allow(clippy::int_plus_one)] // kept in the form m - k + 1 <= 0
fn base_case(m: i64, n: i64, k: i64, r: i64) -> Option<BigUint> {
    if n == 0 && k == 0 {
        return Some(BigUint::one());
    }
    let zero = (n <= 0 && k > 0)
        || (n > 0 && k <= 0)
        || n < k
        || n > k.saturating_mul(r)
        || m - k + 1 <= 0;
    zero.then(BigUint::zero)
}

/// `T(m', n', k)` for a band of `m'` values, each filled up to its own bound on `n'`.
///
/// The term `T(m-1, n-1-r, .)` only reaches back `n / (r + 1)` layers, and each
/// step down in `m` lowers the needed `n` by `r + 1`; per-instance tables are
/// trimmed to exactly that staircase.
#[derive(Debug, Clone)]
pub struct CountingTable {
    r: usize,
    m_lo: usize,
    // layers[m' - m_lo][n'][k], k <= min(m', n')
    layers: Vec<Vec<Vec<BigUint>>>,
}

impl CountingTable {
    /// Every `T(m', n', k)` with `m' <= max_m`, `n' <= max_n`.
    pub fn full(max_m: usize, max_n: usize, r: usize, deadline: &Deadline) -> Result<Self> {
        Self::build(0, max_m, r, |_| Some(max_n), deadline)
    }

    /// Just the cells needed for `T(m, n, .)`.
    pub fn for_instance(m: usize, n: usize, r: usize, deadline: &Deadline) -> Result<Self> {
        let depth = m.min(n / (r + 1));
        Self::build(m - depth, m, r, |mm| n.checked_sub((m - mm) * (r + 1)), deadline)
    }

    fn build(
        m_lo: usize,
        m_hi: usize,
        r: usize,
        bound: impl Fn(usize) -> Option<usize> + Copy,
        deadline: &Deadline,
    ) -> Result<Self> {
        assert!(r >= 1);
        Self::footprint(m_lo, m_hi, r, bound).check()?;
        let mut table = CountingTable { r, m_lo, layers: Vec::with_capacity(m_hi - m_lo + 1) };
        let mut binom = BinomialTable::new(r);
        for m in m_lo..=m_hi {
            let top = bound(m).expect("layer inside the staircase");
            binom.ensure(top);
            let mut layer: Vec<Vec<BigUint>> = Vec::with_capacity(top + 1);
            for n in 0..=top {
                deadline.check()?;
                let row: Vec<BigUint> = (0..=m.min(n))
                    .map(|k| table.cell(m, n, k, &layer, &binom))
                    .collect();
                layer.push(row);
            }
            table.layers.push(layer);
        }
        Ok(table)
    }

    fn footprint(m_lo: usize, m_hi: usize, r: usize, bound: impl Fn(usize) -> Option<usize>) -> Footprint {
        let mut size = Footprint::default();
        for m in m_lo..=m_hi {
            for n in 1..=bound(m).expect("layer inside the staircase") {
                let nonzero = (m.min(n) + 1).saturating_sub(n.div_ceil(r));
                size.add(nonzero, n as f64 * (m as f64).log2());
            }
        }
        size
    }

    pub(crate) fn full_footprint(max_m: usize, max_n: usize, r: usize) -> Footprint {
        Self::footprint(0, max_m, r, |_| Some(max_n))
    }

    fn cell(&self, m: usize, n: usize, k: usize, layer: &[Vec<BigUint>], binom: &BinomialTable) -> BigUint {
        let r = self.r;
        if let Some(v) = base_case(m as i64, n as i64, k as i64, r as i64) {
            return v;
        }
        let same = |nn: usize, kk: usize| -> BigUint {
            base_case(m as i64, nn as i64, kk as i64, r as i64)
                .unwrap_or_else(|| layer[nn][kk].clone())
        };
        let opened = same(n - 1, k - 1) * (m - k + 1);
        let joined = same(n - 1, k) * k;
        let overflow = match (n - 1).checked_sub(r) {
            Some(rest) => {
                let below = self.lookup(m as i64 - 1, rest as i64, k as i64 - 1);
                below * binom.get(n - 1, r as i64) * m
            }
            None => BigUint::zero(),
        };
        let total = opened + joined;
        assert!(
            total >= overflow,
            "counting recurrence went negative at T({m}, {n}, {k}, {r})"
        );
        total - overflow
    }

    fn lookup(&self, m: i64, n: i64, k: i64) -> BigUint {
        if let Some(v) = base_case(m, n, k, self.r as i64) {
            return v;
        }
        let layer = &self.layers[(m as usize)
            .checked_sub(self.m_lo)
            .expect("counting table layer below the filled band")];
        layer[n as usize][k as usize].clone()
    }

    /// `T(m, n, k)` for any integers; panics if the cell was not filled.
    pub fn t(&self, m: i64, n: i64, k: i64) -> BigCount {
        self.lookup(m, n, k)
    }

    /// `N(m, n) = sum_k T(m, n, k)` over `ceil(n/r) <= k <= min(m, n)`.
    pub fn count_valid(&self, m: usize, n: usize) -> BigCount {
        if n == 0 {
            return BigUint::one();
        }
        let lo = n.div_ceil(self.r);
        (lo..=m.min(n)).map(|k| self.t(m as i64, n as i64, k as i64)).sum()
    }
}

/// `T(m, n, k, r)`; zero on the guard clauses, `T(., 0, 0, .) = 1`.
pub fn count_t(m: i64, n: i64, k: i64, r: i64) -> BigCount {
    if let Some(v) = base_case(m, n, k, r) {
        return v;
    }
    // Past the guards: 1 <= k <= min(m, n) and r >= 1.
    let table = unbounded(CountingTable::for_instance(m as usize, n as usize, r as usize, &Deadline::NONE));
    table.t(m, n, k)
}

pub fn count_valid(inst: ProblemInstance) -> BigCount {
    unbounded(count_valid_with(inst, &Deadline::NONE))
}

pub fn prob_counting(inst: ProblemInstance) -> ExactProbability {
    unbounded(prob_with(inst, &Deadline::NONE))
}

pub(crate) fn count_valid_with(inst: ProblemInstance, deadline: &Deadline) -> Result<BigCount> {
    let ProblemInstance { m, n, r } = inst;
    if inst.trivially_invalid() {
        return Ok(BigUint::zero());
    }
    Ok(CountingTable::for_instance(m, n, r, deadline)?.count_valid(m, n))
}

pub(crate) fn prob_with(inst: ProblemInstance, deadline: &Deadline) -> Result<ExactProbability> {
    if inst.trivially_valid() {
        return Ok(ExactProbability::one());
    }
    Ok(inst.prob_of_count(count_valid_with(inst, deadline)?))
}
