//! Stirling numbers of the second kind, classic and with a cap on block size.
//!
//! Both are filled bottom-up over `(n, k)` so that `n` in the thousands never
//! touches the call stack.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{BigCount, BinomialTable};
use crate::error::{Deadline, Footprint, Result};

/// Identifies one Stirling number: `n` objects in `k` blocks, optionally each of size `<= limit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StirlingKey {
    pub n: usize,
    pub k: i64,
    /// `None` for the classic (unrestricted) numbers.
    pub limit: Option<usize>,
}

impl StirlingKey {
    pub fn eval(&self) -> BigCount {
        match self.limit {
            None => stirling2(self.n, self.k),
            Some(r) => restricted_stirling2(self.n, self.k, r),
        }
    }
}

/// Table of `{n' brace k'}` (or its `<= r` restriction) for `n' <= max_n`, `k' <= max_k`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    limit: Option<usize>,
    max_k: usize,
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn classic(max_n: usize, max_k: usize) -> Self {
        crate::error::unbounded(Self::build(max_n, max_k, None, &Deadline::NONE))
    }

    pub fn restricted(max_n: usize, max_k: usize, r: usize) -> Self {
        crate::error::unbounded(Self::build(max_n, max_k, Some(r), &Deadline::NONE))
    }

    pub fn build(max_n: usize, max_k: usize, limit: Option<usize>, deadline: &Deadline) -> Result<Self> {
        if let Some(r) = limit {
            assert!(r >= 1, "block size limit must be at least 1");
        }
        Self::footprint(max_n, max_k, limit).check()?;
        let mut table = StirlingTable { limit, max_k, rows: Vec::with_capacity(max_n + 1) };
        let mut binom = BinomialTable::new(limit.unwrap_or(0));
        for n in 0..=max_n {
            deadline.check()?;
            let row = match limit {
                None => table.classic_row(n),
                Some(r) => {
                    binom.ensure(n.saturating_sub(1));
                    table.restricted_row(n, r, &binom)
                }
            };
            table.rows.push(row);
        }
        Ok(table)
    }

    pub(crate) fn footprint(max_n: usize, max_k: usize, limit: Option<usize>) -> Footprint {
        let mut size = Footprint::default();
        for n in 1..=max_n {
            let lo = limit.map_or(1, |r| n.div_ceil(r));
            let nonzero = (n.min(max_k) + 1).saturating_sub(lo);
            size.add(nonzero, n as f64 * (n.min(max_k).max(2) as f64).log2());
        }
        size
    }

    fn classic_row(&self, n: usize) -> Vec<BigUint> {
        (0..=self.max_k)
            .map(|k| {
                if n == 0 && k == 0 {
                    BigUint::one()
                } else if n == 0 || k == 0 {
                    BigUint::zero()
                } else if k == 1 {
                    BigUint::one()
                } else {
                    self.at(n - 1, k - 1) + self.at(n - 1, k) * k
                }
            })
            .collect()
    }

    fn restricted_row(&self, n: usize, r: usize, binom: &BinomialTable) -> Vec<BigUint> {
        (0..=self.max_k)
            .map(|k| {
                if n == 0 && k == 0 {
                    return BigUint::one();
                }
                if n == 0 || k == 0 || n > k * r {
                    return BigUint::zero();
                }
                let grown = self.at(n - 1, k - 1) + self.at(n - 1, k) * k;
                // {n-1-r, k-1} is zero when n-1-r < 0.
                let overfull = match (n - 1).checked_sub(r) {
                    Some(rest) => binom.get(n - 1, r as i64) * self.at(rest, k - 1),
                    None => BigUint::zero(),
                };
                assert!(
                    grown >= overfull,
                    "restricted Stirling recurrence went negative at n={n} k={k} r={r}"
                );
                grown - overfull
            })
            .collect()
    }

    fn at(&self, n: usize, k: usize) -> BigUint {
        self.rows[n].get(k).cloned().unwrap_or_default()
    }

    pub fn limit(&self) -> Option<usize> {
        self.limit
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// Value at `(n, k)`; zero for `k < 0` or `k > n`. Panics outside the filled range.
    pub fn get(&self, n: usize, k: i64) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k < 0 || k as usize > n {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.rows[n][k as usize]
    }
}

/// Classic Stirling number of the second kind; zero for `k < 0` or `k > n`.
pub fn stirling2(n: usize, k: i64) -> BigCount {
    if k < 0 || k as usize > n {
        return BigUint::zero();
    }
    StirlingTable::classic(n, k as usize).get(n, k).clone()
}

/// Number of partitions of an `n`-set into `k` blocks of size at most `r`.
pub fn restricted_stirling2(n: usize, k: i64, r: usize) -> BigCount {
    if k < 0 || k as usize > n {
        return BigUint::zero();
    }
    StirlingTable::restricted(n, k as usize, r).get(n, k).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Block-size histograms of every set partition of `{0..n}`, via restricted growth strings.
    fn partitions_by_blocks(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut labels = vec![0usize; n];
        fn rec(i: usize, used: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == labels.len() {
                let mut sizes = vec![0usize; used];
                for &l in labels.iter() {
                    sizes[l] += 1;
                }
                out.push(sizes);
                return;
            }
            for l in 0..=used {
                labels[i] = l;
                rec(i + 1, used.max(l + 1), labels, out);
            }
        }
        rec(0, 0, &mut labels, &mut out);
        out
    }

    fn brute(n: usize, k: usize, r: usize) -> u64 {
        partitions_by_blocks(n)
            .iter()
            .filter(|s| s.len() == k && s.iter().all(|&b| b <= r))
            .count() as u64
    }

    #[test]
    fn classic_examples() {
        assert_eq!(stirling2(4, 2), BigUint::from(7u32));
        assert_eq!(stirling2(0, 0), BigUint::one());
        assert_eq!(brute(5, 3, 5), 25);
        assert_eq!(stirling2(5, 3), BigUint::from(25u32));
        assert_eq!(stirling2(3, 4), BigUint::zero());
        assert_eq!(stirling2(3, -1), BigUint::zero());
        assert_eq!(stirling2(3, 0), BigUint::zero());
    }

    #[test]
    fn restricted_examples() {
        assert_eq!(restricted_stirling2(4, 2, 3), BigUint::from(7u32));
        assert_eq!(restricted_stirling2(5, 2, 3), BigUint::from(10u32));
        assert_eq!(restricted_stirling2(5, 3, 3), BigUint::from(25u32));
        assert_eq!(restricted_stirling2(3, 1, 2), BigUint::zero());
        assert_eq!(restricted_stirling2(4, 2, 2), BigUint::from(3u32));
        assert_eq!(restricted_stirling2(0, 0, 1), BigUint::one());
    }

    #[test]
    fn restricted_matches_partition_enumeration() {
        for n in 0..=10 {
            let parts = partitions_by_blocks(n);
            for r in 1..=4 {
                let table = StirlingTable::restricted(n, n, r);
                for k in 0..=n {
                    let count = parts
                        .iter()
                        .filter(|s| s.len() == k && s.iter().all(|&b| b <= r))
                        .count();
                    assert_eq!(table.get(n, k as i64), &BigUint::from(count), "n={n} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn unrestricted_when_cap_exceeds_n() {
        for n in 0..=12 {
            let classic = StirlingTable::classic(n, n);
            for r in n.max(1)..=n + 2 {
                let restricted = StirlingTable::restricted(n, n, r);
                for k in 0..=n as i64 {
                    assert_eq!(restricted.get(n, k), classic.get(n, k));
                }
            }
        }
    }

    #[test]
    fn diagonal_is_one_and_monotone_in_cap() {
        for n in 1..=12 {
            for r in 1..=5 {
                assert!(restricted_stirling2(n, n as i64, r).is_one());
                let lo = StirlingTable::restricted(n, n, r);
                let hi = StirlingTable::restricted(n, n, r + 1);
                for k in 0..=n as i64 {
                    assert!(lo.get(n, k) <= hi.get(n, k));
                }
            }
        }
    }

    #[test]
    fn key_dispatch() {
        let key = StirlingKey { n: 5, k: 2, limit: Some(3) };
        assert_eq!(key.eval(), BigUint::from(10u32));
        let key = StirlingKey { n: 5, k: 2, limit: None };
        assert_eq!(key.eval(), BigUint::from(15u32));
    }
}
