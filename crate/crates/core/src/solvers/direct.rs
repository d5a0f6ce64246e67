//! Probability recurrence in `n` with a correction for newly invalid configurations:
//!
//! `P(m, n) = P(m, n-1) - c(m, n) P(m-1, n-1-r)`, `c(m, n) = C(n-1, r) (m-1)^(n-1-r) / m^(n-1)`.
//!
//! `c(m, n)` is the chance that one fixed day holds exactly `r` of the first
//! `n - 1` people. It is seeded at `n = r + 1` with `1/m^r` and advanced by
//! [`coeff_next`], so the float path never forms a large power or binomial.
//!
//! The exact path stores each `P(m', n')` as its numerator over the fixed
//! denominator `m'^n'`. Multiplying the recurrence through by `m^n` gives
//! `T(m, n) = m T(m, n-1) - m C(n-1, r) T(m-1, n-1-r)` on those numerators, which
//! is exact rational arithmetic with no gcd work until a value is reported.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::field::{Double, Field, FixedPoint};
use super::{FloatPrecision, Mode, ProbResult, ProblemInstance, AlgorithmId};
use crate::arith::{int_pow, ratio, BinomialTable, ExactProbability};
use crate::error::{unbounded, Deadline, Footprint, Result};

/// `c(m, r + 1) = 1 / m^r`.
pub fn coeff_seed<F: Field>(field: &F, m: usize, r: usize) -> F::Value {
    (0..r).fold(field.one(), |acc, _| field.mul_ratio(&acc, 1, m as u64))
}

/// Advances `c(m, n - 1)` to `c(m, n)` via `c(m, n) = (n-1)/(n-1-r) * (m-1)/m * c(m, n-1)`.
///
/// Panics unless `n >= r + 2`; the step divides by `n - 1 - r`.
pub fn coeff_next<F: Field>(field: &F, prev: &F::Value, m: usize, n: usize, r: usize) -> F::Value {
    assert!(n >= r + 2, "coefficient step needs n >= r + 2 (got n={n}, r={r})");
    let stepped = field.mul_ratio(prev, (n - 1) as u64, (n - 1 - r) as u64);
    field.mul_ratio(&stepped, (m - 1) as u64, m as u64)
}

/// Rows `m'` of the staircase needed for `P(m, n)`, with the largest `n'` each must reach.
fn staircase(m: usize, n: usize, r: usize) -> impl Iterator<Item = (usize, usize)> {
    let depth = (m - 1).min(n / (r + 1));
    (m - depth..=m).map(move |mm| (mm, n - (m - mm) * (r + 1)))
}

/// One row of counts, possibly with its low end dropped.
#[derive(Debug, Clone, Default)]
struct Row {
    offset: usize,
    vals: VecDeque<BigUint>,
}

impl Row {
    fn len(&self) -> usize {
        self.offset + self.vals.len()
    }

    fn get(&self, n: usize) -> &BigUint {
        assert!(n >= self.offset, "cell n={n} was dropped from this row (kept from {})", self.offset);
        &self.vals[n - self.offset]
    }

    fn drop_below(&mut self, n: usize) {
        while self.offset < n && self.vals.len() > 1 {
            self.vals.pop_front();
            self.offset += 1;
        }
    }
}

/// Exact table of valid-configuration counts `T(m', n') = P(m', n') m'^n'`.
///
/// Built with [`new`](Self::new) it serves one `m` and grows in `n` on demand:
/// the top row is kept whole, lower rows keep only the window the next
/// extension reads. [`full`](Self::full) keeps every cell of a rectangle.
#[derive(Debug, Clone)]
pub struct DirectExact {
    m: usize,
    r: usize,
    keep_all: bool,
    // rows[m'] for m' >= 1; rows[0] stays empty.
    rows: Vec<Row>,
    binom: BinomialTable,
}

impl DirectExact {
    pub fn new(m: usize, r: usize) -> Self {
        assert!(m >= 1 && r >= 1);
        DirectExact { m, r, keep_all: false, rows: vec![Row::default(); m + 1], binom: BinomialTable::new(r) }
    }

    /// Every row `m' <= max_m` filled to `max_n`, nothing dropped.
    pub fn full(max_m: usize, max_n: usize, r: usize, deadline: &Deadline) -> Result<Self> {
        Self::full_footprint(max_m, max_n, r).check()?;
        let mut t = DirectExact::new(max_m, r);
        t.keep_all = true;
        for mm in 1..=max_m {
            t.extend_row(mm, max_n, deadline)?;
        }
        Ok(t)
    }

    pub(crate) fn full_footprint(max_m: usize, max_n: usize, r: usize) -> Footprint {
        let mut size = Footprint::default();
        for m in 2..=max_m {
            let top = max_n.min(m * r);
            size.add(top + 1, top as f64 * (m as f64).log2() / 2.0);
        }
        size
    }

    /// Grows the table so that `P(m, n)` is available for the top row.
    pub fn extend_to(&mut self, n: usize, deadline: &Deadline) -> Result<()> {
        for (mm, top) in staircase(self.m, n, self.r) {
            self.extend_row(mm, top, deadline)?;
            if !self.keep_all && mm >= 2 {
                // Row mm next reads row mm-1 from index top - r, and row mm-1
                // extends from its own last cell, top - r - 1.
                self.rows[mm - 1].drop_below((top + 1).saturating_sub(self.r + 1));
            }
        }
        Ok(())
    }

    fn extend_row(&mut self, mm: usize, top: usize, deadline: &Deadline) -> Result<()> {
        let r = self.r;
        self.binom.ensure(top);
        while self.rows[mm].len() <= top {
            let n = self.rows[mm].len();
            if n.is_multiple_of(64) {
                deadline.check()?;
            }
            let value = if n == 0 {
                BigUint::one()
            } else if n > mm * r {
                BigUint::zero()
            } else {
                let kept = self.rows[mm].get(n - 1) * mm;
                let lost = match (n - 1).checked_sub(r) {
                    Some(rest) => self.count_ref(mm - 1, rest) * self.binom.get(n - 1, r as i64) * mm,
                    None => BigUint::zero(),
                };
                assert!(kept >= lost, "direct recurrence went negative at m={mm} n={n} r={r}");
                kept - lost
            };
            self.rows[mm].vals.push_back(value);
        }
        Ok(())
    }

    fn count_ref(&self, mm: usize, n: usize) -> BigUint {
        if mm == 0 {
            return if n == 0 { BigUint::one() } else { BigUint::zero() };
        }
        self.rows[mm].get(n).clone()
    }

    /// `T(m', n')`; panics if that cell was never filled or has been dropped.
    pub fn count(&self, mm: usize, n: usize) -> BigUint {
        self.count_ref(mm, n)
    }

    /// Number of cells computed so far in row `m'`.
    pub fn filled(&self, mm: usize) -> usize {
        self.rows.get(mm).map_or(0, Row::len)
    }

    /// `P(m', n')` from a retained cell, reduced.
    pub fn prob_at(&self, mm: usize, n: usize) -> ExactProbability {
        ratio(self.count(mm, n), int_pow(mm as u64, n as u64)).expect("m' >= 1")
    }

    /// `P(m, n)` for the top row, extending as needed.
    pub fn prob(&mut self, n: usize) -> ExactProbability {
        unbounded(self.extend_to(n, &Deadline::NONE));
        self.prob_at(self.m, n)
    }
}

/// Floating (or fixed-point) version of the same table, advancing `c(m', n')` incrementally.
#[derive(Debug, Clone)]
pub struct DirectFloat<F: Field> {
    field: F,
    m: usize,
    r: usize,
    rows: Vec<Vec<F::Value>>,
    // c(m', n') at the last filled n' of each row, once n' >= r + 1.
    coeff: Vec<Option<F::Value>>,
}

impl<F: Field> DirectFloat<F> {
    pub fn new(field: F, m: usize, r: usize) -> Self {
        assert!(m >= 1 && r >= 1);
        DirectFloat { field, m, r, rows: vec![Vec::new(); m + 1], coeff: vec![None; m + 1] }
    }

    pub fn full(field: F, max_m: usize, max_n: usize, r: usize, deadline: &Deadline) -> Result<Self> {
        let mut t = DirectFloat::new(field, max_m, r);
        for mm in 1..=max_m {
            t.extend_row(mm, max_n, deadline)?;
        }
        Ok(t)
    }

    pub fn extend_to(&mut self, n: usize, deadline: &Deadline) -> Result<()> {
        for (mm, top) in staircase(self.m, n, self.r) {
            self.extend_row(mm, top, deadline)?;
        }
        Ok(())
    }

    fn extend_row(&mut self, mm: usize, top: usize, deadline: &Deadline) -> Result<()> {
        let r = self.r;
        while self.rows[mm].len() <= top {
            let n = self.rows[mm].len();
            if n.is_multiple_of(256) {
                deadline.check()?;
            }
            if n == r + 1 {
                self.coeff[mm] = Some(coeff_seed(&self.field, mm, r));
            } else if n > r + 1 {
                let prev = self.coeff[mm].as_ref().expect("coefficient seeded at n = r + 1");
                self.coeff[mm] = Some(coeff_next(&self.field, prev, mm, n, r));
            }
            let value = if n <= r {
                self.field.one()
            } else if n > mm * r {
                self.field.zero()
            } else {
                let c = self.coeff[mm].as_ref().expect("n > r");
                let correction = self.field.mul(c, &self.value(mm - 1, n - 1 - r));
                self.field.sub(&self.rows[mm][n - 1], &correction)
            };
            self.rows[mm].push(value);
        }
        Ok(())
    }

    fn value(&self, mm: usize, n: usize) -> F::Value {
        if mm == 0 {
            return if n == 0 { self.field.one() } else { self.field.zero() };
        }
        self.rows[mm][n].clone()
    }

    /// `P(m', n')` as binary64; panics if not filled.
    pub fn prob_at(&self, mm: usize, n: usize) -> f64 {
        self.field.to_f64(&self.value(mm, n))
    }

    /// `P(m, n)` for the top row; panics if not filled.
    pub fn prob_at_top(&self, n: usize) -> f64 {
        self.prob_at(self.m, n)
    }

    pub fn prob(&mut self, n: usize) -> f64 {
        unbounded(self.extend_to(n, &Deadline::NONE));
        self.prob_at(self.m, n)
    }
}

pub fn prob_direct(inst: ProblemInstance, mode: Mode) -> ProbResult {
    let (exact, approx) = match mode {
        Mode::Exact => (Some(unbounded(prob_exact_with(inst, &Deadline::NONE))), None),
        Mode::Float(p) => (None, Some(unbounded(prob_float_with(inst, p, &Deadline::NONE)))),
    };
    ProbResult { exact, approx, algorithm: AlgorithmId::Direct, instance: inst }
}

pub(crate) fn prob_exact_with(inst: ProblemInstance, deadline: &Deadline) -> Result<ExactProbability> {
    if inst.trivially_valid() {
        return Ok(ExactProbability::one());
    }
    if inst.trivially_invalid() {
        return Ok(ExactProbability::zero());
    }
    let mut t = DirectExact::new(inst.m, inst.r);
    t.extend_to(inst.n, deadline)?;
    Ok(t.prob_at(inst.m, inst.n))
}

pub(crate) fn prob_float_with(inst: ProblemInstance, precision: FloatPrecision, deadline: &Deadline) -> Result<f64> {
    if inst.trivially_valid() {
        return Ok(1.0);
    }
    if inst.trivially_invalid() {
        return Ok(0.0);
    }
    fn run<F: Field>(field: F, inst: ProblemInstance, deadline: &Deadline) -> Result<f64> {
        let mut t = DirectFloat::new(field, inst.m, inst.r);
        t.extend_to(inst.n, deadline)?;
        Ok(t.prob_at(inst.m, inst.n))
    }
    match precision {
        FloatPrecision::Double => run(Double, inst, deadline),
        FloatPrecision::Extended { bits } => run(FixedPoint { bits }, inst, deadline),
    }
}
