//! Exact integer and rational arithmetic shared by every solver.
//!
//! Counts are unsigned arbitrary-precision integers ([`BigCount`]). Probabilities
//! are reduced fractions ([`ExactProbability`]) that never pass through floating
//! point unless a caller explicitly asks for an approximation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// A reduced nonnegative fraction `numer / denom` with `denom > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProbability(Ratio<BigUint>);

/// Builds the reduced rational `num / den`.
pub fn ratio(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<ExactProbability> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(ExactProbability(Ratio::new(num.into(), den)))
}

impl ExactProbability {
    pub fn zero() -> Self {
        ExactProbability(Ratio::zero())
    }

    pub fn one() -> Self {
        ExactProbability(Ratio::one())
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True when the value lies in `[0, 1]`.
    pub fn is_probability(&self) -> bool {
        self.numer() <= self.denom()
    }

    /// `self <= num / den` without reducing the right-hand side.
    pub fn le_fraction(&self, num: &BigUint, den: &BigUint) -> bool {
        self.numer() * den <= num * self.denom()
    }

    pub fn as_ratio(&self) -> &Ratio<BigUint> {
        &self.0
    }

    /// Nearest binary64 value (within one ulp).
    pub fn to_f64(&self) -> f64 {
        fraction_to_f64(self.numer(), self.denom())
    }

    /// Decimal expansion with exactly `digits` fractional digits, rounded half up.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigUint::from(10u32).pow(digits as u32);
        let (q, rem) = (self.numer() * &scale).div_rem(self.denom());
        let q = if rem * 2u32 >= *self.denom() { q + 1u32 } else { q };
        let (int_part, frac_part) = q.div_rem(&scale);
        if digits == 0 {
            return int_part.to_string();
        }
        format!("{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

impl From<Ratio<BigUint>> for ExactProbability {
    fn from(r: Ratio<BigUint>) -> Self {
        ExactProbability(r)
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ExactProbability {
    type Err = Error;

    /// Accepts `p/q` or a bare integer. Decimal notation is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let digits = |t: &str| -> Result<BigUint> {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let den = digits(q)?;
                if den.is_zero() {
                    return Err(bad());
                }
                ratio(digits(p)?, den)
            }
            None => ratio(digits(s)?, 1u32),
        }
    }
}

pub(crate) fn fraction_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // Bring the quotient to ~64 significant bits before converting.
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-(shift as i32))
}

/// `base^exp`, with `0^0 = 1`.
pub fn int_pow(base: u64, exp: u64) -> BigCount {
    let mut acc = BigUint::one();
    let mut b = BigUint::from(base);
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigCount {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigCount {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Memoized Pascal triangle, truncated to columns `0..=max_k`.
///
/// Rows are added on demand. Solvers mostly need `C(j, r)` for small `r`, so the
/// truncation keeps memory at `O(n * r)` even when `n` reaches the thousands.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    max_k: usize,
    rows: Vec<Vec<BigUint>>,
}

impl BinomialTable {
    pub fn new(max_k: usize) -> Self {
        BinomialTable { max_k, rows: vec![vec![BigUint::one()]] }
    }

    /// Adds rows up to and including `n`.
    pub fn ensure(&mut self, n: usize) {
        while self.rows.len() <= n {
            let prev = self.rows.last().expect("row 0 always present");
            let row_n = self.rows.len();
            let width = row_n.min(self.max_k) + 1;
            let row: Vec<BigUint> = (0..width)
                .map(|k| {
                    let left = if k == 0 { BigUint::zero() } else { prev[k - 1].clone() };
                    let right = prev.get(k).cloned().unwrap_or_default();
                    left + right
                })
                .collect();
            self.rows.push(row);
        }
    }

    /// `C(n, k)` for a row already materialized by [`ensure`](Self::ensure).
    ///
    /// Panics if `k` exceeds the truncation width while being `<= n`.
    pub fn get(&self, n: usize, k: i64) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k < 0 || k as usize > n {
            return ZERO.get_or_init(BigUint::zero);
        }
        let k = k as usize;
        assert!(k <= self.max_k, "binomial column {k} beyond table width {}", self.max_k);
        &self.rows[n][k]
    }

    pub fn binomial(&mut self, n: usize, k: i64) -> BigUint {
        self.ensure(n);
        self.get(n, k).clone()
    }
}
