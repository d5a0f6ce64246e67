//! Largest `n` with `P(m, n, r) >= gamma`, by binary search over `[0, m r]`.
//!
//! `P` is nonincreasing in `n`, equals 1 at `n = 0` and 0 beyond `m r`, so the
//! answer is the last `n` of a prefix and bisection finds it exactly.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::{int_pow, ratio, ExactProbability};
use crate::cache::ProbCache;
use crate::error::{Deadline, Error, Result};
use crate::solvers::{
    solve_with, AlgorithmId, DirectExact, DirectFloat, Double, FixedPoint, FloatPrecision, Mode,
    ProblemInstance, DEFAULT_BRUTE_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRequest {
    pub m: usize,
    pub r: usize,
    pub gamma: ExactProbability,
    pub algorithm: AlgorithmId,
    pub mode: Mode,
}

impl SearchRequest {
    /// Direct algorithm in exact mode.
    pub fn new(m: usize, r: usize, gamma: ExactProbability) -> Self {
        SearchRequest { m, r, gamma, algorithm: AlgorithmId::Direct, mode: Mode::Exact }
    }

    pub fn with_algorithm(mut self, algorithm: AlgorithmId, mode: Mode) -> Self {
        self.algorithm = algorithm;
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        ProblemInstance::new(self.m, 0, self.r)?;
        if self.gamma.is_zero() || !self.gamma.is_probability() {
            return Err(Error::GammaOutOfRange(self.gamma.to_string()));
        }
        if matches!(self.mode, Mode::Float(_)) && self.algorithm != AlgorithmId::Direct {
            return Err(Error::Unsupported(format!("float mode is only available for direct, not {}", self.algorithm)));
        }
        Ok(())
    }
}

/// `n_max` with the two probabilities that straddle the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub n_max: usize,
    pub p_at_nmax: ExactProbability,
    pub p_at_nmax_plus_1: ExactProbability,
}

impl SearchResult {
    /// `P(n_max) >= gamma > P(n_max + 1)`.
    pub fn certifies(&self, gamma: &ExactProbability) -> bool {
        &self.p_at_nmax >= gamma && &self.p_at_nmax_plus_1 < gamma
    }
}

impl fmt::Display for SearchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (P={}, next P={})", self.n_max, self.p_at_nmax, self.p_at_nmax_plus_1)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions<'a> {
    pub cache: Option<&'a ProbCache>,
    pub deadline: Deadline,
}

/// A search answer plus every exact probability it computed that the cache lacked.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub fresh: Vec<(ProblemInstance, ExactProbability)>,
}

pub fn find_nmax(req: &SearchRequest) -> Result<SearchResult> {
    Ok(find_nmax_with(req, &SearchOptions::default())?.result)
}

pub fn find_nmax_with(req: &SearchRequest, opts: &SearchOptions<'_>) -> Result<SearchOutcome> {
    req.validate()?;
    let mut probe = ExactProbe::new(req, opts);
    let top = req.m * req.r;

    let start = match req.mode {
        Mode::Exact => {
            // P(lo) >= gamma, P(hi) < gamma.
            let (mut lo, mut hi) = (0usize, top + 1);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if probe.at_least(mid, &req.gamma)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
        Mode::Float(precision) => float_guess(req, precision, &opts.deadline)?,
    };

    // Certificate in exact arithmetic; walks only if a float guess was off.
    let mut n = start;
    while n > 0 && !probe.at_least(n, &req.gamma)? {
        n -= 1;
    }
    while n < top && probe.at_least(n + 1, &req.gamma)? {
        n += 1;
    }
    let result = SearchResult {
        n_max: n,
        p_at_nmax: probe.exact(n)?,
        p_at_nmax_plus_1: probe.exact(n + 1)?,
    };
    debug_assert!(result.certifies(&req.gamma));
    Ok(SearchOutcome { result, fresh: probe.fresh })
}

fn float_guess(req: &SearchRequest, precision: FloatPrecision, deadline: &Deadline) -> Result<usize> {
    fn bisect<F: crate::solvers::Field>(table: &mut DirectFloat<F>, top: usize, gamma: f64, deadline: &Deadline) -> Result<usize> {
        let (mut lo, mut hi) = (0usize, top + 1);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            table.extend_to(mid, deadline)?;
            if table.prob_at_top(mid) >= gamma {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
    let gamma = req.gamma.to_f64();
    let top = req.m * req.r;
    match precision {
        FloatPrecision::Double => bisect(&mut DirectFloat::new(Double, req.m, req.r), top, gamma, deadline),
        FloatPrecision::Extended { bits } => {
            bisect(&mut DirectFloat::new(FixedPoint { bits }, req.m, req.r), top, gamma, deadline)
        }
    }
}

/// Exact `P(m, n)` for one `(m, r)`, reusing one table for the direct algorithm.
struct ExactProbe<'a> {
    req: &'a SearchRequest,
    cache: Option<&'a ProbCache>,
    deadline: Deadline,
    direct: Option<DirectExact>,
    fresh: Vec<(ProblemInstance, ExactProbability)>,
}

impl<'a> ExactProbe<'a> {
    fn new(req: &'a SearchRequest, opts: &SearchOptions<'a>) -> Self {
        ExactProbe { req, cache: opts.cache, deadline: opts.deadline, direct: None, fresh: Vec::new() }
    }

    fn instance(&self, n: usize) -> ProblemInstance {
        ProblemInstance { m: self.req.m, n, r: self.req.r }
    }

    /// `P(n)` as an unreduced fraction.
    fn fraction(&mut self, n: usize) -> Result<(BigUint, BigUint)> {
        let inst = self.instance(n);
        if inst.trivially_invalid() {
            return Ok((BigUint::ZERO, BigUint::one()));
        }
        if inst.trivially_valid() {
            return Ok((BigUint::one(), BigUint::one()));
        }
        if let Some(p) = self.cache.and_then(|c| c.get(&inst)) {
            return Ok((p.numer().clone(), p.denom().clone()));
        }
        let (num, den) = match self.req.algorithm {
            AlgorithmId::Direct => {
                let table = self.direct.get_or_insert_with(|| DirectExact::new(inst.m, inst.r));
                table.extend_to(n, &self.deadline)?;
                (table.count(inst.m, n), int_pow(inst.m as u64, n as u64))
            }
            other => {
                let p = solve_with(inst, other, Mode::Exact, DEFAULT_BRUTE_LIMIT, &self.deadline)?
                    .exact
                    .expect("exact mode");
                (p.numer().clone(), p.denom().clone())
            }
        };
        if self.cache.is_some() {
            self.fresh.push((inst, ratio(num.clone(), den.clone())?));
        }
        Ok((num, den))
    }

    fn at_least(&mut self, n: usize, gamma: &ExactProbability) -> Result<bool> {
        let (num, den) = self.fraction(n)?;
        Ok(gamma.le_fraction(&num, &den))
    }

    fn exact(&mut self, n: usize) -> Result<ExactProbability> {
        let (num, den) = self.fraction(n)?;
        ratio(num, den)
    }
}
