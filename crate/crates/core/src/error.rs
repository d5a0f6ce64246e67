use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse {0:?} as an exact rational (expected p/q or an integer)")]
    ParseRational(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("threshold {0} must lie in (0, 1]")]
    GammaOutOfRange(String),

    #[error("{0}")]
    Unsupported(String),

    /// The brute-force oracle would enumerate more bounded compositions than allowed.
    #[error("brute force refused: {count} bounded compositions exceed the limit of {limit}")]
    TooLarge { count: BigUint, limit: u64 },

    /// A recurrence table would not fit the memory budget.
    #[error("tables for this computation would need about {needed_mib} MiB, over the {budget_mib} MiB budget")]
    TableTooLarge { needed_mib: u64, budget_mib: u64 },

    #[error("computation exceeded its time budget")]
    TimedOut,

    #[error("cache file {}: {reason}; delete it and rerun", path.display())]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Refusals are computations the engine declined to finish, as opposed to bad input.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::TableTooLarge { .. } | Error::TimedOut)
    }
}

/// Cooperative time budget checked inside long table fills.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub const NONE: Deadline = Deadline(None);

    pub fn after(budget: Duration) -> Self {
        Deadline(Instant::now().checked_add(budget))
    }

    pub fn check(&self) -> Result<()> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(Error::TimedOut),
            _ => Ok(()),
        }
    }
}

/// Unwraps a result computed without a deadline; panics on a refusal.
pub(crate) fn unbounded<T>(res: Result<T>) -> T {
    match res {
        Ok(v) => v,
        Err(e) => panic!("{e}"),
    }
}

/// Tables estimated to need more than this many bytes are refused up front.
pub const TABLE_MEMORY_BUDGET: u64 = 2 << 30;

/// Running estimate of the heap a table of big integers will occupy.
#[derive(Debug, Default)]
pub(crate) struct Footprint(f64);

impl Footprint {
    /// `cells` nonzero entries of about `bits` bits each.
    pub(crate) fn add(&mut self, cells: usize, bits: f64) {
        if cells > 0 {
            self.0 += cells as f64 * (bits.max(0.0) / 8.0 + 32.0);
        }
    }

    pub(crate) fn merge(mut self, other: Footprint) -> Footprint {
        self.0 += other.0;
        self
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.0.is_nan() || self.0 > TABLE_MEMORY_BUDGET as f64 {
            return Err(Error::TableTooLarge {
                needed_mib: (self.0 / (1u64 << 20) as f64).ceil() as u64,
                budget_mib: TABLE_MEMORY_BUDGET >> 20,
            });
        }
        Ok(())
    }
}
