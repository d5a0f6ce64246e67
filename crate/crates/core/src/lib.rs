//! Exact computation for the bottleneck birthday problem.
//!
//! With `m` equally likely days, `n` people and a cap `r`, the engine computes
//! the probability that no day holds more than `r` birthdays, the number of
//! such assignments, and the largest `n` keeping that probability at or above
//! a threshold. Four independent recurrences plus a brute-force oracle are
//! provided and cross-checked against each other.

pub mod arith;
pub mod cache;
pub mod error;
pub mod exec;
pub mod search;
pub mod solvers;
pub mod stirling;
pub mod tabulator;

pub use arith::{binomial, int_pow, ratio, BigCount, ExactProbability};
pub use error::{Deadline, Error, Result, TABLE_MEMORY_BUDGET};
pub use search::{find_nmax, SearchRequest, SearchResult};
pub use solvers::{AlgorithmId, FloatPrecision, Mode, ProbResult, ProblemInstance};
