use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;

use crate::error::{Deadline, Error, Result};
use crate::solvers::{count_bounded_compositions, solve_with, AlgorithmId, FloatPrecision, Mode, ProblemInstance};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

/// An algorithm together with its arithmetic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BenchTarget {
    pub algorithm: AlgorithmId,
    pub mode: Mode,
}

impl BenchTarget {
    pub fn exact(algorithm: AlgorithmId) -> Self {
        BenchTarget { algorithm, mode: Mode::Exact }
    }

    pub fn direct_float() -> Self {
        BenchTarget { algorithm: AlgorithmId::Direct, mode: Mode::Float(FloatPrecision::default()) }
    }

    /// Direct (float and exact), Stirling, one-day-at-a-time, counting, brute force.
    pub fn all() -> Vec<Self> {
        vec![
            Self::direct_float(),
            Self::exact(AlgorithmId::Direct),
            Self::exact(AlgorithmId::Stirling),
            Self::exact(AlgorithmId::DayAtATime),
            Self::exact(AlgorithmId::Counting),
            Self::exact(AlgorithmId::BruteForce),
        ]
    }
}

impl fmt::Display for BenchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Exact => f.write_str(self.algorithm.name()),
            Mode::Float(_) => write!(f, "{}-float", self.algorithm.name()),
        }
    }
}

impl FromStr for BenchTarget {
    type Err = Error;

    /// An algorithm name, or `direct-float`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "direct-float" {
            return Ok(Self::direct_float());
        }
        s.parse().map(Self::exact)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchOutcome {
    /// Median wall time over the repetitions.
    Median(Duration),
    TimedOut(Duration),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub instance: ProblemInstance,
    pub target: BenchTarget,
    pub outcome: BenchOutcome,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub instances: Vec<ProblemInstance>,
    pub environment: String,
}

impl BenchReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "environment: {}", self.environment).unwrap();
        writeln!(
            out,
            "expected on large instances: direct-float <= direct <= stirling <= day <= counting (not asserted)"
        )
        .unwrap();
        writeln!(out, "{:<28} {:<14} median", "instance", "algorithm").unwrap();
        for row in &self.rows {
            let outcome = match &row.outcome {
                BenchOutcome::Median(d) => format!("{:.6} s", d.as_secs_f64()),
                BenchOutcome::TimedOut(limit) => format!("timeout after {} s", limit.as_secs()),
                BenchOutcome::Skipped(why) => format!("skipped: {why}"),
            };
            writeln!(out, "{:<28} {:<14} {}", row.instance.to_string(), row.target.to_string(), outcome).unwrap();
        }
        out
    }
}

pub fn benchmark(instances: &[ProblemInstance], targets: &[BenchTarget], repetitions: usize) -> BenchReport {
    benchmark_with(instances, targets, repetitions, DEFAULT_TIMEOUT, crate::solvers::DEFAULT_BRUTE_LIMIT)
}

/// Times each `(instance, target)` pair sequentially. A pair whose run exceeds
/// `timeout` is recorded as timed out; the oracle is skipped beyond `brute_limit`.
pub fn benchmark_with(
    instances: &[ProblemInstance],
    targets: &[BenchTarget],
    repetitions: usize,
    timeout: Duration,
    brute_limit: u64,
) -> BenchReport {
    let repetitions = repetitions.max(1);
    let mut rows = Vec::new();
    for &inst in instances {
        for &target in targets {
            let outcome = time_one(inst, target, repetitions, timeout, brute_limit);
            rows.push(BenchRow { instance: inst, target, outcome });
        }
    }
    BenchReport { rows, instances: instances.to_vec(), environment: environment() }
}

fn time_one(inst: ProblemInstance, target: BenchTarget, reps: usize, timeout: Duration, brute_limit: u64) -> BenchOutcome {
    if target.algorithm == AlgorithmId::BruteForce {
        let count = count_bounded_compositions(inst.m, inst.n, inst.r);
        if count.to_u64().is_none_or(|c| c > brute_limit) {
            return BenchOutcome::Skipped(format!("{count} compositions exceed the oracle limit {brute_limit}"));
        }
    }
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let deadline = Deadline::after(timeout);
        let start = Instant::now();
        match solve_with(inst, target.algorithm, target.mode, brute_limit, &deadline) {
            Ok(_) => times.push(start.elapsed()),
            Err(Error::TimedOut) => return BenchOutcome::TimedOut(timeout),
            Err(e) => return BenchOutcome::Skipped(e.to_string()),
        }
    }
    times.sort();
    BenchOutcome::Median(times[times.len() / 2])
}

fn environment() -> String {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!(
        "{}-{}, {} hardware threads, single-threaded timings",
        std::env::consts::OS,
        std::env::consts::ARCH,
        threads
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_instance_all_targets() {
        let inst = ProblemInstance::new(30, 20, 2).unwrap();
        let report = benchmark(&[inst], &BenchTarget::all(), 3);
        assert_eq!(report.rows.len(), 6);
        for row in &report.rows {
            match &row.outcome {
                BenchOutcome::Median(_) => {}
                BenchOutcome::Skipped(_) => assert_eq!(row.target.algorithm, AlgorithmId::BruteForce),
                BenchOutcome::TimedOut(_) => panic!("{} timed out", row.target),
            }
        }
        assert!(report.render().contains("direct-float"));
    }

    #[test]
    fn empty_target_list() {
        let inst = ProblemInstance::new(365, 500, 3).unwrap();
        let report = benchmark(&[inst], &[], 3);
        assert!(report.rows.is_empty());
    }

    #[test]
    fn oracle_skipped_beyond_guard() {
        let inst = ProblemInstance::new(365, 500, 3).unwrap();
        let report = benchmark(&[inst], &[BenchTarget::exact(AlgorithmId::BruteForce)], 1);
        assert!(matches!(report.rows[0].outcome, BenchOutcome::Skipped(_)));
    }

    #[test]
    fn timeouts_are_recorded() {
        let inst = ProblemInstance::new(365, 500, 3).unwrap();
        let report = benchmark_with(
            &[inst],
            &[BenchTarget::exact(AlgorithmId::Counting)],
            1,
            Duration::from_millis(1),
            1000,
        );
        assert_eq!(report.rows[0].outcome, BenchOutcome::TimedOut(Duration::from_millis(1)));
    }

    #[test]
    fn target_names() {
        assert_eq!("direct-float".parse::<BenchTarget>().unwrap(), BenchTarget::direct_float());
        assert_eq!("day".parse::<BenchTarget>().unwrap().to_string(), "day");
        assert!("nope".parse::<BenchTarget>().is_err());
    }
}
