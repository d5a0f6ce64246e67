use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::arith::ExactProbability;
use crate::error::{Deadline, Footprint, Result};
use crate::exec::{self, Exec};
use crate::solvers::{
    count_bounded_compositions, prob_bruteforce_with_limit, AlgorithmId, CountingTable, DayTable,
    DirectExact, ProblemInstance, StirlingSum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XCheckBounds {
    pub max_m: usize,
    pub max_n: usize,
    pub max_r: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct XCheckOptions {
    pub exec: Exec,
    /// The oracle joins an instance only when it has at most this many bounded compositions.
    pub oracle_limit: u64,
}

impl Default for XCheckOptions {
    fn default() -> Self {
        XCheckOptions { exec: Exec::default(), oracle_limit: 20_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceCheck {
    pub instance: ProblemInstance,
    /// All four recurrences returned the same rational.
    pub agree: bool,
    /// `Some(matches)` when the oracle was run on this instance.
    pub oracle: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub instance: ProblemInstance,
    pub outputs: Vec<(AlgorithmId, ExactProbability)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XCheckReport {
    pub bounds: XCheckBounds,
    pub checks: Vec<InstanceCheck>,
    pub divergences: Vec<Divergence>,
}

impl XCheckReport {
    pub fn passed(&self) -> bool {
        self.divergences.is_empty()
    }

    pub fn oracle_compared(&self) -> usize {
        self.checks.iter().filter(|c| c.oracle.is_some()).count()
    }

    pub fn render(&self) -> String {
        let b = self.bounds;
        let mut out = String::new();
        writeln!(out, "bounds: m <= {}, n <= {}, r <= {}", b.max_m, b.max_n, b.max_r).unwrap();
        writeln!(out, "instances: {}", self.checks.len()).unwrap();
        writeln!(out, "oracle compared: {}", self.oracle_compared()).unwrap();
        writeln!(out, "divergences: {}", self.divergences.len()).unwrap();
        if let Some(first) = self.divergences.first() {
            writeln!(out, "first divergence at {}:", first.instance).unwrap();
            for (algo, p) in &first.outputs {
                writeln!(out, "  {algo}: {p}").unwrap();
            }
        }
        writeln!(out, "{}", if self.passed() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

/// Tables for one cap `r`, sized to the whole sweep.
struct Tables {
    day: DayTable,
    counting: CountingTable,
    stirling: StirlingSum,
    direct: DirectExact,
}

impl Tables {
    /// Footprint of all four tables for one cap.
    fn footprint(b: XCheckBounds, r: usize) -> Footprint {
        DayTable::footprint(b.max_m, b.max_n, r)
            .merge(CountingTable::full_footprint(b.max_m, b.max_n, r))
            .merge(StirlingSum::footprint(b.max_n, b.max_m.min(b.max_n), r))
            .merge(DirectExact::full_footprint(b.max_m, b.max_n, r))
    }

    fn build(b: XCheckBounds, r: usize) -> Result<Self> {
        let d = Deadline::NONE;
        Ok(Tables {
            day: DayTable::build(b.max_m, b.max_n, r, &d)?,
            counting: CountingTable::full(b.max_m, b.max_n, r, &d)?,
            stirling: StirlingSum::build(b.max_n, b.max_m.min(b.max_n), r, &d)?,
            direct: DirectExact::full(b.max_m, b.max_n, r, &d)?,
        })
    }

    fn outputs(&self, inst: ProblemInstance) -> Vec<(AlgorithmId, ExactProbability)> {
        let ProblemInstance { m, n, .. } = inst;
        vec![
            (AlgorithmId::DayAtATime, self.day.prob(m, n)),
            (AlgorithmId::Counting, inst.prob_of_count(self.counting.count_valid(m, n))),
            (AlgorithmId::Stirling, inst.prob_of_count(self.stirling.count_valid(m, n))),
            (AlgorithmId::Direct, self.direct.prob_at(m, n)),
        ]
    }
}

pub fn cross_check(bounds: XCheckBounds) -> Result<XCheckReport> {
    cross_check_with(bounds, XCheckOptions::default())
}

/// Runs every recurrence on every instance in the box `1..=max_m` x `0..=max_n` x `1..=max_r`,
/// plus the oracle where its enumeration is small enough.
///
/// Disagreements are reported, not returned as errors; the only error is a box
/// too large for the tables to fit in memory.
pub fn cross_check_with(bounds: XCheckBounds, opts: XCheckOptions) -> Result<XCheckReport> {
    let caps: Vec<usize> = (1..=bounds.max_r).collect();
    for &r in &caps {
        Tables::footprint(bounds, r).check()?;
    }
    let tables = exec::map(&caps, opts.exec, |&r| Tables::build(bounds, r))
        .into_iter()
        .collect::<Result<Vec<Tables>>>()?;

    let mut instances = Vec::new();
    for r in 1..=bounds.max_r {
        for m in 1..=bounds.max_m {
            for n in 0..=bounds.max_n {
                instances.push(ProblemInstance { m, n, r });
            }
        }
    }
    let results = exec::map(&instances, opts.exec, |&inst| {
        let mut outputs = tables[inst.r - 1].outputs(inst);
        let agree = outputs.windows(2).all(|w| w[0].1 == w[1].1);
        let admissible = count_bounded_compositions(inst.m, inst.n, inst.r)
            .to_u64()
            .is_some_and(|c| c <= opts.oracle_limit);
        let oracle = admissible.then(|| {
            let truth = prob_bruteforce_with_limit(inst, opts.oracle_limit).expect("admitted by the guard");
            let matches = outputs.iter().all(|(_, p)| *p == truth);
            outputs.push((AlgorithmId::BruteForce, truth));
            matches
        });
        let check = InstanceCheck { instance: inst, agree, oracle };
        let divergence = (!agree || oracle == Some(false)).then_some(Divergence { instance: inst, outputs });
        (check, divergence)
    });

    let mut checks = Vec::with_capacity(results.len());
    let mut divergences = Vec::new();
    for (check, divergence) in results {
        checks.push(check);
        divergences.extend(divergence);
    }
    Ok(XCheckReport { bounds, checks, divergences })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_box() {
        let report = cross_check(XCheckBounds { max_m: 1, max_n: 3, max_r: 2 }).unwrap();
        assert!(report.passed());
        assert_eq!(report.checks.len(), 8);
        assert_eq!(report.oracle_compared(), 8);
    }

    #[test]
    fn small_box_with_oracle() {
        let report = cross_check(XCheckBounds { max_m: 5, max_n: 8, max_r: 4 }).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert!(report.checks.iter().all(|c| c.agree && c.oracle == Some(true)));
        assert!(report.render().ends_with("PASS\n"));
    }

    #[test]
    fn oversized_box_is_refused() {
        let err = cross_check(XCheckBounds { max_m: 1000, max_n: 4000, max_r: 10 }).unwrap_err();
        assert!(err.is_refusal());
    }
}
