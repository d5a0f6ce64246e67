//! Batch runs: the `n_max` grid, cross-algorithm sweeps and timing comparisons.

mod bench;
mod xcheck;

use std::fmt::Write as _;
use std::str::FromStr;

use crate::arith::{ratio, ExactProbability};
use crate::cache::ProbCache;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::search::{find_nmax_with, SearchOptions, SearchRequest, SearchResult};
use crate::solvers::{AlgorithmId, Mode};

pub use bench::{benchmark, benchmark_with, BenchOutcome, BenchReport, BenchRow, BenchTarget, DEFAULT_TIMEOUT};
pub use xcheck::{cross_check, cross_check_with, Divergence, InstanceCheck, XCheckBounds, XCheckOptions, XCheckReport};

/// Day counts of the standard grid.
pub const STANDARD_DAYS: [usize; 8] = [10, 25, 50, 100, 200, 365, 500, 1000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Unsupported(format!("unknown table format {s:?} (expected csv|markdown|json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub m_values: Vec<usize>,
    pub r_values: Vec<usize>,
    pub gamma: ExactProbability,
    pub algorithm: AlgorithmId,
    pub mode: Mode,
    pub output_format: OutputFormat,
}

impl Default for TableSpec {
    /// Days 10..1000, caps 1..=10, threshold 1/2, direct algorithm in exact mode.
    fn default() -> Self {
        TableSpec {
            m_values: STANDARD_DAYS.to_vec(),
            r_values: (1..=10).collect(),
            gamma: ratio(1u32, 2u32).expect("nonzero"),
            algorithm: AlgorithmId::Direct,
            mode: Mode::Exact,
            output_format: OutputFormat::Csv,
        }
    }
}

impl TableSpec {
    fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() || self.r_values.is_empty() {
            return Err(Error::Unsupported("table needs at least one day count and one cap".into()));
        }
        if self.m_values.contains(&0) {
            return Err(Error::InvalidInstance("need at least one day".into()));
        }
        if self.r_values.contains(&0) {
            return Err(Error::InvalidInstance("cap per day must be at least 1".into()));
        }
        if self.gamma.is_zero() || !self.gamma.is_probability() {
            return Err(Error::GammaOutOfRange(self.gamma.to_string()));
        }
        Ok(())
    }
}

/// `n_max` grid: `cells[i][j]` answers `r_values[i]`, `m_values[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableResult {
    pub m_values: Vec<usize>,
    pub r_values: Vec<usize>,
    pub gamma: ExactProbability,
    pub algorithm: AlgorithmId,
    pub mode: Mode,
    pub cells: Vec<Vec<SearchResult>>,
}

impl TableResult {
    pub fn n_max(&self, r: usize, m: usize) -> Option<usize> {
        let i = self.r_values.iter().position(|&x| x == r)?;
        let j = self.m_values.iter().position(|&x| x == m)?;
        Some(self.cells[i][j].n_max)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => self.to_markdown(),
            OutputFormat::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("r\\m");
        for m in &self.m_values {
            write!(out, ",{m}").unwrap();
        }
        out.push('\n');
        for (r, row) in self.r_values.iter().zip(&self.cells) {
            write!(out, "{r}").unwrap();
            for cell in row {
                write!(out, ",{}", cell.n_max).unwrap();
            }
            out.push('\n');
        }
        out
    }

    fn to_markdown(&self) -> String {
        let mut out = String::from("| r \\ m |");
        for m in &self.m_values {
            write!(out, " {m} |").unwrap();
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(self.m_values.len()));
        out.push('\n');
        for (r, row) in self.r_values.iter().zip(&self.cells) {
            write!(out, "| {r} |").unwrap();
            for cell in row {
                write!(out, " {} |", cell.n_max).unwrap();
            }
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let cells: Vec<usize> = self.cells.iter().flatten().map(|c| c.n_max).collect();
        let doc = serde_json::json!({
            "gamma": self.gamma.to_string(),
            "algorithm": self.algorithm.name(),
            "mode": self.mode.name(),
            "m_values": self.m_values,
            "r_values": self.r_values,
            "cells": cells,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("plain JSON values");
        s.push('\n');
        s
    }
}

pub fn generate_table(spec: &TableSpec) -> Result<TableResult> {
    generate_table_with(spec, Exec::default(), None)
}

/// Evaluates every cell as an independent job and assembles them in spec order.
///
/// With a cache, cached probabilities are used and newly computed ones are added to it.
pub fn generate_table_with(spec: &TableSpec, exec: Exec, cache: Option<&mut ProbCache>) -> Result<TableResult> {
    spec.validate()?;
    let cols = spec.m_values.len();
    let mut jobs: Vec<(usize, SearchRequest)> = Vec::new();
    for (i, &r) in spec.r_values.iter().enumerate() {
        for (j, &m) in spec.m_values.iter().enumerate() {
            let req = SearchRequest::new(m, r, spec.gamma.clone()).with_algorithm(spec.algorithm, spec.mode);
            jobs.push((i * cols + j, req));
        }
    }
    // Largest search ranges first so long cells do not start last.
    jobs.sort_by_key(|(idx, req)| (std::cmp::Reverse(req.m * req.r), *idx));

    let reader = cache.as_deref();
    let opts = SearchOptions { cache: reader, ..Default::default() };
    let outcomes = exec::map(&jobs, exec, |(_, req)| find_nmax_with(req, &opts));

    let mut slots: Vec<Option<SearchResult>> = vec![None; jobs.len()];
    let mut fresh = Vec::new();
    for ((idx, _), outcome) in jobs.iter().zip(outcomes) {
        let outcome = outcome?;
        slots[*idx] = Some(outcome.result);
        fresh.extend(outcome.fresh);
    }
    if let Some(cache) = cache {
        cache.extend(fresh);
    }
    let mut flat = slots.into_iter().map(|s| s.expect("every cell computed"));
    let cells = (0..spec.r_values.len()).map(|_| flat.by_ref().take(cols).collect()).collect();
    Ok(TableResult {
        m_values: spec.m_values.clone(),
        r_values: spec.r_values.clone(),
        gamma: spec.gamma.clone(),
        algorithm: spec.algorithm,
        mode: spec.mode,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(m: Vec<usize>, r: Vec<usize>) -> TableSpec {
        TableSpec { m_values: m, r_values: r, ..TableSpec::default() }
    }

    #[test]
    fn single_cells() {
        let t = generate_table(&small(vec![1], vec![4])).unwrap();
        assert_eq!(t.n_max(4, 1), Some(4));
        let t = generate_table(&small(vec![3], vec![1])).unwrap();
        assert_eq!(t.n_max(1, 3), Some(2));
    }

    #[test]
    fn renderings() {
        let t = generate_table(&small(vec![10, 25], vec![1, 2])).unwrap();
        assert_eq!(t.render(OutputFormat::Csv), "r\\m,10,25\n1,4,6\n2,9,15\n");
        assert_eq!(
            t.render(OutputFormat::Markdown),
            "| r \\ m | 10 | 25 |\n|---|---|---|\n| 1 | 4 | 6 |\n| 2 | 9 | 15 |\n"
        );
        let json: serde_json::Value = serde_json::from_str(&t.render(OutputFormat::Json)).unwrap();
        assert_eq!(json["cells"], serde_json::json!([4, 6, 9, 15]));
        assert_eq!(json["gamma"], "1/2");
        assert_eq!(json["algorithm"], "direct");
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let spec = small(vec![10, 25, 50], vec![1, 2, 3]);
        let seq = generate_table_with(&spec, Exec::Sequential, None).unwrap();
        let par = generate_table_with(&spec, Exec::Parallel { jobs: Some(3) }, None).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.render(OutputFormat::Csv), par.render(OutputFormat::Csv));
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_table(&small(vec![], vec![1])).is_err());
        assert!(generate_table(&small(vec![10], vec![0])).is_err());
        let mut spec = small(vec![10], vec![1]);
        spec.gamma = ExactProbability::zero();
        assert!(generate_table(&spec).is_err());
    }

    #[test]
    fn cache_is_filled_and_reused() {
        let spec = small(vec![10, 25], vec![2]);
        let mut cache = ProbCache::in_memory();
        let first = generate_table_with(&spec, Exec::Sequential, Some(&mut cache)).unwrap();
        assert!(!cache.is_empty());
        let filled = cache.len();
        let second = generate_table_with(&spec, Exec::Sequential, Some(&mut cache)).unwrap();
        assert_eq!(first, second);
        assert_eq!(cache.len(), filled);
    }

    #[test]
    fn format_names() {
        assert_eq!("md".parse::<OutputFormat>().unwrap(), OutputFormat::Markdown);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
