//! On-disk memo of exact probabilities keyed by `(m, n, r)`.
//!
//! Format: a header line `bbp-cache v1`, then one line per entry,
//! `m n r numerator denominator`, all decimal. Entries are sorted, so the file
//! content depends only on its set of entries.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::arith::{ratio, ExactProbability};
use crate::error::{Error, Result};
use crate::solvers::ProblemInstance;

pub const CACHE_HEADER: &str = "bbp-cache v1";

#[derive(Debug, Clone, Default)]
pub struct ProbCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(usize, usize, usize), ExactProbability>,
    dirty: bool,
}

impl ProbCache {
    /// In-memory cache with no backing file.
    pub fn in_memory() -> Self {
        ProbCache::default()
    }

    /// Loads `path`, or starts empty if it does not exist yet.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = ProbCache { path: Some(path.clone()), ..Default::default() };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: String| Error::CacheCorrupt { path: path.clone(), reason };
        let mut lines = text.lines();
        match lines.next() {
            Some(CACHE_HEADER) => {}
            Some(other) => return Err(corrupt(format!("unrecognized header {other:?}"))),
            None => return Err(corrupt("empty file".into())),
        }
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let fields: Vec<&str> = line.split_ascii_whitespace().collect();
            let [m, n, r, num, den] = fields[..] else {
                return Err(corrupt(format!("line {lineno}: expected 5 fields")));
            };
            let int = |s: &str| s.parse::<usize>().map_err(|_| corrupt(format!("line {lineno}: bad integer {s:?}")));
            let big = |s: &str| {
                s.parse::<num_bigint::BigUint>().map_err(|_| corrupt(format!("line {lineno}: bad integer {s:?}")))
            };
            let key = (int(m)?, int(n)?, int(r)?);
            let p = ratio(big(num)?, big(den)?).map_err(|_| corrupt(format!("line {lineno}: zero denominator")))?;
            if p.numer().to_string() != num || p.denom().to_string() != den || !p.is_probability() {
                return Err(corrupt(format!("line {lineno}: not a reduced probability")));
            }
            cache.entries.insert(key, p);
        }
        Ok(cache)
    }

    pub fn get(&self, inst: &ProblemInstance) -> Option<&ExactProbability> {
        self.entries.get(&(inst.m, inst.n, inst.r))
    }

    pub fn insert(&mut self, inst: ProblemInstance, p: ExactProbability) {
        if self.entries.insert((inst.m, inst.n, inst.r), p).is_none() {
            self.dirty = true;
        }
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = (ProblemInstance, ExactProbability)>) {
        for (inst, p) in items {
            self.insert(inst, p);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes the file if anything changed since loading.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        let tmp = path.with_extension("tmp");
        {
            let mut out = std::io::BufWriter::new(fs::File::create(&tmp)?);
            writeln!(out, "{CACHE_HEADER}")?;
            for ((m, n, r), p) in &self.entries {
                writeln!(out, "{m} {n} {r} {} {}", p.numer(), p.denom())?;
            }
            out.flush()?;
        }
        fs::rename(&tmp, path)?;
        self.dirty = false;
        Ok(())
    }
}
