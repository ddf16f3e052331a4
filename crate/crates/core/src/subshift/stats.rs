use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use serde::Serialize;

use super::{Alphabet, OrbitWindow, Symbol, Word};
use crate::error::{invalid, Error, Result};

/// Minimum ratio between sample length and word length for frequency
/// estimates.
pub const MIN_SAMPLING_RATIO: usize = 10;

/// The first `len` symbols `ω(0..len)`, extending the window when needed.
fn prefix(orbit: &OrbitWindow, len: usize) -> Result<Vec<Symbol>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    let hi = len as i64 - 1;
    let window = orbit.covering(0, hi).map_err(|e| match e {
        Error::BudgetExceeded { reached, .. } => Error::BudgetExceeded { needed: len, reached },
        other => other,
    })?;
    Ok(window.slice(0, hi).expect("window covers prefix").to_vec())
}

/// Distinct factors of length `n` among the first `sample_length` symbols.
/// The set size is the empirical complexity `p̂(n)`.
pub fn words_of_length(orbit: &OrbitWindow, n: usize, sample_length: usize) -> Result<BTreeSet<Word>> {
    if n == 0 || sample_length < n {
        return Err(invalid(format!(
            "need sample_length >= n >= 1, got n = {n}, L = {sample_length}"
        )));
    }
    let sample = prefix(orbit, sample_length)?;
    Ok(sample.windows(n).map(Word::from).collect())
}

/// Occurrence counts of length-`n` factors in a sample of `L` consecutive
/// symbols.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderStats {
    pub n: usize,
    pub sample_length: usize,
    pub counts: BTreeMap<Word, u64>,
}

impl CylinderStats {
    /// Number of length-`n` positions in the sample, `L − n + 1`.
    pub fn positions(&self) -> u64 {
        (self.sample_length - self.n + 1) as u64
    }

    pub fn frequency(&self, word: &Word) -> f64 {
        self.counts.get(word).copied().unwrap_or(0) as f64 / self.positions() as f64
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (&Word, f64)> + '_ {
        let total = self.positions() as f64;
        self.counts.iter().map(move |(w, &c)| (w, c as f64 / total))
    }

    /// Smallest observed frequency, the empirical `η̂(n)`.
    pub fn min_frequency(&self) -> f64 {
        self.counts.values().copied().min().unwrap_or(0) as f64 / self.positions() as f64
    }

    /// CSV with columns `word,count,frequency`.
    pub fn write_csv<W: Write>(&self, alphabet: &Alphabet, mut out: W) -> std::io::Result<()> {
        writeln!(out, "word,count,frequency")?;
        for (w, c) in &self.counts {
            let f = *c as f64 / self.positions() as f64;
            writeln!(out, "{},{},{}", alphabet.render(&w.0), c, crate::fmt_f64(f))?;
        }
        Ok(())
    }
}

fn count_factors(sample: &[Symbol], n: usize) -> BTreeMap<Word, u64> {
    let mut counts: HashMap<&[Symbol], u64> = HashMap::new();
    for w in sample.windows(n) {
        *counts.entry(w).or_default() += 1;
    }
    counts.into_iter().map(|(w, c)| (Word::from(w), c)).collect()
}

/// Empirical cylinder measures `count(v) / (L − n + 1)` over `ω(0..L)`.
pub fn cylinder_frequencies(orbit: &OrbitWindow, n: usize, sample_length: usize) -> Result<CylinderStats> {
    if n == 0 || sample_length < MIN_SAMPLING_RATIO * n {
        return Err(invalid(format!(
            "cylinder frequencies need n >= 1 and L >= {MIN_SAMPLING_RATIO}·n (n = {n}, L = {sample_length})"
        )));
    }
    let sample = prefix(orbit, sample_length)?;
    Ok(CylinderStats {
        n,
        sample_length,
        counts: count_factors(&sample, n),
    })
}

/// One entry of the Boshernitzan sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoshernitzanPoint {
    pub n: usize,
    pub eta: f64,
    pub n_eta: f64,
}

/// `n·η̂(n)` for `n = 1..=n_max`, with `η̂(n)` the smallest empirical
/// frequency of an observed length-`n` factor.
pub fn boshernitzan_sequence(
    orbit: &OrbitWindow,
    n_max: usize,
    sample_length: usize,
) -> Result<Vec<BoshernitzanPoint>> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    if sample_length < MIN_SAMPLING_RATIO * n_max {
        return Err(invalid(format!(
            "L = {sample_length} is below {MIN_SAMPLING_RATIO}·n_max"
        )));
    }
    let sample = prefix(orbit, sample_length)?;
    Ok((1..=n_max)
        .map(|n| {
            let stats = CylinderStats {
                n,
                sample_length,
                counts: count_factors(&sample, n),
            };
            let eta = stats.min_frequency();
            BoshernitzanPoint {
                n,
                eta,
                n_eta: n as f64 * eta,
            }
        })
        .collect())
}

/// Smallest `m ≤ max_period` with `ω(k + m) = ω(k)` for every probed `k`,
/// scanning `ω(0..probe_length)`.
///
/// `None` only says no such period was seen on the probe window.
pub fn detect_period(orbit: &OrbitWindow, max_period: usize, probe_length: usize) -> Result<Option<usize>> {
    if max_period == 0 || probe_length < 2 * max_period {
        return Err(invalid(format!(
            "need probe_length >= 2·max_period >= 2 (max_period = {max_period}, probe_length = {probe_length})"
        )));
    }
    let sample = prefix(orbit, probe_length)?;
    Ok((1..=max_period).find(|&m| (0..probe_length - m).all(|k| sample[k] == sample[k + m])))
}
