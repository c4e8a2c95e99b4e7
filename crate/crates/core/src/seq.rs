//! Sequence types shared by every algorithm in the crate.
//!
//! Alignment indexing is 0-based throughout: entry `i` of a distance array
//! scores the pattern against `text[i..i + m]`.

use std::fmt;
use std::ops::Index;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Largest symbol value accepted after normalization. Keeps every distance sum
/// comfortably inside 64-bit arithmetic for texts up to 2^20 symbols.
pub const MAX_SYMBOL: u64 = 1 << 40;

/// Non-empty sequence of integers bounded by `max_value`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntSequence {
    data: Vec<u64>,
    max_value: u64,
}

impl IntSequence {
    pub fn new(data: Vec<u64>, max_value: u64) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptySequence);
        }
        let max_value = max_value.max(1);
        if max_value > MAX_SYMBOL {
            return Err(Error::RangeTooLarge {
                range: max_value as u128,
                limit: MAX_SYMBOL,
            });
        }
        if let Some(&value) = data.iter().find(|&&v| v > max_value) {
            return Err(Error::ValueOutOfRange {
                value,
                bound: max_value,
            });
        }
        Ok(Self { data, max_value })
    }

    /// Builds a sequence whose bound is its own maximum (at least 1).
    pub fn from_values(data: Vec<u64>) -> Result<Self> {
        let max = data.iter().copied().max().unwrap_or(0);
        Self::new(data, max)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn max_value(&self) -> u64 {
        self.max_value
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.data
    }

    pub fn to_wildcard(&self) -> WildcardSequence {
        WildcardSequence {
            data: self.data.iter().map(|&v| Symbol::Value(v)).collect(),
            max_value: self.max_value,
        }
    }
}

impl Index<usize> for IntSequence {
    type Output = u64;

    fn index(&self, index: usize) -> &u64 {
        &self.data[index]
    }
}

/// A symbol or the wildcard, which is at distance 0 from everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Value(u64),
    Wildcard,
}

impl Symbol {
    pub fn value(self) -> Option<u64> {
        match self {
            Symbol::Value(v) => Some(v),
            Symbol::Wildcard => None,
        }
    }

    pub fn is_wildcard(self) -> bool {
        matches!(self, Symbol::Wildcard)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Value(v) => write!(f, "{v}"),
            Symbol::Wildcard => f.write_str("*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WildcardSequence {
    data: Vec<Symbol>,
    max_value: u64,
}

impl WildcardSequence {
    pub fn new(data: Vec<Symbol>, max_value: u64) -> Result<Self> {
        let max_value = max_value.max(1);
        for symbol in &data {
            if let Symbol::Value(v) = *symbol {
                if v > max_value {
                    return Err(Error::ValueOutOfRange {
                        value: v,
                        bound: max_value,
                    });
                }
            }
        }
        Ok(Self { data, max_value })
    }

    pub fn from_symbols(data: Vec<Symbol>) -> Self {
        let max = data.iter().filter_map(|s| s.value()).max().unwrap_or(0);
        Self {
            data,
            max_value: max.max(1),
        }
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn max_value(&self) -> u64 {
        self.max_value
    }

    pub fn wildcard_count(&self) -> usize {
        self.data.iter().filter(|s| s.is_wildcard()).count()
    }
}

impl Index<usize> for WildcardSequence {
    type Output = Symbol;

    fn index(&self, index: usize) -> &Symbol {
        &self.data[index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub symbol: Symbol,
    pub len: usize,
}

/// Run-length encoding with maximal runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RleSequence {
    runs: Vec<Run>,
    total_length: usize,
}

impl RleSequence {
    /// Validates the run list: positive lengths, adjacent runs differ, and the
    /// lengths sum to `total_length`.
    pub fn new(runs: Vec<Run>, total_length: usize) -> Result<Self> {
        if let Some(r) = runs.iter().find(|r| r.len == 0) {
            return Err(Error::InvalidParameter(format!(
                "zero-length run of {}",
                r.symbol
            )));
        }
        if runs.windows(2).any(|w| w[0].symbol == w[1].symbol) {
            return Err(Error::InvalidParameter(
                "adjacent runs carry the same symbol".into(),
            ));
        }
        let actual: usize = runs.iter().map(|r| r.len).sum();
        if actual != total_length {
            return Err(Error::LengthMismatch {
                declared: total_length,
                actual,
            });
        }
        Ok(Self { runs, total_length })
    }

    /// Merges adjacent equal runs; used after symbol maps that may collapse
    /// neighbouring runs.
    pub fn from_runs_merging(runs: impl IntoIterator<Item = Run>) -> Self {
        let mut merged: Vec<Run> = Vec::new();
        let mut total_length = 0;
        for run in runs.into_iter().filter(|r| r.len > 0) {
            total_length += run.len;
            match merged.last_mut() {
                Some(last) if last.symbol == run.symbol => last.len += run.len,
                _ => merged.push(run),
            }
        }
        Self {
            runs: merged,
            total_length,
        }
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn total_length(&self) -> usize {
        self.total_length
    }

    /// Applies a symbol map run-wise; the result never has more runs.
    pub fn map_symbols(&self, f: impl Fn(Symbol) -> Symbol) -> Self {
        Self::from_runs_merging(self.runs.iter().map(|r| Run {
            symbol: f(r.symbol),
            len: r.len,
        }))
    }

    /// Runs paired with their start position.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, Run)> + '_ {
        self.runs.iter().scan(0usize, |start, &run| {
            let s = *start;
            *start += run.len;
            Some((s, run))
        })
    }
}

pub fn rle_encode(s: &WildcardSequence) -> RleSequence {
    RleSequence::from_runs_merging(s.as_slice().iter().map(|&symbol| Run { symbol, len: 1 }))
}

pub fn rle_decode(r: &RleSequence) -> WildcardSequence {
    let data = r
        .runs
        .iter()
        .flat_map(|run| std::iter::repeat_n(run.symbol, run.len))
        .collect();
    WildcardSequence::from_symbols(data)
}

/// One entry of a distance array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(v) => Some(v),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Distance::Infinite)
    }

    pub fn capped(self, k: u64) -> Self {
        match self {
            Distance::Finite(v) if v <= k => self,
            _ => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(v) => write!(f, "{v}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Per-alignment scores; entry `i` scores the pattern against `text[i..i + m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DistanceArray {
    scores: Vec<Distance>,
}

impl DistanceArray {
    pub fn new(scores: Vec<Distance>) -> Self {
        Self { scores }
    }

    pub fn from_finite(values: impl IntoIterator<Item = u64>) -> Self {
        values.into_iter().map(Distance::Finite).collect()
    }

    /// Converts signed exact results; a negative entry means a broken identity.
    pub fn from_signed(values: &[i64]) -> Result<Self> {
        values
            .iter()
            .map(|&v| {
                u64::try_from(v)
                    .map(Distance::Finite)
                    .map_err(|_| Error::ReductionIdentityViolated(format!("negative distance {v}")))
            })
            .collect()
    }

    pub fn infinite(len: usize) -> Self {
        Self {
            scores: vec![Distance::Infinite; len],
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn as_slice(&self) -> &[Distance] {
        &self.scores
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Distance> {
        self.scores.iter()
    }

    pub fn get(&self, i: usize) -> Option<Distance> {
        self.scores.get(i).copied()
    }

    pub fn set(&mut self, i: usize, d: Distance) {
        self.scores[i] = d;
    }

    /// Finite entries as plain integers, or `None` if any entry is infinite.
    pub fn to_finite(&self) -> Option<Vec<u64>> {
        self.scores.iter().map(|d| d.finite()).collect()
    }

    pub fn has_infinite(&self) -> bool {
        self.scores.iter().any(|d| d.is_infinite())
    }

    pub fn into_vec(self) -> Vec<Distance> {
        self.scores
    }
}

impl Index<usize> for DistanceArray {
    type Output = Distance;

    fn index(&self, index: usize) -> &Distance {
        &self.scores[index]
    }
}

impl FromIterator<Distance> for DistanceArray {
    fn from_iter<I: IntoIterator<Item = Distance>>(iter: I) -> Self {
        Self {
            scores: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a DistanceArray {
    type Item = &'a Distance;
    type IntoIter = std::slice::Iter<'a, Distance>;

    fn into_iter(self) -> Self::IntoIter {
        self.scores.iter()
    }
}

/// Shifts `raw` by `N = max(0, -min(raw))` so every entry is non-negative.
pub fn normalize(raw: &[i64]) -> Result<IntSequence> {
    Ok(normalize_all(&[raw])?.0.remove(0))
}

/// Normalizes several sequences with one common shift, so distances between
/// them are preserved. Returns the sequences and the shift applied.
pub fn normalize_all(raws: &[&[i64]]) -> Result<(Vec<IntSequence>, u64)> {
    if raws.is_empty() || raws.iter().any(|r| r.is_empty()) {
        return Err(Error::EmptySequence);
    }
    let min = raws.iter().flat_map(|r| r.iter()).copied().min().unwrap();
    let max = raws.iter().flat_map(|r| r.iter()).copied().max().unwrap();
    let shift: i128 = if min < 0 { -(min as i128) } else { 0 };
    let top = max as i128 + shift;
    if top > MAX_SYMBOL as i128 {
        return Err(Error::RangeTooLarge {
            range: top as u128,
            limit: MAX_SYMBOL,
        });
    }
    let seqs = raws
        .iter()
        .map(|r| {
            let data = r.iter().map(|&v| (v as i128 + shift) as u64).collect();
            IntSequence::new(data, top as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((seqs, shift as u64))
}

/// Deterministic synthetic sequence over `[0, alphabet_size)`.
///
/// With a period `ℓ` the output is `ℓ`-periodic except for exactly
/// `corruption_count` positions overwritten by fresh random symbols.
pub fn generate(
    length: usize,
    alphabet_size: u64,
    period: Option<usize>,
    corruption_count: usize,
    seed: u64,
) -> Result<IntSequence> {
    if length == 0 {
        return Err(Error::EmptySequence);
    }
    if alphabet_size == 0 {
        return Err(Error::InvalidParameter(
            "alphabet size must be at least 1".into(),
        ));
    }
    if corruption_count > length {
        return Err(Error::InvalidParameter(format!(
            "{corruption_count} corruptions requested for length {length}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut data: Vec<u64> = match period {
        Some(0) => return Err(Error::InvalidParameter("period must be positive".into())),
        Some(p) if p > length => {
            return Err(Error::InvalidParameter(format!(
                "period {p} exceeds length {length}"
            )))
        }
        Some(p) => {
            let base: Vec<u64> = (0..p).map(|_| rng.random_range(0..alphabet_size)).collect();
            (0..length).map(|i| base[i % p]).collect()
        }
        None => (0..length)
            .map(|_| rng.random_range(0..alphabet_size))
            .collect(),
    };
    for pos in sample(&mut rng, length, corruption_count) {
        data[pos] = rng.random_range(0..alphabet_size);
    }
    IntSequence::new(data, alphabet_size.saturating_sub(1))
}
