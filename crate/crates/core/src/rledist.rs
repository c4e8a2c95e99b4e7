//! Exact text-to-pattern distances on run-length encoded inputs with wildcards.
//!
//! A text block `[u, v]` and a pattern block `[y, z]` overlap at alignment `i`
//! in `|[u, v] ∩ [i + y, i + z]|` positions. As a function of `i` this is a
//! trapezoid, a sum of four hinge functions, so its second difference
//! `D²S[i] = S[i + 2] − 2·S[i + 1] + S[i]` is nonzero at only four indices.
//! Accumulating those updates for every relevant block pair and integrating
//! from two directly computed anchors recovers `S` exactly.

use std::collections::HashMap;

use crate::convolve::correlate;
use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::seq::{rle_encode, DistanceArray, RleSequence, Run, Symbol, WildcardSequence};

/// Second discrete difference of a score array plus the two leading values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondDerivative {
    pub d2: Vec<i64>,
    pub anchors: [i64; 2],
    pub len: usize,
}

impl SecondDerivative {
    pub fn from_scores(s: &[i64]) -> Self {
        let d2 = s.windows(3).map(|w| w[2] - 2 * w[1] + w[0]).collect();
        Self {
            d2,
            anchors: [
                s.first().copied().unwrap_or(0),
                s.get(1).copied().unwrap_or(0),
            ],
            len: s.len(),
        }
    }

    fn zeros(len: usize) -> Self {
        Self {
            d2: vec![0; len.saturating_sub(2)],
            anchors: [0, 0],
            len,
        }
    }

    /// Adds `weight` times the overlap trapezoid of text block `[u, v]` and
    /// pattern block `[y, z]`. Updates outside the stored range only affect
    /// alignments covered by the anchors or past the end, and are dropped.
    fn add_block_pair(&mut self, (u, v): (i64, i64), (y, z): (i64, i64), weight: i64) {
        let len = self.d2.len() as i64;
        for (index, w) in [
            (u - z - 2, weight),
            (u - y - 1, -weight),
            (v - z - 1, -weight),
            (v - y, weight),
        ] {
            if (0..len).contains(&index) {
                self.d2[index as usize] += w;
            }
        }
    }

    /// Inverse of double differencing.
    pub fn integrate(&self) -> Vec<i64> {
        let mut s = Vec::with_capacity(self.len);
        s.extend(self.anchors.iter().take(self.len));
        for &d in &self.d2 {
            let k = s.len();
            s.push(d + 2 * s[k - 1] - s[k - 2]);
        }
        s
    }
}

pub fn integrate(d2: &SecondDerivative) -> Vec<i64> {
    d2.integrate()
}

fn check_lengths(text: &RleSequence, pattern: &RleSequence) -> Result<(usize, usize)> {
    let (n, m) = (text.total_length(), pattern.total_length());
    if m == 0 {
        return Err(Error::InvalidParameter("empty pattern".into()));
    }
    if m > n {
        return Err(Error::PatternLongerThanText {
            text: n,
            pattern: m,
        });
    }
    Ok((n, m))
}

fn decode(r: &RleSequence) -> Vec<Symbol> {
    r.runs()
        .iter()
        .flat_map(|run| std::iter::repeat_n(run.symbol, run.len))
        .collect()
}

/// Non-wildcard blocks as `(symbol, first, last)`.
fn value_blocks(r: &RleSequence) -> Vec<(u64, i64, i64)> {
    r.blocks()
        .filter_map(|(start, run)| {
            run.symbol
                .value()
                .map(|v| (v, start as i64, (start + run.len - 1) as i64))
        })
        .collect()
}

fn anchor(text: &[Symbol], pattern: &[Symbol], i: usize, pair: impl Fn(u64, u64) -> i64) -> i64 {
    pattern
        .iter()
        .zip(&text[i..])
        .filter_map(|(p, t)| match (t, p) {
            (Symbol::Value(a), Symbol::Value(b)) => Some(pair(*a, *b)),
            _ => None,
        })
        .sum()
}

fn set_anchors(
    d: &mut SecondDerivative,
    text: &[Symbol],
    pattern: &[Symbol],
    pair: impl Fn(u64, u64) -> i64 + Copy,
) {
    d.anchors[0] = anchor(text, pattern, 0, pair);
    if d.len > 1 {
        d.anchors[1] = anchor(text, pattern, 1, pair);
    }
}

/// Exact Hamming distance with wildcard semantics.
pub fn rle_ham(text: &RleSequence, pattern: &RleSequence) -> Result<DistanceArray> {
    rle_ham_counted(text, pattern, &WorkCounters::new())
}

pub fn rle_ham_counted(
    text: &RleSequence,
    pattern: &RleSequence,
    counters: &WorkCounters,
) -> Result<DistanceArray> {
    let (n, m) = check_lengths(text, pattern)?;
    let len = n - m + 1;

    let mut by_symbol: HashMap<u64, Vec<(i64, i64)>> = HashMap::new();
    for (v, u, e) in value_blocks(text) {
        by_symbol.entry(v).or_default().push((u, e));
    }
    let mut matches = SecondDerivative::zeros(len);
    let mut pairs = 0u64;
    for (v, y, z) in value_blocks(pattern) {
        if let Some(blocks) = by_symbol.get(&v) {
            for &block in blocks {
                matches.add_block_pair(block, (y, z), 1);
            }
            pairs += blocks.len() as u64;
        }
    }
    counters.add_block_pairs(pairs);

    let (t, p) = (decode(text), decode(pattern));
    set_anchors(&mut matches, &t, &p, |a, b| (a == b) as i64);
    let matches = matches.integrate();

    let indicator =
        |s: &[Symbol]| -> Vec<i64> { s.iter().map(|x| (!x.is_wildcard()) as i64).collect() };
    let aligned = correlate(&indicator(&t), &indicator(&p))?;
    let mismatches: Vec<i64> = aligned.iter().zip(&matches).map(|(a, b)| a - b).collect();
    DistanceArray::from_signed(&mismatches)
}

/// Exact L1 distance with wildcard semantics.
pub fn rle_l1(text: &RleSequence, pattern: &RleSequence) -> Result<DistanceArray> {
    rle_l1_counted(text, pattern, &WorkCounters::new())
}

pub fn rle_l1_counted(
    text: &RleSequence,
    pattern: &RleSequence,
    counters: &WorkCounters,
) -> Result<DistanceArray> {
    let (n, m) = check_lengths(text, pattern)?;
    let mut d = SecondDerivative::zeros(n - m + 1);
    let text_blocks = value_blocks(text);
    let pattern_blocks = value_blocks(pattern);
    for &(b, y, z) in &pattern_blocks {
        for &(a, u, v) in &text_blocks {
            if a != b {
                d.add_block_pair((u, v), (y, z), a.abs_diff(b) as i64);
            }
        }
    }
    counters.add_block_pairs((text_blocks.len() * pattern_blocks.len()) as u64);
    let (t, p) = (decode(text), decode(pattern));
    set_anchors(&mut d, &t, &p, |a, b| a.abs_diff(b) as i64);
    DistanceArray::from_signed(&d.integrate())
}

/// Splits a wildcard symbol into its two wildcard-free images: the first maps
/// `v ↦ v + 1` and `∗ ↦ 0`, the second is the non-wildcard indicator. For any
/// pair of symbols, `[a ≠ b]` with wildcard semantics equals the difference of
/// the plain mismatch indicators of the two images.
pub fn eliminate_wildcard(s: Symbol) -> (u64, u64) {
    match s {
        Symbol::Value(v) => (v + 1, 1),
        Symbol::Wildcard => (0, 0),
    }
}

/// Run-wise [`eliminate_wildcard`]; neither image has more runs than `s`.
pub fn eliminate_wildcards_rle(s: &RleSequence) -> (RleSequence, RleSequence) {
    let image = |pick: fn((u64, u64)) -> u64| {
        RleSequence::from_runs_merging(s.runs().iter().map(|r| Run {
            symbol: Symbol::Value(pick(eliminate_wildcard(r.symbol))),
            len: r.len,
        }))
    };
    (image(|p| p.0), image(|p| p.1))
}

/// Hamming distance between sparse wildcard sequences (at most `k` regular
/// symbols each) from two wildcard-free instances, each with at most `2k`
/// nonzero symbols in total, so a `2k`-capped backend is never capped.
pub fn sparse_to_capped<B>(
    text: &WildcardSequence,
    pattern: &WildcardSequence,
    k: usize,
    capped_backend: B,
) -> Result<DistanceArray>
where
    B: Fn(&[u64], &[u64], u64) -> Result<DistanceArray>,
{
    for s in [text, pattern] {
        let regular = s.len() - s.wildcard_count();
        if regular > k {
            return Err(Error::SparsityViolated {
                found: regular,
                allowed: k,
            });
        }
    }
    let split = |s: &WildcardSequence| -> (Vec<u64>, Vec<u64>) {
        s.as_slice().iter().map(|&x| eliminate_wildcard(x)).unzip()
    };
    let (t1, t2) = split(text);
    let (p1, p2) = split(pattern);
    let cap = 2 * k as u64;
    let first = capped_backend(&t1, &p1, cap)?;
    let second = capped_backend(&t2, &p2, cap)?;
    let diff: Vec<i64> = first
        .iter()
        .zip(&second)
        .map(|(a, b)| match (a.finite(), b.finite()) {
            (Some(a), Some(b)) => Ok(a as i64 - b as i64),
            _ => Err(Error::CappedBaseResult),
        })
        .collect::<Result<_>>()?;
    DistanceArray::from_signed(&diff)
}

/// Convenience: run-length encode both sides and compute [`rle_l1`].
pub fn wildcard_l1(text: &WildcardSequence, pattern: &WildcardSequence) -> Result<DistanceArray> {
    rle_l1(&rle_encode(text), &rle_encode(pattern))
}
