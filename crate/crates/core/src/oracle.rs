//! Brute-force reference implementations.
//!
//! These are plain double loops with no shared code from the fast paths, so
//! they can serve as ground truth in tests.

use crate::error::{Error, Result};
use crate::seq::{Distance, DistanceArray, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    L1,
    Hamming,
}

fn check(n: usize, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("empty pattern".into()));
    }
    if m > n {
        return Err(Error::PatternLongerThanText {
            text: n,
            pattern: m,
        });
    }
    Ok(())
}

pub fn naive_l1(text: &[u64], pattern: &[u64]) -> Result<DistanceArray> {
    check(text.len(), pattern.len())?;
    let mut out = Vec::new();
    for i in 0..=text.len() - pattern.len() {
        let mut sum = 0u64;
        for j in 0..pattern.len() {
            let (a, b) = (text[i + j], pattern[j]);
            sum += a.abs_diff(b);
        }
        out.push(Distance::Finite(sum));
    }
    Ok(DistanceArray::new(out))
}

pub fn naive_ham(text: &[u64], pattern: &[u64]) -> Result<DistanceArray> {
    check(text.len(), pattern.len())?;
    let mut out = Vec::new();
    for i in 0..=text.len() - pattern.len() {
        let mut count = 0u64;
        for j in 0..pattern.len() {
            if text[i + j] != pattern[j] {
                count += 1;
            }
        }
        out.push(Distance::Finite(count));
    }
    Ok(DistanceArray::new(out))
}

/// Wildcard-aware distance: a pair involving a wildcard contributes 0.
pub fn naive_wild(text: &[Symbol], pattern: &[Symbol], metric: Metric) -> Result<DistanceArray> {
    check(text.len(), pattern.len())?;
    let mut out = Vec::new();
    for i in 0..=text.len() - pattern.len() {
        let mut sum = 0u64;
        for j in 0..pattern.len() {
            if let (Symbol::Value(a), Symbol::Value(b)) = (text[i + j], pattern[j]) {
                sum += match metric {
                    Metric::L1 => a.abs_diff(b),
                    Metric::Hamming => (a != b) as u64,
                };
            }
        }
        out.push(Distance::Finite(sum));
    }
    Ok(DistanceArray::new(out))
}

/// Entries above `k` become infinite.
pub fn cap(scores: &DistanceArray, k: u64) -> DistanceArray {
    scores.iter().map(|d| d.capped(k)).collect()
}
