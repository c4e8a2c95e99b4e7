//! Longest-common-prefix queries between text and pattern suffixes, and
//! capped L1 verification of single alignments by jumping from mismatch to
//! mismatch.

use crate::error::{Error, Result};
use crate::seq::Distance;

/// LCP oracle over `text # pattern`: suffix array by prefix doubling, Kasai
/// LCP array, and a sparse table for range minimum.
#[derive(Debug, Clone)]
pub struct LcpIndex {
    text_len: usize,
    pattern_len: usize,
    rank: Vec<u32>,
    sparse: Vec<Vec<u32>>,
}

fn suffix_array(s: &[u64]) -> Vec<usize> {
    let n = s.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut rank: Vec<usize> = s.iter().map(|v| sorted.binary_search(v).unwrap()).collect();
    let mut next = vec![0usize; n];
    let mut k = 1;
    loop {
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        next[sa[0]] = 0;
        for w in 1..n {
            next[sa[w]] = next[sa[w - 1]] + (key(sa[w - 1]) != key(sa[w])) as usize;
        }
        std::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1]] == n - 1 || k >= n {
            break;
        }
        k <<= 1;
    }
    sa
}

impl LcpIndex {
    pub fn build(text: &[u64], pattern: &[u64]) -> Self {
        let (n, m) = (text.len(), pattern.len());
        // 0 is the separator; symbols shift up by one
        let joined: Vec<u64> = text
            .iter()
            .map(|v| v + 1)
            .chain(std::iter::once(0))
            .chain(pattern.iter().map(|v| v + 1))
            .collect();
        let len = joined.len();
        let sa = suffix_array(&joined);
        let mut rank = vec![0u32; len];
        for (r, &i) in sa.iter().enumerate() {
            rank[i] = r as u32;
        }
        // Kasai: lcp[r] = LCP(sa[r - 1], sa[r])
        let mut lcp = vec![0u32; len];
        let mut h = 0usize;
        for i in 0..len {
            let r = rank[i] as usize;
            if r == 0 {
                h = 0;
                continue;
            }
            let j = sa[r - 1];
            while i + h < len && j + h < len && joined[i + h] == joined[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        }
        let mut sparse = vec![lcp];
        let mut width = 1;
        while 2 * width <= len {
            let prev = sparse.last().unwrap();
            let row = (0..=len - 2 * width)
                .map(|i| prev[i].min(prev[i + width]))
                .collect();
            sparse.push(row);
            width *= 2;
        }
        Self {
            text_len: n,
            pattern_len: m,
            rank,
            sparse,
        }
    }

    pub fn text_len(&self) -> usize {
        self.text_len
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    fn range_min(&self, lo: usize, hi: usize) -> u32 {
        let level = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        let row = &self.sparse[level];
        row[lo].min(row[hi + 1 - (1 << level)])
    }

    /// Longest common prefix of `text[i..]` and `pattern[j..]`.
    pub fn lcp(&self, i: usize, j: usize) -> usize {
        if i >= self.text_len || j >= self.pattern_len {
            return 0;
        }
        let a = self.rank[i] as usize;
        let b = self.rank[self.text_len + 1 + j] as usize;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.range_min(lo + 1, hi) as usize
    }
}

/// Exact L1 distance at alignment `i` if it is at most `k`, otherwise
/// infinite. Also returns the number of LCP jumps taken.
pub fn verify_alignment_traced(
    index: &LcpIndex,
    text: &[u64],
    pattern: &[u64],
    i: usize,
    k: u64,
) -> Result<(Distance, usize)> {
    let (n, m) = (text.len(), pattern.len());
    if n != index.text_len || m != index.pattern_len {
        return Err(Error::InvalidParameter(
            "sequences do not match the index".into(),
        ));
    }
    if m > n || i > n - m {
        return Err(Error::AlignmentOutOfRange {
            index: i,
            last: n.saturating_sub(m),
        });
    }
    let mut j = 0;
    let mut sum = 0u64;
    let mut jumps = 0;
    loop {
        j += index.lcp(i + j, j);
        jumps += 1;
        if j >= m {
            return Ok((Distance::Finite(sum), jumps));
        }
        sum += text[i + j].abs_diff(pattern[j]);
        if sum > k {
            return Ok((Distance::Infinite, jumps));
        }
        j += 1;
    }
}

pub fn verify_alignment(
    index: &LcpIndex,
    text: &[u64],
    pattern: &[u64],
    i: usize,
    k: u64,
) -> Result<Distance> {
    verify_alignment_traced(index, text, pattern, i, k).map(|(d, _)| d)
}
