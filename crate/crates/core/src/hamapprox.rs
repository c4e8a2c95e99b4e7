//! Constant-factor Hamming estimates from random binary projections.
//!
//! Every repetition maps each symbol to a uniformly random bit; two different
//! symbols are separated with probability exactly 1/2, so twice the mean
//! projected mismatch count is an unbiased estimate. Repetitions are packed 64
//! to a machine word: bit `r` of a symbol's hash word is its projection in
//! repetition `r`, and one XOR + popcount evaluates 64 binary instances.

use rand::Rng;

use crate::convolve::correlate;
use crate::error::{Error, Result};
use crate::rng::mix64;
use crate::seq::DistanceArray;

pub const DEFAULT_ZETA: f64 = 1.0 / 3.0;

/// Exact Hamming distance of binary sequences via two correlations.
pub fn ham_binary(text: &[u64], pattern: &[u64]) -> Result<DistanceArray> {
    let to_signed = |v: &[u64]| -> Result<Vec<i64>> {
        v.iter()
            .enumerate()
            .map(|(position, &x)| {
                if x > 1 {
                    Err(Error::NonBinary {
                        position,
                        value: x as i64,
                    })
                } else {
                    Ok(x as i64)
                }
            })
            .collect()
    };
    let t = to_signed(text)?;
    let p = to_signed(pattern)?;
    let ones = correlate(&t, &p)?;
    let t0: Vec<i64> = t.iter().map(|x| 1 - x).collect();
    let p0: Vec<i64> = p.iter().map(|x| 1 - x).collect();
    let zeros = correlate(&t0, &p0)?;
    let m = pattern.len() as i64;
    DistanceArray::from_signed(
        &ones
            .iter()
            .zip(&zeros)
            .map(|(a, b)| m - a - b)
            .collect::<Vec<_>>(),
    )
}

/// Repetitions needed for a `(1 ± zeta)` guarantee on all `n` entries,
/// rounded up to whole 64-repetition words.
pub fn repetitions_for(n: usize, zeta: f64) -> usize {
    let r = (64.0 * ((n + 2) as f64).ln() / (zeta * zeta)).ceil() as usize;
    r.div_ceil(64).max(1) * 64
}

/// Keyed symbol → 64 projection bits.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Projection {
    key: u64,
}

impl Projection {
    pub(crate) fn new(key: u64) -> Self {
        Self { key: mix64(key) }
    }

    #[inline]
    pub(crate) fn word(&self, symbol: u64) -> u64 {
        mix64(symbol ^ self.key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionEstimate {
    /// Sum of projected mismatch counts over all repetitions, per entry.
    totals: Vec<u64>,
    repetitions: usize,
    zeta: f64,
}

impl ProjectionEstimate {
    pub fn len(&self) -> usize {
        self.totals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.totals.is_empty()
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn totals(&self) -> &[u64] {
        &self.totals
    }

    pub fn raw_means(&self) -> Vec<f64> {
        let r = self.repetitions as f64;
        self.totals.iter().map(|&t| t as f64 / r).collect()
    }

    /// Reported estimate: twice the mean projected mismatch count.
    pub fn estimate(&self, i: usize) -> f64 {
        2.0 * self.totals[i] as f64 / self.repetitions as f64
    }

    pub fn estimates(&self) -> Vec<f64> {
        (0..self.totals.len()).map(|i| self.estimate(i)).collect()
    }

    /// `estimate(i) ≤ numerator / denominator`, decided in exact arithmetic.
    pub fn at_most(&self, i: usize, numerator: u64, denominator: u64) -> bool {
        2 * self.totals[i] as u128 * denominator as u128
            <= numerator as u128 * self.repetitions as u128
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "zeta must lie in (0, 1), got {zeta}"
        )))
    }
}

fn projection_keys<R: Rng + ?Sized>(rng: &mut R, repetitions: usize) -> Vec<Projection> {
    (0..repetitions / 64)
        .map(|_| Projection::new(rng.random()))
        .collect()
}

/// Estimates the Hamming distance of `pattern` against every alignment of
/// `text`.
pub fn approx_ham<R: Rng + ?Sized>(
    text: &[u64],
    pattern: &[u64],
    zeta: f64,
    rng: &mut R,
) -> Result<ProjectionEstimate> {
    check_zeta(zeta)?;
    let (n, m) = (text.len(), pattern.len());
    if m == 0 {
        return Err(Error::InvalidParameter("empty pattern".into()));
    }
    if m > n {
        return Err(Error::PatternLongerThanText {
            text: n,
            pattern: m,
        });
    }
    let repetitions = repetitions_for(n, zeta);
    let mut totals = vec![0u64; n - m + 1];
    let mut hashed_text = vec![0u64; n];
    let mut hashed_pattern = vec![0u64; m];
    for projection in projection_keys(rng, repetitions) {
        for (h, &s) in hashed_text.iter_mut().zip(text) {
            *h = projection.word(s);
        }
        for (h, &s) in hashed_pattern.iter_mut().zip(pattern) {
            *h = projection.word(s);
        }
        for (total, window) in totals.iter_mut().zip(hashed_text.windows(m)) {
            *total += window
                .iter()
                .zip(&hashed_pattern)
                .map(|(a, b)| (a ^ b).count_ones() as u64)
                .sum::<u64>();
        }
    }
    Ok(ProjectionEstimate {
        totals,
        repetitions,
        zeta,
    })
}

/// Estimates `Ham(P[ℓ..], P[..m−ℓ])` for every shift `ℓ` in `1..m`; entry
/// `ℓ − 1` holds shift `ℓ`.
pub fn approx_self_ham<R: Rng + ?Sized>(
    pattern: &[u64],
    zeta: f64,
    rng: &mut R,
) -> Result<ProjectionEstimate> {
    approx_self_ham_upto(pattern, zeta, pattern.len().saturating_sub(1), rng)
}

/// As [`approx_self_ham`], restricted to shifts `1..=max_shift`.
pub fn approx_self_ham_upto<R: Rng + ?Sized>(
    pattern: &[u64],
    zeta: f64,
    max_shift: usize,
    rng: &mut R,
) -> Result<ProjectionEstimate> {
    check_zeta(zeta)?;
    let m = pattern.len();
    if m < 2 {
        return Err(Error::InvalidParameter(
            "self-overlap needs a pattern of length at least 2".into(),
        ));
    }
    let max_shift = max_shift.min(m - 1);
    let repetitions = repetitions_for(m, zeta);
    let mut totals = vec![0u64; max_shift];
    let mut hashed = vec![0u64; m];
    for projection in projection_keys(rng, repetitions) {
        for (h, &s) in hashed.iter_mut().zip(pattern) {
            *h = projection.word(s);
        }
        for (shift, total) in (1..=max_shift).zip(totals.iter_mut()) {
            *total += hashed[shift..]
                .iter()
                .zip(&hashed)
                .map(|(a, b)| (a ^ b).count_ones() as u64)
                .sum::<u64>();
        }
    }
    Ok(ProjectionEstimate {
        totals,
        repetitions,
        zeta,
    })
}
