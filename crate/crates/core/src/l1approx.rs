//! (1 ± ε)-approximate text-to-pattern L1 distance.
//!
//! Each run draws a uniform shift Δ, adds it to every symbol, and estimates the
//! contribution of every bit level `i` from a window of `b` bits starting at
//! `i`: the window comparison decides the sign of the level's contribution.
//! The per-position median over independent runs gives the final estimate.

use rand::Rng;
use rayon::prelude::*;

use crate::convolve::{weighted_mismatches_with, AbsDiff, Route, WeightFunction};
use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::seq::{DistanceArray, IntSequence};

/// `⌈log₂ v⌉` for `v ≥ 1`.
pub fn ceil_log2(v: u64) -> u32 {
    if v <= 1 {
        0
    } else {
        u64::BITS - (v - 1).leading_zeros()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxParams {
    epsilon: f64,
    max_value: u64,
    delta: f64,
    window_bits: u32,
    levels: u32,
    shift_bound: u64,
    repetitions: usize,
}

impl ApproxParams {
    /// Parameters for accuracy `epsilon` on values bounded by `max_value`, with
    /// the default repetition count for a text of `text_len` symbols.
    pub fn new(epsilon: f64, max_value: u64, text_len: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        let max_value = max_value.max(1);
        let log_m = ceil_log2(max_value);
        let delta = epsilon / (24.0 * (3.0 + log_m as f64));
        let inverse = 1.0 / delta;
        let mut window_bits = 1;
        while ((1u64 << window_bits) as f64) < inverse {
            window_bits += 1;
        }
        let repetitions = ((8.0 * ((text_len + 1) as f64).ln()).ceil() as usize).max(1);
        Ok(Self {
            epsilon,
            max_value,
            delta,
            window_bits,
            levels: log_m + 1,
            shift_bound: 1 << log_m,
            repetitions,
        })
    }

    pub fn with_repetitions(mut self, repetitions: usize) -> Result<Self> {
        if repetitions == 0 {
            return Err(Error::InvalidParameter("at least one repetition".into()));
        }
        self.repetitions = repetitions;
        Ok(self)
    }

    /// Overrides the window width; used to study the estimator with narrow
    /// windows.
    pub fn with_window_bits(mut self, window_bits: u32) -> Result<Self> {
        if !(1..=32).contains(&window_bits) {
            return Err(Error::InvalidParameter(format!(
                "window bits must lie in 1..=32, got {window_bits}"
            )));
        }
        self.window_bits = window_bits;
        Ok(self)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn max_value(&self) -> u64 {
        self.max_value
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn window_bits(&self) -> u32 {
        self.window_bits
    }

    pub fn alphabet_size(&self) -> u64 {
        1 << self.window_bits
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn shift_bound(&self) -> u64 {
        self.shift_bound
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    /// A single window spans every bit of every shifted value, so the
    /// estimate is exact.
    pub fn window_covers_all_bits(&self) -> bool {
        self.alphabet_size() >= self.max_value + self.shift_bound
    }
}

/// Sign estimate of a bit-level contribution: 0 when the low bits agree,
/// otherwise whether the window comparison agrees with the low-bit difference.
#[inline]
pub fn score(x: u64, y: u64) -> i64 {
    let parity = (x & 1) as i64 - (y & 1) as i64;
    let sign = (x > y) as i64 - (x < y) as i64;
    parity * sign
}

#[derive(Debug, Clone, Copy)]
struct ScoreWeight {
    window_bits: u32,
}

impl WeightFunction for ScoreWeight {
    #[inline]
    fn weight(&self, text: u64, pattern: u64) -> i64 {
        score(text, pattern)
    }

    fn domain_size(&self) -> u64 {
        1 << self.window_bits
    }

    fn max_magnitude(&self) -> u64 {
        1
    }

    fn direct(&self, text: &[u64], pattern: &[u64]) -> Option<Vec<i64>> {
        // Windows fit the lane type, so the top bit of x − y is its sign, and
        // |S[i]| ≤ m fits the accumulator. Negating by `(d ^ s) − s` keeps the
        // loop free of multiplications and overflow checks.
        macro_rules! scores {
            ($lane:ty) => {{
                let narrow = |v: &[u64]| v.iter().map(|&x| x as $lane).collect::<Vec<_>>();
                let (text, pattern) = (narrow(text), narrow(pattern));
                text.windows(pattern.len())
                    .map(|w| {
                        w.iter().zip(&pattern).fold(0 as $lane, |acc, (&x, &y)| {
                            let d = (x & 1).wrapping_sub(y & 1);
                            let s = x.wrapping_sub(y) >> (<$lane>::BITS - 1);
                            acc.wrapping_add((d ^ s).wrapping_sub(s))
                        }) as i64
                    })
                    .collect()
            }};
        }
        if self.window_bits <= 14 && pattern.len() < 1 << 15 {
            Some(scores!(i16))
        } else if self.window_bits <= 30 {
            Some(scores!(i32))
        } else {
            None
        }
    }
}

fn check_pair(text: &IntSequence, pattern: &IntSequence) -> Result<()> {
    if pattern.len() > text.len() {
        return Err(Error::PatternLongerThanText {
            text: text.len(),
            pattern: pattern.len(),
        });
    }
    Ok(())
}

fn check_bound(params: &ApproxParams, text: &IntSequence, pattern: &IntSequence) -> Result<()> {
    let bound = text.max_value().max(pattern.max_value());
    if bound > params.max_value {
        return Err(Error::ValueOutOfRange {
            value: bound,
            bound: params.max_value,
        });
    }
    Ok(())
}

/// One run with a fixed shift. Entries may be negative.
pub fn approximate_once_with_shift(
    text: &IntSequence,
    pattern: &IntSequence,
    params: &ApproxParams,
    shift: u64,
    counters: &WorkCounters,
) -> Result<Vec<i64>> {
    check_pair(text, pattern)?;
    check_bound(params, text, pattern)?;
    let mask = params.alphabet_size() - 1;
    let weight = ScoreWeight {
        window_bits: params.window_bits,
    };
    let shifted_text: Vec<u64> = text.as_slice().iter().map(|&v| v + shift).collect();
    let shifted_pattern: Vec<u64> = pattern.as_slice().iter().map(|&v| v + shift).collect();
    let mut estimate = vec![0i64; text.len() - pattern.len() + 1];
    let mut text_window = vec![0u64; text.len()];
    let mut pattern_window = vec![0u64; pattern.len()];
    for level in 0..params.levels {
        for (w, &v) in text_window.iter_mut().zip(&shifted_text) {
            *w = (v >> level) & mask;
        }
        for (w, &v) in pattern_window.iter_mut().zip(&shifted_pattern) {
            *w = (v >> level) & mask;
        }
        let s = weighted_mismatches_with(
            &text_window,
            &pattern_window,
            &weight,
            Route::Auto,
            counters,
        )?;
        for (e, v) in estimate.iter_mut().zip(s) {
            *e += v << level;
        }
    }
    counters.add_levels(params.levels as u64);
    counters.add_repetitions(1);
    Ok(estimate)
}

/// One run with Δ drawn uniformly from `[0, shift_bound)`.
pub fn approximate_once<R: Rng + ?Sized>(
    text: &IntSequence,
    pattern: &IntSequence,
    params: &ApproxParams,
    rng: &mut R,
    counters: &WorkCounters,
) -> Result<Vec<i64>> {
    let shift = rng.random_range(0..params.shift_bound);
    approximate_once_with_shift(text, pattern, params, shift, counters)
}

/// (1 ± ε)-approximate L1 distances with default parameters.
pub fn approximate(
    text: &IntSequence,
    pattern: &IntSequence,
    epsilon: f64,
    seed: u64,
) -> Result<DistanceArray> {
    let bound = text.max_value().max(pattern.max_value());
    let params = ApproxParams::new(epsilon, bound, text.len())?;
    approximate_with(text, pattern, &params, seed, &WorkCounters::new())
}

/// Median of `params.repetitions()` independent runs, clamped at zero.
///
/// Run `r` uses the generator stream `(seed, r)`.
pub fn approximate_with(
    text: &IntSequence,
    pattern: &IntSequence,
    params: &ApproxParams,
    seed: u64,
    counters: &WorkCounters,
) -> Result<DistanceArray> {
    check_pair(text, pattern)?;
    check_bound(params, text, pattern)?;
    if params.window_covers_all_bits() {
        let weight = AbsDiff {
            domain: params.max_value + 1,
        };
        let s = weighted_mismatches_with(
            text.as_slice(),
            pattern.as_slice(),
            &weight,
            Route::Auto,
            counters,
        )?;
        return DistanceArray::from_signed(&s);
    }
    let runs: Vec<Vec<i64>> = (0..params.repetitions)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            approximate_once(text, pattern, params, &mut rng, counters)
        })
        .collect::<Result<_>>()?;

    let positions = text.len() - pattern.len() + 1;
    let mid = (runs.len() - 1) / 2;
    let mut column = vec![0i64; runs.len()];
    let mut out = Vec::with_capacity(positions);
    for i in 0..positions {
        for (c, run) in column.iter_mut().zip(&runs) {
            *c = run[i];
        }
        let (_, median, _) = column.select_nth_unstable(mid);
        out.push((*median).max(0) as u64);
    }
    Ok(DistanceArray::from_finite(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_l1;
    use crate::seq::Distance;

    fn seq(v: &[u64]) -> IntSequence {
        IntSequence::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn specialized_score_loop_matches_pair_function() {
        let mut rng = stream_rng(20, 0);
        for _ in 0..300 {
            let bits = rng.random_range(1..=30);
            let weight = ScoreWeight { window_bits: bits };
            let n = rng.random_range(1..80);
            let m = rng.random_range(1..=n);
            let mut draw = |len| {
                (0..len)
                    .map(|_| rng.random_range(0..1u64 << bits))
                    .collect::<Vec<_>>()
            };
            let (t, p) = (draw(n), draw(m));
            let expect: Vec<i64> = t
                .windows(m)
                .map(|w| w.iter().zip(&p).map(|(&x, &y)| score(x, y)).sum())
                .collect();
            assert_eq!(weight.direct(&t, &p).unwrap(), expect);
        }
        // extremes of both lane widths
        for bits in [14, 15, 30] {
            let top = (1u64 << bits) - 1;
            let t = [0, top, 1, top - 1, 0, top];
            let p = [top, 0, top - 1];
            let expect: Vec<i64> = t
                .windows(3)
                .map(|w| w.iter().zip(&p).map(|(&x, &y)| score(x, y)).sum())
                .collect();
            assert_eq!(
                ScoreWeight { window_bits: bits }.direct(&t, &p).unwrap(),
                expect
            );
        }
        assert!(ScoreWeight { window_bits: 31 }.direct(&[0], &[0]).is_none());
    }

    #[test]
    fn score_branches() {
        assert_eq!(score(6, 4), 0);
        assert_eq!(score(2, 5), 1);
        assert_eq!(score(4, 1), -1);
        assert_eq!(score(3, 3), 0);
    }

    #[test]
    fn parameter_arithmetic() {
        let p = ApproxParams::new(1.0, 1 << 10, 100).unwrap();
        assert!((p.delta() - 1.0 / 312.0).abs() < 1e-15);
        assert_eq!(p.window_bits(), 9);
        assert_eq!(p.levels(), 11);
        assert_eq!(p.shift_bound(), 1024);
        assert_eq!(p.repetitions(), (8.0 * 101f64.ln()).ceil() as usize);

        for (eps, m) in [(0.5, 1u64 << 16), (0.1, 77), (0.37, 5), (1.0, 1)] {
            let p = ApproxParams::new(eps, m, 10).unwrap();
            let inv = 1.0 / p.delta();
            assert!((1u64 << p.window_bits()) as f64 >= inv);
            assert!(p.window_bits() == 1 || ((1u64 << (p.window_bits() - 1)) as f64) < inv);
        }
        assert!(ApproxParams::new(0.0, 4, 4).is_err());
        assert!(ApproxParams::new(1.5, 4, 4).is_err());
    }

    #[test]
    fn identical_inputs_give_zero() {
        let t = seq(&[5, 900, 17, 3, 3, 250]);
        let params = ApproxParams::new(0.5, 900, 6)
            .unwrap()
            .with_window_bits(3)
            .unwrap();
        for shift in 0..params.shift_bound() {
            let s =
                approximate_once_with_shift(&t, &t, &params, shift, &WorkCounters::new()).unwrap();
            assert_eq!(s, vec![0]);
        }
        let p = seq(&[7, 2, 7]);
        let t = seq(&[7, 2, 7, 7, 2, 7]);
        let out = approximate(&t, &p, 0.3, 9).unwrap();
        assert_eq!(out[0], Distance::Finite(0));
        assert_eq!(out[3], Distance::Finite(0));
    }

    #[test]
    fn wide_window_is_exact_for_any_shift() {
        let mut rng = stream_rng(21, 0);
        for _ in 0..200 {
            let m_bound = rng.random_range(1..8u64);
            let n = rng.random_range(1..30);
            let m = rng.random_range(1..=n);
            let t: Vec<u64> = (0..n).map(|_| rng.random_range(0..=m_bound)).collect();
            let p: Vec<u64> = (0..m).map(|_| rng.random_range(0..=m_bound)).collect();
            let (t, p) = (
                IntSequence::new(t, m_bound).unwrap(),
                IntSequence::new(p, m_bound).unwrap(),
            );
            let params = ApproxParams::new(1.0, m_bound, n).unwrap();
            assert!(params.alphabet_size() > 2 * (params.max_value() + params.shift_bound()));
            let oracle = naive_l1(t.as_slice(), p.as_slice())
                .unwrap()
                .to_finite()
                .unwrap();
            for shift in 0..params.shift_bound() {
                let s = approximate_once_with_shift(&t, &p, &params, shift, &WorkCounters::new())
                    .unwrap();
                let s: Vec<u64> = s.into_iter().map(|v| v as u64).collect();
                assert_eq!(s, oracle);
            }
        }
    }

    /// Highest bit on which `a` and `b` differ.
    fn highest_differing_bit(a: u64, b: u64) -> Option<u32> {
        (a != b).then(|| 63 - (a ^ b).leading_zeros())
    }

    #[test]
    fn per_pair_error_within_top_window_bound() {
        // n = m = 1 is a single pair; all x share one call by placing them in the text.
        let xs: Vec<u64> = (0..=64).collect();
        let text = IntSequence::new(xs.clone(), 64).unwrap();
        for b in [3, 4, 5, 6] {
            let params = ApproxParams::new(0.5, 64, 1)
                .unwrap()
                .with_window_bits(b)
                .unwrap();
            for y in 0..=64u64 {
                let pattern = IntSequence::new(vec![y], 64).unwrap();
                for shift in 0..params.shift_bound() {
                    let c = approximate_once_with_shift(
                        &text,
                        &pattern,
                        &params,
                        shift,
                        &WorkCounters::new(),
                    )
                    .unwrap();
                    for (&x, &est) in xs.iter().zip(&c) {
                        let truth = x.abs_diff(y) as i64;
                        match highest_differing_bit(x + shift, y + shift) {
                            None => assert_eq!(est, 0),
                            Some(top) => {
                                let bound = 2f64.powi(top as i32 - b as i32 + 2);
                                assert!(
                                    ((est - truth).abs() as f64) <= bound,
                                    "x={x} y={y} shift={shift} b={b}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_positions_stay_zero_for_every_seed() {
        let p = seq(&[40_000, 3, 12_345, 9]);
        let mut t = vec![1, 2, 60_000];
        t.extend_from_slice(p.as_slice());
        t.extend_from_slice(&[17, 65_000]);
        let t = IntSequence::new(t, 65_000).unwrap();
        let p = IntSequence::new(p.into_vec(), 65_000).unwrap();
        for seed in 0..20 {
            let out = approximate(&t, &p, 0.2, seed).unwrap();
            assert_eq!(out[3], Distance::Finite(0));
        }
    }

    #[test]
    fn rejects_values_above_parameter_bound() {
        let params = ApproxParams::new(0.5, 10, 4).unwrap();
        let t = seq(&[1, 50]);
        let p = seq(&[1]);
        assert!(approximate_with(&t, &p, &params, 0, &WorkCounters::new()).is_err());
    }
}
