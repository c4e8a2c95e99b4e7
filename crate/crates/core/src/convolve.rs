//! Exact integer correlation and generalized weighted mismatches.
//!
//! Correlations run over three NTT-friendly primes and are recombined with the
//! Chinese remainder theorem, so every result that fits in an `i64` is exact.

use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::seq::{DistanceArray, IntSequence};

/// Which evaluation strategy to use. Both produce identical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    #[default]
    Auto,
    Direct,
    Transform,
}

const PRIMES: [u64; 3] = [998_244_353, 167_772_161, 469_762_049];
const GENERATOR: u64 = 3;

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn ntt(a: &mut [u64], invert: bool, p: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(GENERATOR, (p - 1) / len as u64, p);
        if invert {
            w_len = pow_mod(w_len, p - 2, p);
        }
        let half = len / 2;
        // twiddles for this stage
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = w * w_len % p;
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let x = *u;
                let y = *v * tw % p;
                *u = if x + y >= p { x + y - p } else { x + y };
                *v = if x >= y { x - y } else { x + p - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

fn to_residue(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Cyclic-free convolution of `a` and `b` modulo one prime.
fn convolve_mod(a: &[i64], b: &[i64], size: usize, p: u64) -> Vec<u64> {
    let mut fa: Vec<u64> = a.iter().map(|&v| to_residue(v, p)).collect();
    let mut fb: Vec<u64> = b.iter().map(|&v| to_residue(v, p)).collect();
    fa.resize(size, 0);
    fb.resize(size, 0);
    ntt(&mut fa, false, p);
    ntt(&mut fb, false, p);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % p;
    }
    ntt(&mut fa, true, p);
    fa
}

/// Garner recombination into the symmetric range around zero.
fn crt(r: [u64; 3]) -> i128 {
    let [p1, p2, p3] = PRIMES;
    let inv_p1_mod_p2 = pow_mod(p1 % p2, p2 - 2, p2);
    let p12 = (p1 as u128 * p2 as u128) % p3 as u128;
    let inv_p12_mod_p3 = pow_mod(p12 as u64, p3 - 2, p3);

    let x1 = r[0];
    let x2 = ((r[1] + p2 - x1 % p2) % p2) * inv_p1_mod_p2 % p2;
    let partial = (x1 as u128 + x2 as u128 * p1 as u128) % p3 as u128;
    let x3 =
        ((r[2] as u128 + p3 as u128 - partial) % p3 as u128) * inv_p12_mod_p3 as u128 % p3 as u128;
    let modulus = p1 as u128 * p2 as u128 * p3 as u128;
    let value = x1 as u128 + x2 as u128 * p1 as u128 + x3 * (p1 as u128 * p2 as u128);
    if value > modulus / 2 {
        value as i128 - modulus as i128
    } else {
        value as i128
    }
}

fn magnitude(v: &[i64]) -> u128 {
    v.iter()
        .map(|x| x.unsigned_abs() as u128)
        .max()
        .unwrap_or(0)
}

fn check_shapes(n: usize, m: usize) -> Result<()> {
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

fn correlate_direct(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.windows(b.len())
        .map(|w| w.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect()
}

fn correlate_transform(a: &[i64], b: &[i64]) -> Vec<i64> {
    let (n, m) = (a.len(), b.len());
    let reversed: Vec<i64> = b.iter().rev().copied().collect();
    let size = (n + m - 1).next_power_of_two();
    let residues: Vec<Vec<u64>> = PRIMES
        .iter()
        .map(|&p| convolve_mod(a, &reversed, size, p))
        .collect();
    (m - 1..n)
        .map(|k| crt([residues[0][k], residues[1][k], residues[2][k]]) as i64)
        .collect()
}

fn transform_cost(n: usize, m: usize) -> u128 {
    let size = (n + m - 1).next_power_of_two() as u128;
    // three primes, three transforms each
    9 * size * (size.trailing_zeros() as u128).max(1)
}

/// `out[i] = Σ_j a[i + j]·b[j]` for `i` in `0..=n-m`, exactly.
pub fn correlate(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    correlate_with(a, b, Route::Auto)
}

pub fn correlate_with(a: &[i64], b: &[i64], route: Route) -> Result<Vec<i64>> {
    let (n, m) = (a.len(), b.len());
    check_shapes(n, m)?;
    let bound = magnitude(a) * magnitude(b) * m as u128;
    if bound > i64::MAX as u128 {
        return Err(Error::Overflow { bound });
    }
    let direct = match route {
        Route::Direct => true,
        Route::Transform => false,
        Route::Auto => ((n - m + 1) as u128) * (m as u128) <= transform_cost(n, m),
    };
    Ok(if direct {
        correlate_direct(a, b)
    } else {
        correlate_transform(a, b)
    })
}

/// A symbol-pair weight `σ(text_symbol, pattern_symbol)`.
pub trait WeightFunction {
    fn weight(&self, text: u64, pattern: u64) -> i64;

    /// Symbols must lie in `0..domain_size()`.
    fn domain_size(&self) -> u64;

    /// Upper bound on `|weight(x, y)|` over the domain.
    fn max_magnitude(&self) -> u64;

    /// Specialized evaluation of the whole direct double loop, if any.
    fn direct(&self, _text: &[u64], _pattern: &[u64]) -> Option<Vec<i64>> {
        None
    }
}

/// Explicit `domain × domain` table, row-major by text symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    domain: u64,
    table: Vec<i64>,
}

impl WeightTable {
    pub fn new(domain: u64, table: Vec<i64>) -> Result<Self> {
        if table.len() as u64 != domain * domain {
            return Err(Error::InvalidParameter(format!(
                "weight table has {} entries, expected {}",
                table.len(),
                domain * domain
            )));
        }
        Ok(Self { domain, table })
    }

    pub fn from_fn(domain: u64, f: impl Fn(u64, u64) -> i64) -> Self {
        let table = (0..domain)
            .flat_map(|x| (0..domain).map(move |y| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self { domain, table }
    }
}

impl WeightFunction for WeightTable {
    #[inline]
    fn weight(&self, text: u64, pattern: u64) -> i64 {
        self.table[(text * self.domain + pattern) as usize]
    }

    fn domain_size(&self) -> u64 {
        self.domain
    }

    fn max_magnitude(&self) -> u64 {
        self.table
            .iter()
            .map(|v| v.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// `|x − y|`.
#[derive(Debug, Clone, Copy)]
pub struct AbsDiff {
    pub domain: u64,
}

impl WeightFunction for AbsDiff {
    #[inline]
    fn weight(&self, text: u64, pattern: u64) -> i64 {
        text.abs_diff(pattern) as i64
    }

    fn domain_size(&self) -> u64 {
        self.domain
    }

    fn max_magnitude(&self) -> u64 {
        self.domain.saturating_sub(1)
    }
}

/// `[x ≠ y]`.
#[derive(Debug, Clone, Copy)]
pub struct Mismatch {
    pub domain: u64,
}

impl WeightFunction for Mismatch {
    #[inline]
    fn weight(&self, text: u64, pattern: u64) -> i64 {
        (text != pattern) as i64
    }

    fn domain_size(&self) -> u64 {
        self.domain
    }

    fn max_magnitude(&self) -> u64 {
        1
    }
}

/// `S[i] = Σ_j σ(t[i + j], p[j])`, exactly.
pub fn weighted_mismatches<W: WeightFunction + Sync>(
    text: &[u64],
    pattern: &[u64],
    weight: &W,
) -> Result<Vec<i64>> {
    weighted_mismatches_with(text, pattern, weight, Route::Auto, &WorkCounters::new())
}

/// As [`weighted_mismatches`], with an explicit route and counters.
///
/// The transform route sums, over every pattern symbol `c`, the correlation of
/// `{σ(t_i, c)}_i` with the characteristic vector of `c` in the pattern.
/// Symbols absent from the pattern have an all-zero characteristic vector and
/// contribute nothing, so only present symbols are transformed; the
/// `correlations` counter still records the full alphabet decomposition.
pub fn weighted_mismatches_with<W: WeightFunction + Sync>(
    text: &[u64],
    pattern: &[u64],
    weight: &W,
    route: Route,
    counters: &WorkCounters,
) -> Result<Vec<i64>> {
    let (n, m) = (text.len(), pattern.len());
    check_shapes(n, m)?;
    let domain = weight.domain_size();
    if let Some(&symbol) = text.iter().chain(pattern).find(|&&s| s >= domain) {
        return Err(Error::SymbolOutsideDomain { symbol, domain });
    }
    let bound = weight.max_magnitude() as u128 * m as u128;
    if bound > i64::MAX as u128 {
        return Err(Error::Overflow { bound });
    }

    counters.add_correlations(domain);
    counters.observe_alphabet(domain);

    let mut symbols = pattern.to_vec();
    symbols.sort_unstable();
    symbols.dedup();

    let direct = match route {
        Route::Direct => true,
        Route::Transform => false,
        Route::Auto => {
            ((n - m + 1) as u128) * (m as u128) <= symbols.len() as u128 * transform_cost(n, m)
        }
    };

    if direct {
        counters.add_direct_cells(((n - m + 1) * m) as u64);
        if let Some(out) = weight.direct(text, pattern) {
            return Ok(out);
        }
        return Ok(text
            .windows(m)
            .map(|w| {
                w.iter()
                    .zip(pattern)
                    .map(|(&x, &y)| weight.weight(x, y))
                    .sum()
            })
            .collect());
    }

    counters.add_transform_correlations(symbols.len() as u64);
    let mut out = vec![0i64; n - m + 1];
    for &c in &symbols {
        let indicator: Vec<i64> = pattern.iter().map(|&p| (p == c) as i64).collect();
        let column: Vec<i64> = text.iter().map(|&t| weight.weight(t, c)).collect();
        let part = correlate_with(&column, &indicator, Route::Transform)?;
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    Ok(out)
}

/// Exact text-to-pattern L1 distance.
pub fn exact_l1(text: &IntSequence, pattern: &IntSequence) -> Result<DistanceArray> {
    let domain = text.max_value().max(pattern.max_value()) + 1;
    let s = weighted_mismatches(text.as_slice(), pattern.as_slice(), &AbsDiff { domain })?;
    DistanceArray::from_signed(&s)
}

/// Exact text-to-pattern Hamming distance.
pub fn exact_ham(text: &IntSequence, pattern: &IntSequence) -> Result<DistanceArray> {
    let domain = text.max_value().max(pattern.max_value()) + 1;
    let s = weighted_mismatches(text.as_slice(), pattern.as_slice(), &Mismatch { domain })?;
    DistanceArray::from_signed(&s)
}
