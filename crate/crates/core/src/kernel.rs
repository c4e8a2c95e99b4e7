//! k-approximated L1 distance by period casework.
//!
//! The text is cut into overlapping chunks of length below `2m`. A projection
//! filter discards every alignment whose Hamming distance is clearly above
//! `k`; since `L1 ≥ Ham` nothing with `L1 ≤ k` is lost. What happens to the
//! survivors depends on the pattern:
//!
//! - without a short approximate period, survivors are sparse and each one is
//!   verified directly with LCP jumps;
//! - with an approximate period `ℓ ≤ k`, the region spanned by the survivors
//!   is rearranged by residue classes modulo `ℓ`. Inside a class consecutive
//!   symbols rarely change, so the rearranged pair has `O(k)` runs and an
//!   exact run-length algorithm finishes the job.

use rand::Rng;
use rayon::prelude::*;

use crate::convolve::exact_l1;
use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::hamapprox::{approx_ham, approx_self_ham_upto, DEFAULT_ZETA};
use crate::kangaroo::{verify_alignment_traced, LcpIndex};
use crate::oracle::cap;
use crate::rledist::rle_l1_counted;
use crate::rng::stream_rng;
use crate::seq::{
    rle_encode, Distance, DistanceArray, IntSequence, RleSequence, Symbol, WildcardSequence,
};

/// Accepting threshold for a period candidate, as a multiple of `k`.
const PERIOD_THRESHOLD: (u64, u64) = (16, 3);
/// Filter threshold, as a multiple of `k`.
const FILTER_THRESHOLD: (u64, u64) = (4, 3);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodCase {
    NoSmallPeriod,
    SmallPeriod(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodReport {
    pub case: PeriodCase,
    /// Self-overlap estimates; entry `ℓ − 1` is for shift `ℓ`.
    pub estimates: Vec<f64>,
}

/// Finds the least shift `ℓ ≤ min(k, m − 1)` whose estimated self-overlap
/// Hamming distance is at most `16k/3`.
pub fn classify_period<R: Rng + ?Sized>(
    pattern: &[u64],
    k: u64,
    rng: &mut R,
) -> Result<PeriodReport> {
    let m = pattern.len();
    let max_shift = (k as usize).min(m.saturating_sub(1));
    if max_shift == 0 {
        return Ok(PeriodReport {
            case: PeriodCase::NoSmallPeriod,
            estimates: Vec::new(),
        });
    }
    let est = approx_self_ham_upto(pattern, DEFAULT_ZETA, max_shift, rng)?;
    let (num, den) = PERIOD_THRESHOLD;
    let case = (0..est.len())
        .find(|&s| est.at_most(s, num * k, den))
        .map_or(PeriodCase::NoSmallPeriod, |s| {
            PeriodCase::SmallPeriod(s + 1)
        });
    Ok(PeriodReport {
        case,
        estimates: est.estimates(),
    })
}

/// Alignments of `pattern` in `chunk` whose estimated Hamming distance is at
/// most `4k/3`, in increasing order.
pub fn filter_alignments<R: Rng + ?Sized>(
    chunk: &[u64],
    pattern: &[u64],
    k: u64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let est = approx_ham(chunk, pattern, DEFAULT_ZETA, rng)?;
    let (num, den) = FILTER_THRESHOLD;
    Ok((0..est.len())
        .filter(|&i| est.at_most(i, num * k, den))
        .collect())
}

/// A contiguous piece of a chunk together with its position in the chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub offset: usize,
    pub text: Vec<u64>,
}

/// The smallest region containing the windows of all `candidates`.
///
/// `candidates` must be non-empty and sorted.
pub fn extract_region(chunk: &[u64], candidates: &[usize], m: usize) -> Region {
    let first = candidates[0];
    let last = *candidates.last().unwrap();
    Region {
        offset: first,
        text: chunk[first..last + m].to_vec(),
    }
}

/// A rearranged pattern/text pair whose L1 distance at `map(i)` equals the
/// distance of the original pattern at chunk alignment `i`, for every `i` in
/// `candidates`.
///
/// All candidates share the residue `e = (i − offset) mod ℓ`. With
/// `W = ⌈|T′|/ℓ⌉`, pattern position `qℓ + r` goes to `P*[rW + q]` and region
/// position `qℓ + s + e` to `T*[sW + q]`; blocks are padded with wildcards.
/// Alignment `i − offset = aℓ + e` maps to `a` and pairs pattern class `r`
/// with block `r` of `T*`, which holds exactly the region symbols that class
/// meets. Since `a + |class r| ≤ W`, no class crosses into the next block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelInstance {
    pub p_star: WildcardSequence,
    pub t_star: WildcardSequence,
    pub candidates: Vec<usize>,
    pub period: usize,
    pub block_width: usize,
    pub offset: usize,
    pub residue: usize,
}

impl KernelInstance {
    /// Kernel alignment of chunk alignment `i`; `i` must be congruent to
    /// `offset + residue` modulo the period.
    pub fn map(&self, i: usize) -> usize {
        (i - self.offset - self.residue) / self.period
    }

    pub fn pattern_runs(&self) -> usize {
        rle_encode(&self.p_star).run_count()
    }

    pub fn text_runs(&self) -> usize {
        rle_encode(&self.t_star).run_count()
    }
}

/// Rearranges `pattern` and `region` by residue classes modulo `period`.
/// `candidates` are chunk alignments whose windows lie inside the region and
/// which share one residue modulo `period` relative to the region offset.
///
/// `|P*| ≤ |T*| ≤ ℓW < |T′| + ℓ`, so both stay below `3m` for regions spanned
/// by at most `m` consecutive alignments.
pub fn kernelize(
    pattern: &[u64],
    region: &Region,
    period: usize,
    candidates: &[usize],
) -> Result<KernelInstance> {
    let m = pattern.len();
    if period == 0 || period >= m {
        return Err(Error::DegeneratePeriod { period, pattern: m });
    }
    let len = region.text.len();
    for &i in candidates {
        if i < region.offset || i + m > region.offset + len {
            return Err(Error::AlignmentOutOfRange {
                index: i,
                last: (region.offset + len).saturating_sub(m),
            });
        }
    }
    let residue = candidates
        .first()
        .map_or(0, |&i| (i - region.offset) % period);
    if candidates
        .iter()
        .any(|&i| (i - region.offset) % period != residue)
    {
        return Err(Error::InvalidParameter(
            "kernel candidates must share one residue modulo the period".into(),
        ));
    }
    let width = len.div_ceil(period);

    let p_len = (period - 1) * width + (m - (period - 1)).div_ceil(period);
    let mut p_star = vec![Symbol::Wildcard; p_len];
    for (j, &v) in pattern.iter().enumerate() {
        p_star[(j % period) * width + j / period] = Symbol::Value(v);
    }

    let mut t_star = vec![Symbol::Wildcard; period * width];
    for (j, &v) in region.text.iter().enumerate().skip(residue) {
        let (q, s) = ((j - residue) / period, (j - residue) % period);
        t_star[s * width + q] = Symbol::Value(v);
    }

    let instance = KernelInstance {
        p_star: WildcardSequence::from_symbols(p_star),
        t_star: WildcardSequence::from_symbols(Vec::new()),
        candidates: candidates.to_vec(),
        period,
        block_width: width,
        offset: region.offset,
        residue,
    };
    let reach = candidates
        .iter()
        .map(|&i| instance.map(i))
        .max()
        .unwrap_or(0)
        + p_len;
    debug_assert!(reach <= t_star.len());
    t_star.truncate(reach);
    Ok(KernelInstance {
        t_star: WildcardSequence::from_symbols(t_star),
        ..instance
    })
}

/// Partitions sorted candidates by residue modulo `period` relative to the
/// first candidate, which is the offset of their common region. Groups come
/// in increasing residue order and stay sorted.
pub fn plan_groups(candidates: &[usize], period: usize) -> Vec<Vec<usize>> {
    let Some(&first) = candidates.first() else {
        return Vec::new();
    };
    let mut by_residue = vec![Vec::new(); period];
    for &c in candidates {
        by_residue[(c - first) % period].push(c);
    }
    by_residue.retain(|g| !g.is_empty());
    by_residue
}

/// Exact L1 distance on run-length encoded wildcard instances.
pub trait KernelBackend: Sync {
    fn l1(
        &self,
        text: &RleSequence,
        pattern: &RleSequence,
        counters: &WorkCounters,
    ) -> Result<DistanceArray>;
}

/// The block-pair second-difference algorithm.
#[derive(Debug, Clone, Copy, Default)]
pub struct RleL1;

impl KernelBackend for RleL1 {
    fn l1(
        &self,
        text: &RleSequence,
        pattern: &RleSequence,
        counters: &WorkCounters,
    ) -> Result<DistanceArray> {
        rle_l1_counted(text, pattern, counters)
    }
}

impl<F> KernelBackend for F
where
    F: Fn(&RleSequence, &RleSequence) -> Result<DistanceArray> + Sync,
{
    fn l1(
        &self,
        text: &RleSequence,
        pattern: &RleSequence,
        _: &WorkCounters,
    ) -> Result<DistanceArray> {
        self(text, pattern)
    }
}

/// Chunk `j` owns alignments `[jm, min((j + 1)m, n − m + 1))` and covers
/// text `[jm, min(jm + 2m − 1, n))`.
fn chunk_bounds(n: usize, m: usize, j: usize) -> (usize, usize, usize) {
    let start = j * m;
    let owned = m.min(n - m + 1 - start);
    (start, owned, (start + owned + m - 1).min(n))
}

/// Per-call state of the kernel path.
struct KernelStage<'a, B: ?Sized> {
    pattern: &'a [u64],
    k: u64,
    period: usize,
    backend: &'a B,
    counters: &'a WorkCounters,
    observe: &'a (dyn Fn(usize, &KernelInstance) + Sync),
}

fn kernel_chunk<B: KernelBackend + ?Sized>(
    stage: &KernelStage<'_, B>,
    chunk_start: usize,
    chunk: &[u64],
    candidates: &[usize],
    out: &mut [Distance],
) -> Result<()> {
    let KernelStage {
        pattern,
        k,
        period,
        backend,
        counters,
        observe,
    } = *stage;
    let region = extract_region(chunk, candidates, pattern.len());
    for group in plan_groups(candidates, period) {
        let instance = kernelize(pattern, &region, period, &group)?;
        counters.add_kernel_instances(1);
        observe(chunk_start, &instance);
        let scores = backend.l1(
            &rle_encode(&instance.t_star),
            &rle_encode(&instance.p_star),
            counters,
        )?;
        for &i in &group {
            if i < out.len() {
                out[i] = scores[instance.map(i)].capped(k);
            }
        }
    }
    Ok(())
}

fn verify_chunk(
    chunk: &[u64],
    pattern: &[u64],
    candidates: &[usize],
    k: u64,
    counters: &WorkCounters,
    out: &mut [Distance],
) -> Result<()> {
    let index = LcpIndex::build(chunk, pattern);
    for &i in candidates {
        if i < out.len() {
            let (d, jumps) = verify_alignment_traced(&index, chunk, pattern, i, k)?;
            counters.add_kangaroo_jumps(jumps as u64);
            out[i] = d;
        }
    }
    counters.add_verified_alignments(candidates.len() as u64);
    Ok(())
}

/// k-approximated L1 distance: exact where the distance is at most `k`,
/// infinite elsewhere. Exact with high probability over `seed`; every finite
/// entry is always exact.
pub fn kapprox_l1<B: KernelBackend + ?Sized>(
    text: &IntSequence,
    pattern: &IntSequence,
    k: u64,
    seed: u64,
    backend: &B,
) -> Result<DistanceArray> {
    kapprox_l1_with(text, pattern, k, seed, backend, &WorkCounters::new())
}

pub fn kapprox_l1_with<B: KernelBackend + ?Sized>(
    text: &IntSequence,
    pattern: &IntSequence,
    k: u64,
    seed: u64,
    backend: &B,
    counters: &WorkCounters,
) -> Result<DistanceArray> {
    kapprox_l1_observed(text, pattern, k, seed, backend, counters, &|_, _| {})
}

/// As [`kapprox_l1_with`], additionally handing every kernel instance to
/// `observe` together with the text position of its chunk.
pub fn kapprox_l1_observed<B: KernelBackend + ?Sized>(
    text: &IntSequence,
    pattern: &IntSequence,
    k: u64,
    seed: u64,
    backend: &B,
    counters: &WorkCounters,
    observe: &(dyn Fn(usize, &KernelInstance) + Sync),
) -> Result<DistanceArray> {
    let (t, p) = (text.as_slice(), pattern.as_slice());
    let (n, m) = (t.len(), p.len());
    if m == 0 {
        return Err(Error::InvalidParameter("empty pattern".into()));
    }
    if m > n {
        return Err(Error::PatternLongerThanText {
            text: n,
            pattern: m,
        });
    }
    if k >= m as u64 {
        return Ok(cap(&exact_l1(text, pattern)?, k));
    }

    let report = classify_period(p, k, &mut stream_rng(seed, 0))?;
    let chunks = (n - m + 1).div_ceil(m);
    let per_chunk: Vec<Vec<Distance>> = (0..chunks)
        .into_par_iter()
        .map(|j| {
            let (start, owned, end) = chunk_bounds(n, m, j);
            let chunk = &t[start..end];
            let mut out = vec![Distance::Infinite; owned];
            let mut rng = stream_rng(seed, j as u64 + 1);
            let candidates: Vec<usize> = filter_alignments(chunk, p, k, &mut rng)?
                .into_iter()
                .filter(|&i| i < owned)
                .collect();
            if candidates.is_empty() {
                return Ok(out);
            }
            match report.case {
                PeriodCase::NoSmallPeriod => {
                    verify_chunk(chunk, p, &candidates, k, counters, &mut out)?
                }
                PeriodCase::SmallPeriod(period) => {
                    let stage = KernelStage {
                        pattern: p,
                        k,
                        period,
                        backend,
                        counters,
                        observe,
                    };
                    kernel_chunk(&stage, start, chunk, &candidates, &mut out)?
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(DistanceArray::new(
        per_chunk.into_iter().flatten().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{naive_l1, naive_wild, Metric};
    use rand::Rng;

    fn generate(len: usize, sigma: u64, period: Option<usize>, c: usize, seed: u64) -> IntSequence {
        crate::seq::generate(len, sigma, period, c, seed).unwrap()
    }

    fn periodic(len: usize, period: &[u64]) -> Vec<u64> {
        (0..len).map(|i| period[i % period.len()]).collect()
    }

    fn self_overlap(p: &[u64], shift: usize) -> usize {
        p[shift..].iter().zip(p).filter(|(a, b)| a != b).count()
    }

    #[test]
    fn classify_examples() {
        let p = periodic(60, &[4, 8, 1]);
        let r = classify_period(&p, 5, &mut stream_rng(1, 0)).unwrap();
        assert_eq!(r.case, PeriodCase::SmallPeriod(3));
        assert_eq!(r.estimates.len(), 5);

        let p = generate(128, 1 << 16, None, 0, 2).into_vec();
        let r = classify_period(&p, 4, &mut stream_rng(1, 1)).unwrap();
        assert_eq!(r.case, PeriodCase::NoSmallPeriod);

        let p = generate(128, 100, Some(5), 6, 3).into_vec();
        let r = classify_period(&p, 6, &mut stream_rng(1, 2)).unwrap();
        assert!(matches!(r.case, PeriodCase::SmallPeriod(l) if l <= 5));
        assert_eq!(
            classify_period(&p, 0, &mut stream_rng(1, 3)).unwrap().case,
            PeriodCase::NoSmallPeriod
        );
    }

    #[test]
    fn classify_soundness() {
        let mut rng = stream_rng(40, 0);
        for trial in 0..200u64 {
            let m = rng.random_range(16..100);
            let k = rng.random_range(1..12u64);
            let period = rng.random_range(1..8);
            let period = (!trial.is_multiple_of(3)).then_some(period);
            let p = generate(m, 6, period, rng.random_range(0..6), trial).into_vec();
            let r = classify_period(&p, k, &mut stream_rng(trial, 9)).unwrap();
            match r.case {
                PeriodCase::SmallPeriod(l) => {
                    assert!(l as u64 <= k);
                    assert!(self_overlap(&p, l) as u64 <= 8 * k);
                }
                PeriodCase::NoSmallPeriod => {
                    for l in 1..(k as usize).min(m) {
                        assert!(self_overlap(&p, l) as u64 > 4 * k);
                    }
                }
            }
        }
    }

    #[test]
    fn filter_examples() {
        let p = generate(32, 1000, None, 0, 5).into_vec();
        let mut chunk = generate(63, 1000, None, 0, 6).into_vec();
        chunk[10..42].copy_from_slice(&p);
        let kept = filter_alignments(&chunk, &p, 2, &mut stream_rng(2, 0)).unwrap();
        assert_eq!(kept, vec![10]);
    }

    #[test]
    fn filter_keeps_all_close_alignments() {
        let mut rng = stream_rng(41, 0);
        for trial in 0..200u64 {
            let m = rng.random_range(8..64);
            let k = rng.random_range(0..m as u64 / 2);
            let p = generate(m, 4, Some(rng.random_range(1..5)), 2, trial).into_vec();
            let t =
                generate(2 * m - 1, 4, Some(rng.random_range(1..5)), 3, trial + 1000).into_vec();
            let kept = filter_alignments(&t, &p, k, &mut stream_rng(trial, 1)).unwrap();
            let l1 = naive_l1(&t, &p).unwrap();
            let ham = crate::oracle::naive_ham(&t, &p).unwrap();
            for i in 0..l1.len() {
                if l1[i].finite().unwrap() <= k {
                    assert!(kept.contains(&i));
                }
            }
            for &i in &kept {
                assert!(ham[i].finite().unwrap() <= 2 * k);
            }
        }
    }

    #[test]
    fn region_examples() {
        let chunk: Vec<u64> = (0..15).collect();
        assert_eq!(
            extract_region(&chunk, &[3], 8).text,
            (3..11).collect::<Vec<_>>()
        );
        assert_eq!(extract_region(&chunk, &[0, 7], 8).text, chunk);
        let mut rng = stream_rng(42, 0);
        for _ in 0..1000 {
            let m = rng.random_range(1..20);
            let chunk: Vec<u64> = (0..2 * m as u64 - 1).collect();
            let mut c: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.3)).collect();
            if c.is_empty() {
                c.push(rng.random_range(0..m));
            }
            let r = extract_region(&chunk, &c, m);
            for &i in &c {
                assert!(i >= r.offset && i + m <= r.offset + r.text.len());
                assert_eq!(r.text[i - r.offset], chunk[i]);
            }
        }
    }

    fn check_instance(
        p: &[u64],
        chunk: &[u64],
        region: &Region,
        candidates: &[usize],
        period: usize,
    ) -> KernelInstance {
        let inst = kernelize(p, region, period, candidates).unwrap();
        let kernel =
            naive_wild(inst.t_star.as_slice(), inst.p_star.as_slice(), Metric::L1).unwrap();
        let orig = naive_l1(chunk, p).unwrap();
        for &i in candidates {
            assert_eq!(kernel[inst.map(i)], orig[i], "alignment {i}");
        }
        inst
    }

    #[test]
    fn kernelize_examples() {
        let p = periodic(20, &[1, 2, 3, 4]);
        let inst = check_instance(&p, &p, &extract_region(&p, &[0], 20), &[0], 4);
        assert_eq!(inst.map(0), 0);
        assert_eq!(inst.pattern_runs(), 4);

        // region 0..=9 of a 7-symbol pattern; candidates 1 and 3 share residue 1
        let q = [5, 1, 5, 1, 5, 1, 5];
        let chunk = [9, 5, 1, 5, 1, 5, 1, 5, 1, 5];
        let region = extract_region(&chunk, &[0, 1, 3], 7);
        let inst = check_instance(&q, &chunk, &region, &[1, 3], 2);
        assert_eq!((inst.residue, inst.map(1), inst.map(3)), (1, 0, 1));
        assert_eq!(inst.text_runs(), 2);
        assert!(matches!(
            kernelize(&q, &region, 2, &[0, 1]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            kernelize(&p, &extract_region(&p, &[0], 20), 20, &[0]),
            Err(Error::DegeneratePeriod {
                period: 20,
                pattern: 20
            })
        ));
    }

    #[test]
    fn kernel_preserves_distances_on_periodic_instances() {
        let mut rng = stream_rng(43, 0);
        for trial in 0..500u64 {
            let m = rng.random_range(4..64);
            let period = rng.random_range(1..m.min(8));
            let c = rng.random_range(0..4);
            let p = generate(m, 10, Some(period), c, trial).into_vec();
            let chunk = generate(2 * m - 1, 10, Some(period), c, trial + 7).into_vec();
            let mut cand: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.4)).collect();
            if cand.is_empty() {
                cand.push(0);
            }
            let region = extract_region(&chunk, &cand, m);
            for group in plan_groups(&cand, period) {
                let inst = check_instance(&p, &chunk, &region, &group, period);
                assert!(inst.p_star.len() <= inst.t_star.len());
                assert!(inst.t_star.len() < region.text.len() + period);
                // pattern runs: one per class, one per class-internal change, one per padding
                assert!(inst.pattern_runs() <= 2 * period + self_overlap(&p, period));
            }
        }
    }

    #[test]
    fn plan_groups_cover_in_order() {
        let groups = plan_groups(&[2, 3, 4, 5, 52, 92], 7);
        assert_eq!(
            groups,
            vec![vec![2], vec![3, 52], vec![4], vec![5], vec![92]]
        );
        assert_eq!(plan_groups(&[5], 9), vec![vec![5]]);
        assert!(plan_groups(&[], 3).is_empty());
    }

    fn capped_oracle(t: &IntSequence, p: &IntSequence, k: u64) -> DistanceArray {
        cap(&naive_l1(t.as_slice(), p.as_slice()).unwrap(), k)
    }

    #[test]
    fn kapprox_concatenated_pattern() {
        let p = generate(16, 50, None, 0, 8);
        let t = IntSequence::from_values(p.as_slice().repeat(3)).unwrap();
        let got = kapprox_l1(&t, &p, 0, 1, &RleL1).unwrap();
        for (i, d) in got.iter().enumerate() {
            let expect = if i % 16 == 0 {
                Distance::Finite(0)
            } else {
                Distance::Infinite
            };
            assert_eq!(*d, expect, "alignment {i}");
        }
    }

    #[test]
    fn kapprox_matches_capped_oracle() {
        let mut rng = stream_rng(44, 0);
        for trial in 0..60u64 {
            let m = rng.random_range(2..40);
            let n = rng.random_range(m..4 * m);
            let k = rng.random_range(0..m as u64 + 2);
            let p = if trial % 2 == 0 {
                generate(
                    m,
                    5,
                    Some(rng.random_range(1..5).min(m)),
                    rng.random_range(0..3),
                    trial,
                )
            } else {
                generate(m, 5, None, 0, trial)
            };
            // text built from pattern copies so that close alignments exist
            let mut t: Vec<u64> = p
                .as_slice()
                .iter()
                .cycle()
                .skip(trial as usize % m)
                .take(n)
                .copied()
                .collect();
            for _ in 0..rng.random_range(0..6) {
                let pos = rng.random_range(0..n);
                t[pos] = rng.random_range(0..5);
            }
            let t = IntSequence::new(t, 4).unwrap();
            let got = kapprox_l1(&t, &p, k, trial, &RleL1).unwrap();
            assert_eq!(got, capped_oracle(&t, &p, k), "trial {trial}");
        }
    }

    #[test]
    fn kapprox_is_deterministic_and_counts_work() {
        let p = generate(32, 4, Some(3), 2, 1);
        let mut t = p.as_slice().repeat(6);
        t[40] = 3;
        t[100] ^= 1;
        let t = IntSequence::from_values(t).unwrap();
        let counters = WorkCounters::new();
        let a = kapprox_l1_with(&t, &p, 6, 9, &RleL1, &counters).unwrap();
        let b = kapprox_l1(&t, &p, 6, 9, &RleL1).unwrap();
        assert_eq!(a, b);
        assert!(counters.snapshot().kernel_instances > 0);
    }
}
