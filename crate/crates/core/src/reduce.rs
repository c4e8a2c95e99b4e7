//! Linearity-preserving reductions between Hamming and L1 distance.
//!
//! A reduction expresses a target symbol distance as
//! `x □ y = c + Σᵢ αᵢ · (fᵢ(x) ⋄ gᵢ(y))` for a base distance `⋄`. Summing over
//! aligned pairs turns this into the same combination of whole
//! text-to-pattern arrays, with `c` multiplied by the pattern length.
//!
//! Negative coefficients make the combination meaningless on capped arrays,
//! so [`apply`] refuses base results that contain infinity.

use std::fmt;
use std::sync::Arc;

use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::kernel::{kapprox_l1_with, KernelBackend};
use crate::oracle::Metric;
use crate::rledist::{eliminate_wildcards_rle, rle_ham};
use crate::seq::{DistanceArray, IntSequence, RleSequence, Symbol, MAX_SYMBOL};

/// Exact rational `num / den`, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coefficient {
    pub num: i64,
    pub den: u64,
}

impl Coefficient {
    pub const ZERO: Self = Self::new(0, 1);
    pub const ONE: Self = Self::new(1, 1);

    pub const fn new(num: i64, den: u64) -> Self {
        assert!(den > 0);
        Self { num, den }
    }

    pub const fn integer(num: i64) -> Self {
        Self::new(num, 1)
    }
}

pub type SymbolMap = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

#[derive(Clone)]
pub struct Term {
    pub coefficient: Coefficient,
    pub text_map: SymbolMap,
    pub pattern_map: SymbolMap,
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Term")
            .field("coefficient", &self.coefficient)
            .finish_non_exhaustive()
    }
}

/// `target(x, y) = constant + Σ αᵢ · base(fᵢ(x), gᵢ(y))` for all symbols
/// `x, y ≤ domain`.
#[derive(Debug, Clone)]
pub struct LinearReduction {
    pub target: Metric,
    pub base: Metric,
    pub constant: Coefficient,
    pub terms: Vec<Term>,
    pub domain: u64,
}

fn metric(metric: Metric, x: u64, y: u64) -> i128 {
    match metric {
        Metric::L1 => x.abs_diff(y) as i128,
        Metric::Hamming => (x != y) as i128,
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl LinearReduction {
    pub fn identity(metric: Metric) -> Self {
        let id: SymbolMap = Arc::new(|x| x);
        Self {
            target: metric,
            base: metric,
            constant: Coefficient::ZERO,
            terms: vec![Term {
                coefficient: Coefficient::ONE,
                text_map: id.clone(),
                pattern_map: id,
            }],
            domain: MAX_SYMBOL,
        }
    }

    pub fn instances(&self) -> usize {
        self.terms.len()
    }

    /// Common denominator of all coefficients.
    fn scale(&self) -> i128 {
        std::iter::once(self.constant)
            .chain(self.terms.iter().map(|t| t.coefficient))
            .fold(1i128, |l, c| {
                let d = c.den as i128;
                l / gcd(l, d) * d
            })
    }

    /// Constant and term coefficients as integers over [`Self::scale`].
    fn scaled(&self) -> (i128, Vec<i128>) {
        let scale = self.scale();
        let lift = |c: Coefficient| c.num as i128 * (scale / c.den as i128);
        (
            lift(self.constant),
            self.terms.iter().map(|t| lift(t.coefficient)).collect(),
        )
    }

    /// Checks the symbol identity for every pair `x, y ≤ min(bound, domain)`.
    pub fn verify(&self, bound: u64) -> Result<()> {
        let bound = bound.min(self.domain);
        let scale = self.scale();
        let (constant, coefficients) = self.scaled();
        for x in 0..=bound {
            for y in 0..=bound {
                let mut sum = constant;
                for (term, c) in self.terms.iter().zip(&coefficients) {
                    let (fx, gy) = ((term.text_map)(x), (term.pattern_map)(y));
                    sum += c * metric(self.base, fx, gy);
                }
                if sum != metric(self.target, x, y) * scale {
                    return Err(Error::ReductionIdentityViolated(format!(
                        "x = {x}, y = {y}: combination gives {sum}/{scale}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `[x ≠ y] = 1 − ½|x + 1 − y| − ½|x − (y + 1)| + |x − y|`: for `d = x − y`,
/// `|d + 1| + |d − 1| − 2|d|` is 2 when `d = 0` and 0 otherwise.
pub fn ham_to_l1() -> LinearReduction {
    let id: SymbolMap = Arc::new(|x| x);
    let succ: SymbolMap = Arc::new(|x| x + 1);
    let half = Coefficient::new(-1, 2);
    LinearReduction {
        target: Metric::Hamming,
        base: Metric::L1,
        constant: Coefficient::ONE,
        terms: vec![
            Term {
                coefficient: half,
                text_map: succ.clone(),
                pattern_map: id.clone(),
            },
            Term {
                coefficient: half,
                text_map: id.clone(),
                pattern_map: succ,
            },
            Term {
                coefficient: Coefficient::ONE,
                text_map: id.clone(),
                pattern_map: id,
            },
        ],
        domain: MAX_SYMBOL,
    }
}

/// `|x − y| = Σ_{t=1}^{M} [[x ≥ t] ≠ [y ≥ t]]` for `x, y ≤ M`. Each threshold
/// image has run boundaries only where its preimage does.
pub fn l1_to_ham(max_value: u64) -> Result<LinearReduction> {
    if max_value == 0 {
        return Err(Error::InvalidParameter(
            "threshold family needs M ≥ 1".into(),
        ));
    }
    let terms = (1..=max_value)
        .map(|t| {
            let f: SymbolMap = Arc::new(move |x| (x >= t) as u64);
            Term {
                coefficient: Coefficient::ONE,
                text_map: f.clone(),
                pattern_map: f,
            }
        })
        .collect();
    Ok(LinearReduction {
        target: Metric::L1,
        base: Metric::Hamming,
        constant: Coefficient::ZERO,
        terms,
        domain: max_value,
    })
}

fn combine(
    red: &LinearReduction,
    len: usize,
    pattern_len: usize,
    mut term_result: impl FnMut(&Term) -> Result<DistanceArray>,
) -> Result<DistanceArray> {
    let scale = red.scale();
    let (constant, coefficients) = red.scaled();
    let mut acc = vec![constant * pattern_len as i128; len];
    for (term, &c) in red.terms.iter().zip(&coefficients) {
        let base = term_result(term)?;
        if base.len() != len {
            return Err(Error::LengthMismatch {
                declared: len,
                actual: base.len(),
            });
        }
        let values = base.to_finite().ok_or(Error::CappedBaseResult)?;
        for (a, v) in acc.iter_mut().zip(values) {
            *a += c * v as i128;
        }
    }
    let out = acc
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            if a % scale != 0 || a < 0 {
                Err(Error::ReductionIdentityViolated(format!(
                    "alignment {i}: {a}/{scale} is not a non-negative integer"
                )))
            } else {
                i64::try_from(a / scale).map_err(|_| Error::Overflow { bound: a as u128 })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    DistanceArray::from_signed(&out)
}

fn check_domain(red: &LinearReduction, max: Option<u64>) -> Result<()> {
    match max {
        Some(symbol) if symbol > red.domain => Err(Error::SymbolOutsideDomain {
            symbol,
            domain: red.domain,
        }),
        _ => Ok(()),
    }
}

/// Evaluates `red` on run-length encoded inputs. Maps act on values and keep
/// wildcards; a nonzero constant term requires wildcard-free inputs.
pub fn apply<F>(
    red: &LinearReduction,
    text: &RleSequence,
    pattern: &RleSequence,
    mut base_solver: F,
) -> Result<DistanceArray>
where
    F: FnMut(&RleSequence, &RleSequence) -> Result<DistanceArray>,
{
    let (n, m) = (text.total_length(), pattern.total_length());
    if m == 0 || m > n {
        return Err(Error::PatternLongerThanText {
            text: n,
            pattern: m,
        });
    }
    let values = |s: &RleSequence| s.runs().iter().filter_map(|r| r.symbol.value()).max();
    check_domain(red, values(text))?;
    check_domain(red, values(pattern))?;
    let has_wildcard = |s: &RleSequence| s.runs().iter().any(|r| r.symbol.is_wildcard());
    if red.constant.num != 0 && (has_wildcard(text) || has_wildcard(pattern)) {
        return Err(Error::InvalidParameter(
            "a reduction with a constant term needs wildcard-free inputs".into(),
        ));
    }
    let lift = |s: &RleSequence, f: &SymbolMap| {
        s.map_symbols(|x| match x {
            Symbol::Value(v) => Symbol::Value(f(v)),
            Symbol::Wildcard => Symbol::Wildcard,
        })
    };
    combine(red, n - m + 1, m, |term| {
        base_solver(
            &lift(text, &term.text_map),
            &lift(pattern, &term.pattern_map),
        )
    })
}

/// [`apply`] on plain symbol slices.
pub fn apply_slices<F>(
    red: &LinearReduction,
    text: &[u64],
    pattern: &[u64],
    mut base_solver: F,
) -> Result<DistanceArray>
where
    F: FnMut(&[u64], &[u64]) -> Result<DistanceArray>,
{
    let (n, m) = (text.len(), pattern.len());
    if m == 0 || m > n {
        return Err(Error::PatternLongerThanText {
            text: n,
            pattern: m,
        });
    }
    check_domain(red, text.iter().copied().max())?;
    check_domain(red, pattern.iter().copied().max())?;
    combine(red, n - m + 1, m, |term| {
        let t: Vec<u64> = text.iter().map(|&x| (term.text_map)(x)).collect();
        let p: Vec<u64> = pattern.iter().map(|&x| (term.pattern_map)(x)).collect();
        base_solver(&t, &p)
    })
}

/// Hamming distance on wildcard-free run-length encoded inputs.
pub trait HamBackend: Sync {
    fn ham(&self, text: &RleSequence, pattern: &RleSequence) -> Result<DistanceArray>;
}

/// The block-pair algorithm of [`rle_ham`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RleHam;

impl HamBackend for RleHam {
    fn ham(&self, text: &RleSequence, pattern: &RleSequence) -> Result<DistanceArray> {
        rle_ham(text, pattern)
    }
}

impl<F> HamBackend for F
where
    F: Fn(&RleSequence, &RleSequence) -> Result<DistanceArray> + Sync,
{
    fn ham(&self, text: &RleSequence, pattern: &RleSequence) -> Result<DistanceArray> {
        self(text, pattern)
    }
}

/// Kernel backend computing wildcard L1 through the threshold family. Each
/// threshold instance has its wildcards removed by the two-image device,
/// `Ham_∗(T, P) = Ham(T₁, P₁) − Ham(T₂, P₂)`, and is solved by `H`.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdBackend<'a, H: ?Sized>(pub &'a H);

impl<H: HamBackend + ?Sized> ThresholdBackend<'_, H> {
    pub fn l1(&self, text: &RleSequence, pattern: &RleSequence) -> Result<DistanceArray> {
        let max = text
            .runs()
            .iter()
            .chain(pattern.runs())
            .filter_map(|r| r.symbol.value())
            .max()
            .unwrap_or(0);
        let red = l1_to_ham(max.max(1))?;
        // the threshold maps keep wildcard positions, so the indicator images
        // are the same for every instance
        let (_, t2) = eliminate_wildcards_rle(text);
        let (_, p2) = eliminate_wildcards_rle(pattern);
        let aligned_wild = self
            .0
            .ham(&t2, &p2)?
            .to_finite()
            .ok_or(Error::CappedBaseResult)?;
        apply(&red, text, pattern, |t, p| {
            let (t1, _) = eliminate_wildcards_rle(t);
            let (p1, _) = eliminate_wildcards_rle(p);
            let h1 = self
                .0
                .ham(&t1, &p1)?
                .to_finite()
                .ok_or(Error::CappedBaseResult)?;
            let diff: Vec<i64> = h1
                .iter()
                .zip(&aligned_wild)
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect();
            DistanceArray::from_signed(&diff)
        })
    }
}

impl<H: HamBackend + ?Sized> KernelBackend for ThresholdBackend<'_, H> {
    fn l1(
        &self,
        text: &RleSequence,
        pattern: &RleSequence,
        _: &WorkCounters,
    ) -> Result<DistanceArray> {
        ThresholdBackend::l1(self, text, pattern)
    }
}

/// k-approximated L1 distance with every kernel instance solved by a Hamming
/// backend through the threshold family.
pub fn kapprox_l1_via_ham<H: HamBackend + ?Sized>(
    text: &IntSequence,
    pattern: &IntSequence,
    k: u64,
    seed: u64,
    ham_backend: &H,
) -> Result<DistanceArray> {
    kapprox_l1_with(
        text,
        pattern,
        k,
        seed,
        &ThresholdBackend(ham_backend),
        &WorkCounters::new(),
    )
}
