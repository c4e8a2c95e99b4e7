//! Operation counters reported by the benchmark harness.

use std::sync::atomic::{AtomicU64, Ordering};

/// Thread-safe work counters. Pass one to the `*_counted` entry points.
#[derive(Debug, Default)]
pub struct WorkCounters {
    correlations: AtomicU64,
    transform_correlations: AtomicU64,
    direct_cells: AtomicU64,
    max_alphabet: AtomicU64,
    repetitions: AtomicU64,
    levels: AtomicU64,
    block_pairs: AtomicU64,
    kangaroo_jumps: AtomicU64,
    kernel_instances: AtomicU64,
    verified_alignments: AtomicU64,
}

/// Plain snapshot of [`WorkCounters`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CounterSnapshot {
    /// Per-symbol correlation terms of the weighted-mismatch decomposition.
    pub correlations: u64,
    /// Correlations actually evaluated by number-theoretic transform.
    pub transform_correlations: u64,
    /// Symbol pairs evaluated by the direct route.
    pub direct_cells: u64,
    /// Largest weight alphabet seen (2^b for the approximation).
    pub max_alphabet: u64,
    pub repetitions: u64,
    pub levels: u64,
    pub block_pairs: u64,
    pub kangaroo_jumps: u64,
    pub kernel_instances: u64,
    pub verified_alignments: u64,
}

impl WorkCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add_correlations(&self, n: u64) {
        self.correlations.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_transform_correlations(&self, n: u64) {
        self.transform_correlations.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_direct_cells(&self, n: u64) {
        self.direct_cells.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn observe_alphabet(&self, size: u64) {
        self.max_alphabet.fetch_max(size, Ordering::Relaxed);
    }

    pub(crate) fn add_repetitions(&self, n: u64) {
        self.repetitions.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_levels(&self, n: u64) {
        self.levels.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_block_pairs(&self, n: u64) {
        self.block_pairs.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_kangaroo_jumps(&self, n: u64) {
        self.kangaroo_jumps.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_kernel_instances(&self, n: u64) {
        self.kernel_instances.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_verified_alignments(&self, n: u64) {
        self.verified_alignments.fetch_add(n, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        let r = |a: &AtomicU64| a.load(Ordering::Relaxed);
        CounterSnapshot {
            correlations: r(&self.correlations),
            transform_correlations: r(&self.transform_correlations),
            direct_cells: r(&self.direct_cells),
            max_alphabet: r(&self.max_alphabet),
            repetitions: r(&self.repetitions),
            levels: r(&self.levels),
            block_pairs: r(&self.block_pairs),
            kangaroo_jumps: r(&self.kangaroo_jumps),
            kernel_instances: r(&self.kernel_instances),
            verified_alignments: r(&self.verified_alignments),
        }
    }
}
