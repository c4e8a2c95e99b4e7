//! Benchmark fixtures. The benchmarks themselves live in `benches/`.

use l1match_core::{generate, IntSequence};

/// Random text and pattern over `0..=max_value`.
pub fn random_pair(n: usize, m: usize, max_value: u64, seed: u64) -> (IntSequence, IntSequence) {
    (
        generate(n, max_value + 1, None, 0, seed).expect("valid shape"),
        generate(m, max_value + 1, None, 0, seed ^ 1).expect("valid shape"),
    )
}

/// A pattern with a short approximate period and a text made of shifted
/// copies of it, so that k-approximation takes the kernel path.
pub fn periodic_pair(
    n: usize,
    m: usize,
    period: usize,
    corruption: usize,
    seed: u64,
) -> (IntSequence, IntSequence) {
    let pattern = generate(m, 64, Some(period), corruption, seed).expect("valid shape");
    let text: Vec<u64> = pattern
        .as_slice()
        .iter()
        .cycle()
        .skip(1)
        .take(n)
        .copied()
        .collect();
    (IntSequence::new(text, 63).expect("bounded"), pattern)
}
