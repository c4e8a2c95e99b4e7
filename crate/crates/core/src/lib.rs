//! Text-to-pattern L1 and Hamming distances: exact, (1 ± ε)-approximate and
//! k-approximated (values above `k` reported as infinite).
//!
//! The crate is organised bottom-up:
//!
//! - [`seq`]: sequence types, normalization, run-length encoding, generators
//! - [`convolve`]: exact correlation and generalized weighted mismatches
//! - [`oracle`]: brute-force references
//! - [`l1approx`]: the shifted bit-window (1 ± ε) estimator
//! - [`hamapprox`]: random binary projections for constant-factor Hamming estimates
//! - [`kangaroo`]: LCP queries and capped per-alignment verification
//! - [`rledist`]: exact distances on run-length encoded inputs with wildcards
//! - [`kernel`]: period casework, filtering and kernelization into short instances
//! - [`reduce`]: linear reductions between Hamming and L1 distance

pub mod convolve;
pub mod counters;
pub mod error;
pub mod hamapprox;
pub mod kangaroo;
pub mod kernel;
pub mod l1approx;
pub mod oracle;
pub mod reduce;
pub mod rledist;
mod rng;
pub mod seq;

pub use convolve::{exact_ham, exact_l1};
pub use counters::{CounterSnapshot, WorkCounters};
pub use error::{Error, Result};
pub use kernel::{kapprox_l1, RleL1};
pub use l1approx::{approximate, ApproxParams};
pub use oracle::Metric;
pub use rng::stream_rng;
pub use seq::{
    generate, normalize, normalize_all, rle_decode, rle_encode, Distance, DistanceArray,
    IntSequence, RleSequence, Run, Symbol, WildcardSequence,
};
