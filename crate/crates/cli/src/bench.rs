use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use l1match_core::convolve::{weighted_mismatches_with, AbsDiff, Route};
use l1match_core::kernel::kapprox_l1_with;
use l1match_core::l1approx::approximate_with;
use l1match_core::{generate, ApproxParams, CounterSnapshot, IntSequence, RleL1, WorkCounters};
use serde::Serialize;

use crate::input::load_pair;
use crate::output::emit;
use crate::{Failure, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Exact,
    Approx,
    Kapprox,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Operation::Approx)]
    op: Operation,
    /// Input files; random inputs of the given shape are generated if absent.
    #[arg(long, requires = "pattern")]
    text: Option<PathBuf>,
    #[arg(long, requires = "text")]
    pattern: Option<PathBuf>,
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long, default_value_t = 512)]
    m: usize,
    #[arg(long, default_value_t = (1 << 20) - 1)]
    max_value: u64,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = 16)]
    k: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Counters {
    correlations: u64,
    transform_correlations: u64,
    direct_cells: u64,
    max_alphabet: u64,
    repetitions: u64,
    levels: u64,
    block_pairs: u64,
    kangaroo_jumps: u64,
    kernel_instances: u64,
    verified_alignments: u64,
}

impl From<CounterSnapshot> for Counters {
    fn from(s: CounterSnapshot) -> Self {
        Self {
            correlations: s.correlations,
            transform_correlations: s.transform_correlations,
            direct_cells: s.direct_cells,
            max_alphabet: s.max_alphabet,
            repetitions: s.repetitions,
            levels: s.levels,
            block_pairs: s.block_pairs,
            kangaroo_jumps: s.kangaroo_jumps,
            kernel_instances: s.kernel_instances,
            verified_alignments: s.verified_alignments,
        }
    }
}

#[derive(Serialize)]
struct Report {
    operation: Operation,
    n: usize,
    m: usize,
    max_value: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_bits: Option<u32>,
    /// Alphabet of each bit-window correlation, `2^b`.
    #[serde(skip_serializing_if = "Option::is_none")]
    alphabet: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correlations_per_run: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    wall_seconds: f64,
    counters: Counters,
}

fn inputs(args: &BenchArgs) -> Result<(IntSequence, IntSequence), Failure> {
    match (&args.text, &args.pattern) {
        (Some(t), Some(p)) => load_pair(t, p),
        _ => {
            if args.m == 0 || args.m > args.n {
                return Err(Failure::Constraint(format!(
                    "need 1 ≤ m ≤ n, got m = {}, n = {}",
                    args.m, args.n
                )));
            }
            let alphabet = args
                .max_value
                .checked_add(1)
                .ok_or_else(|| Failure::Constraint("max value too large".into()))?;
            let t = generate(args.n, alphabet, None, 0, args.seed)?;
            let p = generate(args.m, alphabet, None, 0, args.seed ^ 1)?;
            Ok((t, p))
        }
    }
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    let (t, p) = inputs(args)?;
    let max_value = t.max_value().max(p.max_value());
    let counters = WorkCounters::new();
    let mut report = Report {
        operation: args.op,
        n: t.len(),
        m: p.len(),
        max_value,
        epsilon: None,
        window_bits: None,
        alphabet: None,
        correlations_per_run: None,
        k: None,
        wall_seconds: 0.0,
        counters: counters.snapshot().into(),
    };
    let start = Instant::now();
    match args.op {
        Operation::Exact => {
            let weight = AbsDiff {
                domain: max_value + 1,
            };
            weighted_mismatches_with(t.as_slice(), p.as_slice(), &weight, Route::Auto, &counters)?;
        }
        Operation::Approx => {
            let mut params = ApproxParams::new(args.epsilon, max_value, t.len())?;
            if let Some(reps) = args.reps {
                params = params.with_repetitions(reps)?;
            }
            approximate_with(&t, &p, &params, args.seed, &counters)?;
            report.epsilon = Some(args.epsilon);
            report.window_bits = Some(params.window_bits());
            report.alphabet = Some(params.alphabet_size());
        }
        Operation::Kapprox => {
            kapprox_l1_with(&t, &p, args.k, args.seed, &RleL1, &counters)?;
            report.k = Some(args.k);
        }
    }
    report.wall_seconds = start.elapsed().as_secs_f64();
    let snapshot = counters.snapshot();
    if args.op == Operation::Approx && snapshot.repetitions > 0 {
        report.correlations_per_run =
            Some(snapshot.correlations as f64 / snapshot.repetitions as f64);
    }
    report.counters = snapshot.into();
    let mut json = serde_json::to_string_pretty(&report).expect("plain data serializes");
    json.push('\n');
    emit(&json, args.out.as_deref())
}
