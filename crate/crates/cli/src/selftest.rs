use clap::Args;
use l1match_core::oracle::{cap, naive_ham, naive_l1, naive_wild};
use l1match_core::rledist::{rle_ham, rle_l1};
use l1match_core::{
    approximate, exact_ham, exact_l1, generate, kapprox_l1, rle_encode, IntSequence, Metric, RleL1,
    Symbol, WildcardSequence,
};

use crate::{Failure, DEFAULT_SEED};

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

struct Instance {
    text: IntSequence,
    pattern: IntSequence,
    k: u64,
}

/// Small instance number `trial`; every third one is periodic so that the
/// kernel path of kapprox is exercised.
fn instance(seed: u64, trial: u64) -> Result<Instance, Failure> {
    let s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial);
    let m = 2 + (s % 30) as usize;
    let n = m + (s / 31 % 60) as usize;
    let alphabet = 2 + s / 7 % 6;
    let period = trial
        .is_multiple_of(3)
        .then(|| 1 + (s / 5 % 4) as usize)
        .filter(|&p| p <= m);
    let pattern = generate(m, alphabet, period, (s % 3) as usize, s)?;
    let text = if period.is_some() {
        let cycle: Vec<u64> = pattern.as_slice().iter().cycle().take(n).copied().collect();
        IntSequence::new(cycle, alphabet - 1)?
    } else {
        generate(n, alphabet, None, 0, s ^ 0xabc)?
    };
    Ok(Instance {
        text,
        pattern,
        k: s / 13 % (m as u64 + 1),
    })
}

/// Every fourth symbol becomes a wildcard.
fn with_wildcards(s: &IntSequence, phase: usize) -> WildcardSequence {
    WildcardSequence::from_symbols(
        s.as_slice()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if (i + phase).is_multiple_of(4) {
                    Symbol::Wildcard
                } else {
                    Symbol::Value(v)
                }
            })
            .collect(),
    )
}

type Check = fn(&Instance, u64) -> Result<bool, Failure>;

fn check_exact_l1(c: &Instance, _: u64) -> Result<bool, Failure> {
    Ok(exact_l1(&c.text, &c.pattern)? == naive_l1(c.text.as_slice(), c.pattern.as_slice())?)
}

fn check_exact_ham(c: &Instance, _: u64) -> Result<bool, Failure> {
    Ok(exact_ham(&c.text, &c.pattern)? == naive_ham(c.text.as_slice(), c.pattern.as_slice())?)
}

fn check_rle(c: &Instance, _: u64) -> Result<bool, Failure> {
    let (t, p) = (with_wildcards(&c.text, 1), with_wildcards(&c.pattern, 2));
    let (rt, rp) = (rle_encode(&t), rle_encode(&p));
    Ok(
        rle_l1(&rt, &rp)? == naive_wild(t.as_slice(), p.as_slice(), Metric::L1)?
            && rle_ham(&rt, &rp)? == naive_wild(t.as_slice(), p.as_slice(), Metric::Hamming)?,
    )
}

fn check_kapprox(c: &Instance, seed: u64) -> Result<bool, Failure> {
    let expect = cap(&naive_l1(c.text.as_slice(), c.pattern.as_slice())?, c.k);
    Ok(kapprox_l1(&c.text, &c.pattern, c.k, seed, &RleL1)? == expect)
}

fn check_approx(c: &Instance, seed: u64) -> Result<bool, Failure> {
    let epsilon = 0.5;
    let got = approximate(&c.text, &c.pattern, epsilon, seed)?;
    let truth = naive_l1(c.text.as_slice(), c.pattern.as_slice())?;
    Ok(got.iter().zip(&truth).all(|(g, w)| {
        let (g, w) = (g.finite().unwrap() as f64, w.finite().unwrap() as f64);
        (g - w).abs() <= epsilon * w
    }))
}

pub fn run(args: &SelftestArgs) -> Result<(), Failure> {
    let checks: [(&str, Check); 5] = [
        ("exact l1", check_exact_l1),
        ("exact hamming", check_exact_ham),
        ("run-length wildcard l1/hamming", check_rle),
        ("k-approximated l1", check_kapprox),
        ("(1 ± 0.5)-approximate l1", check_approx),
    ];
    let instances = (0..args.trials)
        .map(|trial| instance(args.seed, trial))
        .collect::<Result<Vec<_>, _>>()?;
    let mut failed = Vec::new();
    for (name, check) in checks {
        let mut ok = 0;
        for (trial, c) in instances.iter().enumerate() {
            ok += check(c, args.seed.wrapping_add(trial as u64))? as u64;
        }
        let verdict = if ok == args.trials { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {name}: {ok}/{} instances agree with brute force",
            args.trials
        );
        if ok < args.trials {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Oracle(failed.join(", ")))
    }
}
