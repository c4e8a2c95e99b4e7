use l1match_core::l1approx::approximate_with;
use l1match_core::oracle::{cap, naive_ham, naive_l1};
use l1match_core::{
    exact_ham, exact_l1, generate, kapprox_l1, ApproxParams, DistanceArray, IntSequence, RleL1,
    WorkCounters,
};

use crate::input::load_pair;
use crate::output::{emit, render};
use crate::{Failure, GenArgs, MetricArg, RunArgs};

fn require_l1(args: &RunArgs, command: &str) -> Result<(), Failure> {
    if args.metric == MetricArg::Ham {
        return Err(Failure::Constraint(format!(
            "{command} supports only --metric l1"
        )));
    }
    Ok(())
}

fn mismatches(got: &DistanceArray, expect: &DistanceArray) -> usize {
    got.iter().zip(expect).filter(|(a, b)| a != b).count()
}

fn oracle(args: &RunArgs, t: &IntSequence, p: &IntSequence) -> Result<DistanceArray, Failure> {
    Ok(match args.metric {
        MetricArg::L1 => naive_l1(t.as_slice(), p.as_slice())?,
        MetricArg::Ham => naive_ham(t.as_slice(), p.as_slice())?,
    })
}

fn finish(args: &RunArgs, scores: &DistanceArray) -> Result<(), Failure> {
    emit(&render(scores, args.format), args.out.as_deref())
}

fn check_exact(got: &DistanceArray, expect: &DistanceArray) -> Result<(), Failure> {
    let bad = mismatches(got, expect);
    eprintln!("oracle check: {bad} mismatching positions");
    if bad > 0 {
        return Err(Failure::Oracle(format!(
            "{bad} positions differ from brute force"
        )));
    }
    Ok(())
}

pub fn exact(args: &RunArgs) -> Result<(), Failure> {
    let (t, p) = load_pair(&args.text, &args.pattern)?;
    let scores = match args.metric {
        MetricArg::L1 => exact_l1(&t, &p)?,
        MetricArg::Ham => exact_ham(&t, &p)?,
    };
    finish(args, &scores)?;
    if args.oracle_check {
        check_exact(&scores, &oracle(args, &t, &p)?)?;
    }
    Ok(())
}

pub fn approx(args: &RunArgs) -> Result<(), Failure> {
    require_l1(args, "approx")?;
    let epsilon = args
        .epsilon
        .ok_or_else(|| Failure::Constraint("approx requires --epsilon".into()))?;
    let (t, p) = load_pair(&args.text, &args.pattern)?;
    let mut params = ApproxParams::new(epsilon, t.max_value().max(p.max_value()), t.len())?;
    if let Some(reps) = args.reps {
        params = params.with_repetitions(reps)?;
    }
    let scores = approximate_with(&t, &p, &params, args.seed, &WorkCounters::new())?;
    finish(args, &scores)?;
    if args.oracle_check {
        let truth = oracle(args, &t, &p)?;
        let mut worst = 0.0f64;
        let mut violations = 0;
        for (got, want) in scores.iter().zip(&truth) {
            let (g, w) = (got.finite().unwrap() as f64, want.finite().unwrap() as f64);
            let rel = if w == 0.0 {
                if g == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (g - w).abs() / w
            };
            worst = worst.max(rel);
            violations += (rel > epsilon) as usize;
        }
        eprintln!("oracle check: max relative error {worst:.6}");
        if violations > 0 {
            return Err(Failure::Oracle(format!(
                "{violations} positions outside (1 ± {epsilon})"
            )));
        }
    }
    Ok(())
}

pub fn kapprox(args: &RunArgs) -> Result<(), Failure> {
    require_l1(args, "kapprox")?;
    let k = args
        .k
        .ok_or_else(|| Failure::Constraint("kapprox requires --k".into()))?;
    let (t, p) = load_pair(&args.text, &args.pattern)?;
    let scores = kapprox_l1(&t, &p, k, args.seed, &RleL1)?;
    finish(args, &scores)?;
    if args.oracle_check {
        check_exact(&scores, &cap(&oracle(args, &t, &p)?, k))?;
    }
    Ok(())
}

pub fn gen(args: &GenArgs) -> Result<(), Failure> {
    let s = generate(
        args.length,
        args.alphabet,
        args.period,
        args.corruption,
        args.seed,
    )?;
    let mut line = s
        .as_slice()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    line.push('\n');
    emit(&line, args.out.as_deref())
}
