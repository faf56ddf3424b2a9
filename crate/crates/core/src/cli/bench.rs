//! Wall-clock timings for the evaluator variants. Timings only; correctness
//! is covered by the test suites.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use super::BenchOp;
use crate::charsum::{
    charsum_brute_with_budget, charsum_closed, charsum_vector_capped, Mode, ReductionModulus,
};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::legendre::{legendre_brute, legendre_euler, legendre_reciprocity, LegendreValue};
use crate::modular::{is_prime_u64, OddPrime, Residue};

const SYMBOL_SAMPLES: u64 = 200;

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn time<T>(repetitions: usize, mut f: impl FnMut() -> T) -> Duration {
    let samples = (0..repetitions)
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            start.elapsed()
        })
        .collect();
    median(samples)
}

fn value(v: Result<LegendreValue>) -> i64 {
    v.map_or(0, |v| i64::from(v.value()))
}

fn largest_prime_at_most(n: u64) -> Option<OddPrime> {
    (3..=n)
        .rev()
        .find(|&k| is_prime_u64(k))
        .map(|k| OddPrime::new(k).expect("odd prime"))
}

/// Largest primes below 100, 1000, ... up to `pmax`, and below `pmax` itself.
fn symbol_sizes(pmax: u64) -> Vec<OddPrime> {
    let mut sizes = Vec::new();
    let mut bound = 100u64;
    while bound < pmax {
        sizes.extend(largest_prime_at_most(bound));
        bound = bound.saturating_mul(10);
    }
    sizes.extend(largest_prime_at_most(pmax));
    sizes.dedup();
    sizes
}

fn row(table: &mut String, op: &str, method: &str, p: u64, n: &str, cell: &str) {
    let _ = writeln!(table, "{op:<8} {method:<12} {p:>10} {n:>4} {cell:>14}");
}

fn micros(d: Duration) -> String {
    format!("{:.1}", d.as_secs_f64() * 1e6)
}

pub(super) fn run(
    op: BenchOp,
    pmax: u64,
    p: u64,
    n: u64,
    repetitions: usize,
    budget: u64,
) -> Result<String> {
    if repetitions == 0 {
        return Err(Error::InvalidRange(
            "--repetitions must be at least 1".into(),
        ));
    }
    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<8} {:<12} {:>10} {:>4} {:>14}",
        "op", "method", "p", "n", "median_us"
    );

    if matches!(op, BenchOp::Symbol | BenchOp::All) {
        if pmax < 3 {
            return Err(Error::InvalidRange(format!("--pmax {pmax} is below 3")));
        }
        for size in symbol_sizes(pmax) {
            let step = ((size.get() - 1) / SYMBOL_SAMPLES).max(1);
            let args: Vec<Residue> = (1..size.get())
                .step_by(step as usize)
                .map(|a| size.residue(a))
                .collect();
            let euler = time(repetitions, || {
                args.iter().map(|&a| value(legendre_euler(a))).sum::<i64>()
            });
            let brute = time(repetitions, || {
                args.iter()
                    .map(|&a| value(Ok(legendre_brute(a))))
                    .sum::<i64>()
            });
            let recip = time(repetitions, || {
                args.iter()
                    .map(|&a| value(legendre_reciprocity(a)))
                    .sum::<i64>()
            });
            let per_call = |d: Duration| d / args.len() as u32;
            row(
                &mut table,
                "symbol",
                "euler",
                size.get(),
                "-",
                &micros(per_call(euler)),
            );
            row(
                &mut table,
                "symbol",
                "brute",
                size.get(),
                "-",
                &micros(per_call(brute)),
            );
            row(
                &mut table,
                "symbol",
                "reciprocity",
                size.get(),
                "-",
                &micros(per_call(recip)),
            );
        }
    }

    if matches!(op, BenchOp::Charsum | BenchOp::All) {
        let prime = OddPrime::new(p)?;
        if n == 0 {
            return Err(Error::InvalidOrder);
        }
        let cap = Budgets::default().max_exact_order;
        let nn = n.to_string();
        let m = ReductionModulus::new((1 << 31) - 1)?;
        let conv = time(repetitions, || {
            charsum_vector_capped(prime, n, Mode::Exact, cap).is_ok()
        });
        row(&mut table, "charsum", "conv", p, &nn, &micros(conv));
        let conv_mod = time(repetitions, || {
            charsum_vector_capped(prime, n, Mode::Modular(m), cap).is_ok()
        });
        row(&mut table, "charsum", "conv-mod", p, &nn, &micros(conv_mod));
        if n % 2 == 1 {
            let closed = time(repetitions, || {
                charsum_closed(prime, n, prime.residue(1)).is_ok()
            });
            row(&mut table, "charsum", "closed", p, &nn, &micros(closed));
        }
        match charsum_brute_with_budget(prime, n, prime.residue(1), budget) {
            Err(e) if e.is_budget() => row(&mut table, "charsum", "brute", p, &nn, "over-budget"),
            _ => {
                let brute = time(repetitions, || {
                    charsum_brute_with_budget(prime, n, prime.residue(1), budget).is_ok()
                });
                row(&mut table, "charsum", "brute", p, &nn, &micros(brute));
            }
        }
    }
    Ok(table)
}
