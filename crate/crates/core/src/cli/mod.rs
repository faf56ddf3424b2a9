//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure (or evaluator
//! disagreement), 2 usage or validation error, 3 budget exceeded (or a
//! budget skip under `--strict`).

mod bench;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::charsum::{
    charsum_brute_vector, charsum_brute_with_budget, charsum_closed, charsum_s2,
    charsum_vector_capped, orbit_decompose_with_budget, Mode, ReductionModulus,
};
use crate::config::Budgets;
use crate::error::Error;
use crate::legendre::{legendre_brute, legendre_euler, legendre_reciprocity_with_budget};
use crate::modular::{make_odd_prime, OddPrime};
use crate::proofcheck::{verify_pair, Fault, SuiteOptions, Verifier};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const THREADS_ENV: &str = "QRLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qrlab",
    version,
    about = "Legendre symbols, character sums over Z_p and quadratic reciprocity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolMethod {
    Euler,
    Brute,
    Reciprocity,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CharsumMethod {
    Brute,
    Conv,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchOp {
    Symbol,
    Charsum,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Legendre symbol (a/p)
    Symbol {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(long, value_enum, default_value_t = SymbolMethod::Euler)]
        method: SymbolMethod,
    },
    /// Compute S_n(t), or the whole vector when t is omitted
    Charsum {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        n: u64,
        #[arg(allow_negative_numbers = true)]
        t: Option<i64>,
        #[arg(long, value_enum, default_value_t = CharsumMethod::Conv)]
        method: CharsumMethod,
        /// Reduce modulo m (the convolution then runs in modular arithmetic)
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
        /// Tuple budget for the brute-force method
        #[arg(long, default_value_t = crate::config::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        /// Largest order computed in exact arithmetic
        #[arg(long, default_value_t = crate::config::DEFAULT_MAX_EXACT_ORDER)]
        max_order: u64,
    },
    /// Decompose the q-tuples summing to t mod p into cyclic-shift orbits
    Orbit {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        #[arg(allow_negative_numbers = true)]
        t: i64,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = crate::config::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Check the congruences for S_q(1) and the reciprocity law for one pair
    Verify {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        #[arg(long)]
        json: bool,
    },
    /// Check every step over all primes p <= pmax and pairs with q <= qmax
    Suite {
        #[arg(long, default_value_t = 50)]
        pmax: u64,
        #[arg(long, default_value_t = 50)]
        qmax: u64,
        /// Largest (odd) order n in the per-prime checks
        #[arg(long, default_value_t = 9)]
        nmax: u64,
        #[arg(long)]
        json: bool,
        /// Print every step in text mode, not only failures
        #[arg(long)]
        verbose: bool,
        /// Worker threads (default: $QRLAB_THREADS, then available parallelism)
        #[arg(long)]
        threads: Option<usize>,
        /// Exit 3 when any step was skipped for budget
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = crate::config::DEFAULT_MAX_EXACT_ORDER)]
        max_order: u64,
        #[arg(long, hide = true, value_name = "P:N:T[:DELTA]")]
        inject_fault: Option<Fault>,
    },
    /// Time the Legendre evaluators and the character-sum routes
    Bench {
        #[arg(long, value_enum, default_value_t = BenchOp::All)]
        op: BenchOp,
        /// Largest prime size for the symbol benchmark
        #[arg(long, default_value_t = 10_007)]
        pmax: u64,
        /// Prime for the character-sum benchmark
        #[arg(long, default_value_t = 101)]
        p: u64,
        /// Order for the character-sum benchmark
        #[arg(long, default_value_t = 5)]
        n: u64,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        /// Tuple budget for the brute-force timing
        #[arg(long, default_value_t = 200_000_000)]
        budget: u64,
    },
}

/// Outcome of a subcommand: exit code, with output already written.
type Outcome = Result<i32, Error>;

fn exit_code_for(e: &Error) -> i32 {
    match e {
        e if e.is_budget() => EXIT_BUDGET,
        Error::InternalInconsistency(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn prime_arg(n: i64) -> Result<OddPrime, Error> {
    make_odd_prime(n)
}

fn write_out(out: &mut dyn Write, s: &str) -> Outcome {
    out.write_all(s.as_bytes())
        .map_err(|e| Error::InvalidRange(format!("write failed: {e}")))?;
    Ok(EXIT_OK)
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Symbol { a, p, method } => cmd_symbol(a, p, method, out, err),
        Command::Charsum {
            p,
            n,
            t,
            method,
            modulus,
            budget,
            max_order,
        } => cmd_charsum(p, n, t, method, modulus, budget, max_order, out),
        Command::Orbit {
            p,
            q,
            t,
            json,
            budget,
        } => cmd_orbit(p, q, t, json, budget, out),
        Command::Verify { p, q, json } => cmd_verify(p, q, json, out),
        Command::Suite {
            pmax,
            qmax,
            nmax,
            json,
            verbose,
            threads,
            strict,
            max_order,
            inject_fault,
        } => {
            let budgets = Budgets {
                max_exact_order: max_order,
                ..Budgets::default()
            };
            let settings = SuiteSettings {
                pmax,
                qmax,
                n_max: nmax,
                json,
                verbose,
                threads: resolve_threads(threads),
                strict,
                budgets,
                fault: inject_fault,
            };
            cmd_suite(&settings, out, err)
        }
        Command::Bench {
            op,
            pmax,
            p,
            n,
            repetitions,
            budget,
        } => {
            let table = bench::run(op, pmax, p, n, repetitions, budget)?;
            write_out(out, &table)
        }
    }
}

/// `--threads`, then `$QRLAB_THREADS`, then the available parallelism.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.filter(|&n| n > 0)
        .or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
        })
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn cmd_symbol(
    a: i64,
    p: i64,
    method: SymbolMethod,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let p = prime_arg(p)?;
    let a = p.residue_i128(a as i128);
    let budget = Budgets::default().factoring;
    match method {
        SymbolMethod::Euler => write_out(out, &format!("{}\n", legendre_euler(a)?)),
        SymbolMethod::Brute => write_out(out, &format!("{}\n", legendre_brute(a))),
        SymbolMethod::Reciprocity => write_out(
            out,
            &format!("{}\n", legendre_reciprocity_with_budget(a, budget)?),
        ),
        SymbolMethod::All => {
            let euler = legendre_euler(a)?;
            let brute = legendre_brute(a);
            let recip = legendre_reciprocity_with_budget(a, budget)?;
            write_out(
                out,
                &format!("euler: {euler}\nbrute: {brute}\nreciprocity: {recip}\n"),
            )?;
            if euler == brute && brute == recip {
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(err, "error: evaluators disagree for ({a})");
                Ok(EXIT_FAILURE)
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_charsum(
    p: i64,
    n: u64,
    t: Option<i64>,
    method: CharsumMethod,
    modulus: Option<u64>,
    budget: u64,
    max_order: u64,
    out: &mut dyn Write,
) -> Outcome {
    let p = prime_arg(p)?;
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    let reduction = modulus.map(ReductionModulus::new).transpose()?;
    let t = t.map(|t| p.residue_i128(t as i128));

    let render = |values: Vec<BigInt>| -> String {
        let shown: Vec<String> = values
            .iter()
            .map(|v| match reduction {
                Some(m) => m.reduce(v).to_string(),
                None => v.to_string(),
            })
            .collect();
        match t {
            Some(_) => format!("{}\n", shown[0]),
            None => format!("[{}]\n", shown.join(", ")),
        }
    };

    let text = match method {
        CharsumMethod::Conv => {
            let mode = reduction.map_or(Mode::Exact, Mode::Modular);
            let v = charsum_vector_capped(p, n, mode, max_order)?;
            match t {
                Some(t) => match mode {
                    Mode::Exact => format!("{}\n", v.exact_at(t.value()).expect("exact")),
                    Mode::Modular(_) => format!("{}\n", v.modular_at(t.value()).expect("modular")),
                },
                None => format!("{v}\n"),
            }
        }
        CharsumMethod::Brute => match t {
            Some(t) => render(vec![charsum_brute_with_budget(p, n, t, budget)?]),
            None => render(charsum_brute_vector(p, n, budget)?),
        },
        CharsumMethod::Closed => {
            let closed = |t| -> Result<BigInt, Error> {
                if n == 2 {
                    Ok(charsum_s2(p, t)?.into())
                } else {
                    charsum_closed(p, n, t)
                }
            };
            match t {
                Some(t) => render(vec![closed(t)?]),
                None => render(p.residues().map(closed).collect::<Result<_, _>>()?),
            }
        }
    };
    write_out(out, &text)
}

fn cmd_orbit(p: i64, q: i64, t: i64, as_json: bool, budget: u64, out: &mut dyn Write) -> Outcome {
    let p = prime_arg(p)?;
    let q = prime_arg(q)?;
    let t = p.residue_i128(t as i128);
    let stats = orbit_decompose_with_budget(p, q, t, budget)?;
    let text = if as_json {
        let value = json!({
            "p": p.get(),
            "q": q.get(),
            "t": t.value(),
            "tuples": stats.tuple_count(),
            "n_fixed": stats.n_fixed,
            "n_free": stats.n_free,
            "fixed_value": stats.fixed_value.map(|x| x.value()),
            "fixed_contribution": stats.fixed_contribution,
            "free_contribution": stats.free_contribution.to_string(),
            "total": stats.total.to_string(),
            "congruent_mod_q": stats.congruence_holds(),
        });
        format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
    } else {
        format!(
            "p={} q={} t={}\ntuples: {}\nfixed orbits: {} (x = {})\nfree orbits: {}\n\
             fixed contribution: {}\nfree contribution: {}\ntotal S_q(t): {}\n\
             total = fixed (mod q): {}\n",
            p,
            q,
            t.value(),
            stats.tuple_count(),
            stats.n_fixed,
            stats
                .fixed_value
                .map_or("-".to_string(), |x| x.value().to_string()),
            stats.n_free,
            stats.fixed_contribution,
            stats.free_contribution,
            stats.total,
            stats.congruence_holds()
        )
    };
    write_out(out, &text)?;
    Ok(if stats.congruence_holds() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn cmd_verify(p: i64, q: i64, as_json: bool, out: &mut dyn Write) -> Outcome {
    let p = prime_arg(p)?;
    let q = prime_arg(q)?;
    let report = verify_pair(p, q)?;
    if as_json {
        write_out(out, &format!("{}\n", report.to_json()))?;
    } else {
        write_out(out, &report.to_text())?;
    }
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

struct SuiteSettings {
    pmax: u64,
    qmax: u64,
    n_max: u64,
    json: bool,
    verbose: bool,
    threads: usize,
    strict: bool,
    budgets: Budgets,
    fault: Option<Fault>,
}

fn cmd_suite(s: &SuiteSettings, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let mut verifier = Verifier::new(s.budgets);
    if let Some(fault) = s.fault {
        let _ = writeln!(err, "warning: injecting fault {fault}");
        verifier = verifier.with_fault(fault);
    }
    let total = crate::modular::odd_primes_up_to(s.pmax).len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let progress = |p: OddPrime| {
        let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        eprintln!("checked p = {p} ({k}/{total})");
    };
    let options = SuiteOptions {
        threads: Some(s.threads),
        progress: Some(&progress),
        ..SuiteOptions::new(s.pmax, s.qmax, s.n_max)
    };
    let report = verifier.run_suite(&options)?;
    if report.params.pairs == Some(0) {
        let _ = writeln!(err, "note: no prime pairs (p, q) with p != q in range");
    }

    if s.json {
        write_out(out, &format!("{}\n", report.to_json()))?;
    } else if s.verbose {
        write_out(out, &report.to_text())?;
    } else {
        let mut brief = report.clone();
        brief.steps.retain(|step| !step.passed);
        write_out(out, &brief.to_text())?;
    }

    let summary = report.summary;
    Ok(if summary.failed > 0 {
        EXIT_FAILURE
    } else if summary.skipped > 0 && s.strict {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threads_flag_wins() {
        assert_eq!(resolve_threads(Some(3)), 3);
        assert!(resolve_threads(None) >= 1);
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code_for(&Error::NotPrime(6)), EXIT_USAGE);
        assert_eq!(exit_code_for(&Error::SamePrime(5)), EXIT_USAGE);
        assert_eq!(
            exit_code_for(&Error::OrderBudgetExceeded { order: 9, max: 8 }),
            EXIT_BUDGET
        );
        assert_eq!(
            exit_code_for(&Error::InternalInconsistency("x".into())),
            EXIT_FAILURE
        );
    }
}
