//! Numerical certification of each step of the reciprocity argument.
//!
//! For a prime `p` the checks cover the values of `S_2`, `S_n(0) = 0` for
//! odd `n`, the scaling identity `S_n(t) = (a/p)^n S_n(t/a)`, the recurrence
//! `S_{n+2}(1) = S_n(1) (-1/p) p` and the closed form of `S_n(1)`. For a
//! pair `p != q` they compute `S_q(1) mod q` three independent ways and
//! compare with both sides of the reciprocity law.

mod report;

use std::borrow::Cow;

use num_bigint::BigInt;
use rayon::prelude::*;

pub use report::{ProofReport, ProofStep, ReportParams, StepId, StepParams, StepValue, Summary};

use crate::charsum::closed::recurrence_factor;
use crate::charsum::{
    charsum_closed, charsum_ladder, charsum_s2, charsum_vector, convolve_exact_at, sq1_mod_q_orbit,
    CharSumVector, Mode, ReductionModulus,
};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::legendre::{legendre_euler, reciprocity_sign};
use crate::modular::{mod_inv, odd_primes_up_to, pow_mod, OddPrime};

/// A deliberate corruption of one exact vector entry, used to confirm that
/// the checks notice it. Every read of `S_order` for modulus `p` sees
/// `S_order(t) + delta`; vectors derived before the read are unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub p: u64,
    pub order: u64,
    pub t: u64,
    pub delta: i64,
}

impl std::str::FromStr for Fault {
    type Err = String;

    /// Parses `P:N:T` or `P:N:T:DELTA` (default delta 1).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected P:N:T[:DELTA], got {s:?}"));
        }
        let num = |i: usize| {
            parts[i]
                .parse::<u64>()
                .map_err(|e| format!("{:?}: {e}", parts[i]))
        };
        let delta = match parts.get(3) {
            Some(d) => d.parse::<i64>().map_err(|e| format!("{d:?}: {e}"))?,
            None => 1,
        };
        Ok(Fault {
            p: num(0)?,
            order: num(1)?,
            t: num(2)?,
            delta,
        })
    }
}

impl std::fmt::Display for Fault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}:{}", self.p, self.order, self.t, self.delta)
    }
}

/// Exact vectors `S_1, ..., S_top` for one prime, shared by the per-prime checks.
struct Ladder {
    p: OddPrime,
    vectors: Vec<CharSumVector>,
    cap: u64,
    fault: Option<Fault>,
}

impl Ladder {
    fn build(p: OddPrime, top: u64, budgets: &Budgets, fault: Option<Fault>) -> Result<Self> {
        let built = top.min(budgets.max_exact_order);
        let vectors = if built == 0 {
            Vec::new()
        } else {
            charsum_ladder(p, built, Mode::Exact, budgets.max_exact_order)?
        };
        Ok(Ladder {
            p,
            vectors,
            cap: budgets.max_exact_order,
            fault: fault.filter(|f| f.p == p.get()),
        })
    }

    fn get(&self, n: u64) -> Result<Cow<'_, CharSumVector>> {
        if n == 0 {
            return Err(Error::InvalidOrder);
        }
        let v = self
            .vectors
            .get(n as usize - 1)
            .ok_or(Error::OrderBudgetExceeded {
                order: n,
                max: self.cap,
            })?;
        Ok(match self.fault {
            Some(f) if f.order == n => Cow::Owned(v.perturbed(f.t, f.delta)),
            _ => Cow::Borrowed(v),
        })
    }
}

fn big(v: &BigInt) -> StepValue {
    StepValue::Big(v.clone())
}

fn exact(v: &CharSumVector, t: u64) -> &BigInt {
    v.exact_at(t).expect("ladder vectors are exact")
}

fn symbol(a: u64, p: OddPrime) -> Result<i64> {
    Ok(i64::from(legendre_euler(p.residue(a))?))
}

fn distinct(p: OddPrime, q: OddPrime) -> Result<()> {
    if p == q {
        return Err(Error::SamePrime(p.get()));
    }
    Ok(())
}

/// Runs the checks with configurable budgets and an optional injected fault.
#[derive(Debug, Clone, Default)]
pub struct Verifier {
    pub budgets: Budgets,
    pub fault: Option<Fault>,
}

impl Verifier {
    pub fn new(budgets: Budgets) -> Self {
        Verifier {
            budgets,
            fault: None,
        }
    }

    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }

    fn ladder(&self, p: OddPrime, top: u64) -> Result<Ladder> {
        Ladder::build(p, top, &self.budgets, self.fault)
    }

    pub fn s2_identities(&self, p: OddPrime) -> Result<Vec<ProofStep>> {
        s2_steps(&self.ladder(p, 2)?)
    }

    pub fn scaling_and_zero(&self, p: OddPrime, n: u64) -> Result<Vec<ProofStep>> {
        scaling_steps(&self.ladder(p, n)?, n)
    }

    pub fn recurrence_chain(&self, p: OddPrime, n_max: u64) -> Result<Vec<ProofStep>> {
        recurrence_steps(&self.ladder(p, n_max.max(2))?, n_max)
    }

    pub fn congruences(&self, p: OddPrime, q: OddPrime) -> Result<Vec<ProofStep>> {
        congruence_steps(p, q)
    }

    pub fn reciprocity(&self, p: OddPrime, q: OddPrime) -> Result<ProofStep> {
        reciprocity_step(p, q)
    }

    /// All per-prime steps for `p` followed by the pair steps for each `q`.
    fn cell(&self, p: OddPrime, qs: &[OddPrime], n_max: u64) -> Vec<ProofStep> {
        let mut steps = Vec::new();
        let ladder = Ladder::build(p, n_max.max(2), &self.budgets, self.fault);
        let record = |steps: &mut Vec<ProofStep>,
                      id: StepId,
                      params: StepParams,
                      r: Result<Vec<ProofStep>>| match r {
            Ok(mut s) => steps.append(&mut s),
            Err(e) if e.is_budget() => steps.push(ProofStep::skipped(id, params, e.to_string())),
            Err(e) => steps.push(ProofStep::errored(id, params, e.to_string())),
        };
        match &ladder {
            Ok(ladder) => {
                record(
                    &mut steps,
                    StepId::S2Values,
                    StepParams::prime(p.get()),
                    s2_steps(ladder),
                );
                for n in 1..=n_max {
                    let params = StepParams::prime(p.get()).with_n(n);
                    record(
                        &mut steps,
                        StepId::Scaling,
                        params,
                        scaling_steps(ladder, n),
                    );
                }
                let params = StepParams::prime(p.get()).with_n(n_max);
                record(
                    &mut steps,
                    StepId::Recurrence,
                    params,
                    recurrence_steps(ladder, n_max),
                );
            }
            Err(e) => {
                let params = StepParams::prime(p.get());
                record(&mut steps, StepId::S2Values, params, Err(e.clone()));
            }
        }
        steps.sort_by_key(|s| s.step_id);

        for &q in qs.iter().filter(|&&q| q != p) {
            let params = StepParams::pair(p.get(), q.get());
            record(
                &mut steps,
                StepId::EulerCongruence,
                params.clone(),
                congruence_steps(p, q),
            );
            record(
                &mut steps,
                StepId::ReciprocityLaw,
                params,
                reciprocity_step(p, q).map(|s| vec![s]),
            );
        }
        steps
    }

    pub fn run_suite(&self, options: &SuiteOptions) -> Result<ProofReport> {
        if options.pmax < 3 || options.qmax < 3 {
            return Err(Error::InvalidRange(format!(
                "pmax and qmax must be at least 3 (got {} and {})",
                options.pmax, options.qmax
            )));
        }
        if options.n_max == 0 {
            return Err(Error::InvalidOrder);
        }
        if options.n_max.is_multiple_of(2) {
            return Err(Error::EvenOrder(options.n_max));
        }
        let ps = odd_primes_up_to(options.pmax);
        let qs = odd_primes_up_to(options.qmax);
        let pairs = ps
            .iter()
            .map(|p| qs.iter().filter(|&q| q != p).count() as u64)
            .sum();

        let run = || -> Vec<Vec<ProofStep>> {
            ps.par_iter()
                .map(|&p| {
                    let steps = self.cell(p, &qs, options.n_max);
                    if let Some(progress) = options.progress {
                        progress(p);
                    }
                    steps
                })
                .collect()
        };
        let cells = match options.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidRange(format!("thread pool: {e}")))?
                .install(run),
            None => run(),
        };

        let params = ReportParams {
            pmax: Some(options.pmax),
            qmax: Some(options.qmax),
            n_max: Some(options.n_max),
            primes: Some(ps.len() as u64),
            pairs: Some(pairs),
            budgets: Some(self.budgets),
            fault: self.fault.map(|f| f.to_string()),
            ..Default::default()
        };
        Ok(ProofReport::new(params, cells.concat()))
    }
}

/// Range and execution settings for [`Verifier::run_suite`].
#[derive(Clone, Copy)]
pub struct SuiteOptions<'a> {
    pub pmax: u64,
    pub qmax: u64,
    pub n_max: u64,
    pub threads: Option<usize>,
    /// Called once per finished prime `p`, in completion order.
    pub progress: Option<&'a (dyn Fn(OddPrime) + Sync)>,
}

impl SuiteOptions<'_> {
    pub fn new(pmax: u64, qmax: u64, n_max: u64) -> Self {
        SuiteOptions {
            pmax,
            qmax,
            n_max,
            threads: None,
            progress: None,
        }
    }
}

fn s2_steps(ladder: &Ladder) -> Result<Vec<ProofStep>> {
    let p = ladder.p;
    let s2 = ladder.get(2)?;
    let params = || StepParams::prime(p.get()).with_n(2);
    let formula =
        |t: u64| -> Result<StepValue> { Ok(StepValue::Big(charsum_s2(p, p.residue(t))?.into())) };

    let mut steps = vec![
        ProofStep::equality(
            StepId::S2Values,
            params().with_t(0).with_variant("zero"),
            big(exact(&s2, 0)),
            formula(0)?,
        ),
        ProofStep::equality(
            StepId::S2Values,
            params().with_t(1).with_variant("one"),
            big(exact(&s2, 1)),
            formula(1)?,
        ),
    ];
    // S_2(a) = S_2(1) for every unit a, counted over all a.
    let one = exact(&s2, 1);
    let agreeing = (1..p.get()).filter(|&a| exact(&s2, a) == one).count();
    steps.push(ProofStep::equality(
        StepId::S2Values,
        params().with_variant("unit"),
        StepValue::Int(agreeing as i64),
        StepValue::Int(p.get() as i64 - 1),
    ));
    Ok(steps)
}

fn scaling_steps(ladder: &Ladder, n: u64) -> Result<Vec<ProofStep>> {
    let p = ladder.p;
    let sn = ladder.get(n)?;
    let values = sn.exact_values().expect("exact");
    let negated: Vec<BigInt> = values.iter().map(|v| -v).collect();
    let mut steps = Vec::new();

    if n % 2 == 1 {
        steps.push(ProofStep::equality(
            StepId::SnZero,
            StepParams::prime(p.get()).with_n(n).with_t(0),
            big(&values[0]),
            StepValue::Big(BigInt::from(0)),
        ));
    }

    // S_n(t) = (a/p)^n S_n(t a^{-1}) for every unit a and every t.
    let mut holding = 0u64;
    for a in p.units() {
        let sign = legendre_euler(a)?.pow(n);
        let inv = mod_inv(a)?;
        let scaled = if sign.value() > 0 {
            values
        } else {
            &negated[..]
        };
        for t in p.residues() {
            let u = t.try_mul(inv)?.value() as usize;
            if values[t.value() as usize] == scaled[u] {
                holding += 1;
            }
        }
    }
    let pairs = (p.get() - 1) * p.get();
    steps.push(ProofStep::equality(
        StepId::Scaling,
        StepParams::prime(p.get()).with_n(n),
        StepValue::Int(holding as i64),
        StepValue::Int(pairs as i64),
    ));
    Ok(steps)
}

fn recurrence_steps(ladder: &Ladder, n_max: u64) -> Result<Vec<ProofStep>> {
    if n_max.is_multiple_of(2) {
        return Err(Error::EvenOrder(n_max));
    }
    let p = ladder.p;
    let factor = recurrence_factor(p);
    let mut steps = Vec::new();
    for n in (1..=n_max).step_by(2) {
        let sn = ladder.get(n)?;
        let sn_one = exact(&sn, 1).clone();
        steps.push(ProofStep::equality(
            StepId::ClosedForm,
            StepParams::prime(p.get()).with_n(n).with_t(1),
            big(&sn_one),
            big(&charsum_closed(p, n, p.residue(1))?),
        ));
        if n + 2 <= n_max {
            let s2 = ladder.get(2)?;
            let next = convolve_exact_at(&sn, &s2, 1)?;
            steps.push(ProofStep::equality(
                StepId::Recurrence,
                StepParams::prime(p.get()).with_n(n + 2).with_t(1),
                big(&next),
                big(&(sn_one * &factor)),
            ));
        }
    }
    Ok(steps)
}

fn congruence_steps(p: OddPrime, q: OddPrime) -> Result<Vec<ProofStep>> {
    distinct(p, q)?;
    let m = q.get();
    let sign = reciprocity_sign(p, q);

    // (p/q)(-1)^(((p-1)/2)((q-1)/2)) and (q/p), both as residues mod q.
    let euler_side = (legendre_euler(q.residue(p.get()))? * sign).to_residue_mod(m);
    let orbit_side = legendre_euler(p.residue(q.get()))?.to_residue_mod(m);

    // (i) closed form p^((q-1)/2) (-1)^(...) reduced mod q.
    let power = pow_mod(p.get(), q.half_order(), m);
    let closed = if sign.value() < 0 {
        (m - power) % m
    } else {
        power
    };
    // (ii) the modular convolution pipeline.
    let reduction = ReductionModulus::new(m)?;
    let conv = charsum_vector(p, m, Mode::Modular(reduction))?
        .modular_at(1)
        .expect("modular vector");
    // (iii) the constant tuple alone.
    let orbit = sq1_mod_q_orbit(p, q)?.to_residue_mod(m);

    let mut steps = Vec::with_capacity(6);
    for (id, rhs) in [
        (StepId::EulerCongruence, euler_side),
        (StepId::OrbitCongruence, orbit_side),
    ] {
        for (route, lhs) in [("closed", closed), ("convolution", conv), ("orbit", orbit)] {
            let params = StepParams::pair(p.get(), q.get())
                .with_n(m)
                .with_t(1)
                .with_variant(route);
            steps.push(ProofStep::congruence(id, params, lhs, rhs, m));
        }
    }
    Ok(steps)
}

fn reciprocity_step(p: OddPrime, q: OddPrime) -> Result<ProofStep> {
    distinct(p, q)?;
    let product = symbol(p.get(), q)? * symbol(q.get(), p)?;
    Ok(ProofStep::equality(
        StepId::ReciprocityLaw,
        StepParams::pair(p.get(), q.get()),
        StepValue::Int(product),
        StepValue::Int(i64::from(reciprocity_sign(p, q))),
    ))
}

pub fn verify_s2_identities(p: OddPrime) -> Vec<ProofStep> {
    let v = Verifier::default();
    match v.s2_identities(p) {
        Ok(steps) => steps,
        Err(e) => vec![ProofStep::errored(
            StepId::S2Values,
            StepParams::prime(p.get()),
            e.to_string(),
        )],
    }
}

pub fn verify_scaling_and_zero(p: OddPrime, n: u64) -> Result<Vec<ProofStep>> {
    Verifier::default().scaling_and_zero(p, n)
}

pub fn verify_recurrence_chain(p: OddPrime, n_max: u64) -> Result<Vec<ProofStep>> {
    Verifier::default().recurrence_chain(p, n_max)
}

pub fn verify_congruences(p: OddPrime, q: OddPrime) -> Result<Vec<ProofStep>> {
    congruence_steps(p, q)
}

pub fn verify_reciprocity(p: OddPrime, q: OddPrime) -> Result<ProofStep> {
    reciprocity_step(p, q)
}

pub fn run_suite(pmax: u64, qmax: u64, n_max: u64, budgets: Budgets) -> Result<ProofReport> {
    Verifier::new(budgets).run_suite(&SuiteOptions::new(pmax, qmax, n_max))
}

/// Report for a single pair: the congruence families and the law itself.
pub fn verify_pair(p: OddPrime, q: OddPrime) -> Result<ProofReport> {
    let mut steps = verify_congruences(p, q)?;
    steps.push(verify_reciprocity(p, q)?);
    let params = ReportParams {
        p: Some(p.get()),
        q: Some(q.get()),
        ..Default::default()
    };
    Ok(ProofReport::new(params, steps))
}
