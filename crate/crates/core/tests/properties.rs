use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use qrlab::charsum::{
    charsum_brute, charsum_closed, charsum_ladder, charsum_s2, charsum_vector, convolve_exact_at,
    orbit_decompose, Mode, ReductionModulus,
};
use qrlab::legendre::{legendre_euler, legendre_reciprocity};
use qrlab::modular::{is_prime_u64, mod_inv, mod_pow, odd_primes_up_to};
use qrlab::proofcheck::{
    run_suite, ProofReport, ProofStep, ReportParams, StepId, StepParams, StepValue, Summary,
};
use qrlab::{Budgets, LegendreValue, OddPrime};

fn small_prime(limit: u64) -> impl Strategy<Value = OddPrime> {
    prop::sample::select(odd_primes_up_to(limit))
}

/// An odd prime at or above a random starting point below 2^63.
fn large_prime() -> impl Strategy<Value = OddPrime> {
    (3u64..1 << 62).prop_map(|start| {
        let p = (start | 1..)
            .step_by(2)
            .find(|&n| is_prime_u64(n))
            .expect("a prime follows");
        OddPrime::new(p).expect("odd prime")
    })
}

fn chi(a: u64, p: u64) -> i64 {
    if a.is_multiple_of(p) {
        0
    } else if (1..p).any(|x| x * x % p == a % p) {
        1
    } else {
        -1
    }
}

fn sign(v: LegendreValue) -> i64 {
    i64::from(v.value())
}

proptest! {
    #[test]
    fn mod_pow_adds_exponents(p in large_prime(), a in any::<u64>(), e1 in 0u64..1 << 40, e2 in 0u64..1 << 40) {
        let a = p.residue(a);
        let lhs = mod_pow(a, e1).try_mul(mod_pow(a, e2)).unwrap();
        prop_assert_eq!(lhs, mod_pow(a, e1 + e2));
        let oracle = BigUint::from(a.value()).modpow(&BigUint::from(e1 + e2), &BigUint::from(p.get()));
        prop_assert_eq!(BigUint::from(lhs.value()), oracle);
    }

    #[test]
    fn inverse_multiplies_to_one(p in large_prime(), a in 1u64..u64::MAX) {
        let a = p.residue(a);
        prop_assume!(!a.is_zero());
        let inv = mod_inv(a).unwrap();
        prop_assert_eq!(a.try_mul(inv).unwrap().value(), 1);
    }

    #[test]
    fn symbol_evaluators_agree_for_large_primes(p in large_prime(), a in 0u64..1 << 20) {
        let a = p.residue(a);
        let euler = legendre_euler(a).unwrap();
        prop_assert_eq!(legendre_reciprocity(a).unwrap(), euler);
        let oracle = BigUint::from(a.value()).modpow(&BigUint::from(p.half_order()), &BigUint::from(p.get()));
        let expected = match euler {
            LegendreValue::Zero => BigUint::from(0u8),
            LegendreValue::One => BigUint::from(1u8),
            LegendreValue::MinusOne => BigUint::from(p.get() - 1),
        };
        prop_assert_eq!(oracle, expected);
    }

    #[test]
    fn symbol_is_multiplicative(p in large_prime(), a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (p.residue(a), p.residue(b));
        let product = legendre_euler(a.try_mul(b).unwrap()).unwrap();
        prop_assert_eq!(product, legendre_euler(a).unwrap() * legendre_euler(b).unwrap());
    }

    #[test]
    fn modular_pipeline_is_exact_pipeline_reduced(p in small_prime(50), n in 1u64..=9, m in 2u64..1 << 31) {
        let m = ReductionModulus::new(m).unwrap();
        let exact = charsum_vector(p, n, Mode::Exact).unwrap();
        let modular = charsum_vector(p, n, Mode::Modular(m)).unwrap();
        let reduced: Vec<u64> = exact.exact_values().unwrap().iter().map(|v| m.reduce(v)).collect();
        prop_assert_eq!(modular.modular_values().unwrap(), &reduced[..]);
        prop_assert_eq!(exact.reduce(m).unwrap(), modular);
    }

    #[test]
    fn brute_force_matches_pipeline(p in small_prime(13), n in 1u64..=5, t in any::<u64>()) {
        prop_assume!(p.get().pow(n as u32 - 1) <= 100_000);
        let t = p.residue(t);
        let brute = charsum_brute(p, n, t).unwrap();
        let conv = charsum_vector(p, n, Mode::Exact).unwrap();
        prop_assert_eq!(&brute, conv.exact_at(t.value()).unwrap());
        if n % 2 == 1 {
            prop_assert_eq!(&brute, &charsum_closed(p, n, t).unwrap());
        } else if n == 2 {
            prop_assert_eq!(brute, BigInt::from(charsum_s2(p, t).unwrap()));
        }
    }

    #[test]
    fn orbit_total_is_brute_force(p in small_prime(13), q in small_prime(7), t in any::<u64>()) {
        prop_assume!(p != q && p.get().pow(q.get() as u32 - 1) <= 100_000);
        let t = p.residue(t);
        let stats = orbit_decompose(p, q, t).unwrap();
        prop_assert_eq!(&stats.total, &charsum_brute(p, q.get(), t).unwrap());
        prop_assert!(stats.congruence_holds());
        prop_assert_eq!(stats.tuple_count(), p.get().pow(q.get() as u32 - 1));
    }

    #[test]
    fn report_json_round_trips(steps in prop::collection::vec(arb_step(), 0..20)) {
        let report = ProofReport::new(ReportParams { pmax: Some(7), ..Default::default() }, steps);
        let json = report.to_json();
        let back = ProofReport::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
        prop_assert_eq!(&back, &report);
        let s = Summary::tally(&report.steps);
        prop_assert_eq!(s.passed + s.failed + s.skipped, report.steps.len() as u64);
    }
}

fn arb_value() -> impl Strategy<Value = StepValue> {
    prop_oneof![
        any::<i64>().prop_map(StepValue::Int),
        (any::<i64>(), 0u32..200).prop_map(|(v, shift)| StepValue::Big(BigInt::from(v) << shift)),
    ]
}

fn arb_step() -> impl Strategy<Value = ProofStep> {
    let ids = prop::sample::select(vec![
        StepId::S2Values,
        StepId::SnZero,
        StepId::Scaling,
        StepId::Recurrence,
        StepId::ClosedForm,
        StepId::EulerCongruence,
        StepId::OrbitCongruence,
        StepId::ReciprocityLaw,
    ]);
    (
        ids,
        3u64..100,
        arb_value(),
        arb_value(),
        0u64..50,
        0u64..50,
        0u8..3,
    )
        .prop_map(|(id, p, lhs, rhs, a, b, kind)| {
            let params = StepParams::prime(p).with_n(a | 1);
            match kind {
                0 => ProofStep::equality(id, params, lhs, rhs),
                1 => ProofStep::congruence(id, params.with_variant("closed"), a, b, 53),
                _ => ProofStep::skipped(id, params, "over budget".into()),
            }
        })
}

#[test]
fn scaling_identity_holds_entrywise() {
    for p in odd_primes_up_to(50) {
        let pv = p.get();
        let ladder = charsum_ladder(p, 7, Mode::Exact, 7).unwrap();
        for n in [1, 2, 3, 5, 7] {
            let s = ladder[n as usize - 1].exact_values().unwrap();
            for a in 1..pv {
                let a_inv = mod_inv(p.residue(a)).unwrap().value();
                let factor = if n == 2 { 1 } else { chi(a, pv) };
                for t in 0..pv {
                    let scaled = &s[(t * a_inv % pv) as usize] * factor;
                    assert_eq!(s[t as usize], scaled, "p={pv} n={n} a={a} t={t}");
                }
            }
        }
    }
}

#[test]
fn recurrence_holds_exactly() {
    for p in odd_primes_up_to(200) {
        let ladder = charsum_ladder(p, 13, Mode::Exact, 13).unwrap();
        let minus_one = if p.get() % 4 == 1 { 1 } else { -1 };
        let factor = BigInt::from(minus_one * p.get() as i64);
        for n in (1..=11).step_by(2) {
            let step = convolve_exact_at(&ladder[n - 1], &ladder[1], 1).unwrap();
            assert_eq!(
                step,
                ladder[n - 1].exact_at(1).unwrap() * &factor,
                "p={p} n={n}"
            );
        }
    }
}

#[test]
fn symbol_sums_vanish_and_split_evenly() {
    for p in odd_primes_up_to(1000) {
        let values: Vec<i64> = p
            .residues()
            .map(|a| sign(legendre_euler(a).unwrap()))
            .collect();
        assert_eq!(values.iter().sum::<i64>(), 0, "p={p}");
        assert_eq!(
            values.iter().filter(|&&v| v == 1).count() as u64,
            p.half_order()
        );
    }
}

#[test]
fn suite_is_sound_and_deterministic() {
    let report = run_suite(200, 50, 9, Budgets::default()).unwrap();
    assert_eq!(report.summary.failed, 0);
    assert_eq!(report.summary.skipped, 0);
    assert!(report.all_passed());
    assert_eq!(report.summary, Summary::tally(&report.steps));
    let again = run_suite(200, 50, 9, Budgets::default()).unwrap();
    assert_eq!(report.to_json(), again.to_json());
}
