//! Three independent evaluators of the Legendre symbol `(a/p)`.
//!
//! * [`legendre_brute`] searches for a square root directly, `O(p)`.
//! * [`legendre_euler`] uses Euler's criterion `a^((p-1)/2) mod p`.
//! * [`legendre_reciprocity`] factors `a` and applies the reciprocity law
//!   with its first supplement. The rule for `(2/p)` used there is the
//!   second supplement, which is plumbing rather than part of the proof; it
//!   is only trusted because the evaluators are checked against each other.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_FACTORING_BUDGET;
use crate::error::{Error, Result};
use crate::modular::{mod_pow, mul_mod, OddPrime, Residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum LegendreValue {
    MinusOne,
    Zero,
    One,
}

impl LegendreValue {
    pub fn value(self) -> i8 {
        match self {
            LegendreValue::MinusOne => -1,
            LegendreValue::Zero => 0,
            LegendreValue::One => 1,
        }
    }

    /// `(-1)^e` as a symbol value.
    pub fn sign(odd: bool) -> Self {
        if odd {
            LegendreValue::MinusOne
        } else {
            LegendreValue::One
        }
    }

    pub fn pow(self, exp: u64) -> Self {
        match (self, exp) {
            (_, 0) => LegendreValue::One,
            (LegendreValue::MinusOne, e) => LegendreValue::sign(e % 2 == 1),
            (v, _) => v,
        }
    }

    /// Canonical representative of the value in `[0, m)`.
    pub fn to_residue_mod(self, m: u64) -> u64 {
        match self {
            LegendreValue::MinusOne => m - 1,
            LegendreValue::Zero => 0,
            LegendreValue::One => 1 % m,
        }
    }
}

impl Mul for LegendreValue {
    type Output = LegendreValue;
    fn mul(self, rhs: LegendreValue) -> LegendreValue {
        match self.value() * rhs.value() {
            0 => LegendreValue::Zero,
            1 => LegendreValue::One,
            _ => LegendreValue::MinusOne,
        }
    }
}

impl From<LegendreValue> for i8 {
    fn from(v: LegendreValue) -> i8 {
        v.value()
    }
}

impl From<LegendreValue> for i64 {
    fn from(v: LegendreValue) -> i64 {
        v.value() as i64
    }
}

impl TryFrom<i8> for LegendreValue {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(LegendreValue::MinusOne),
            0 => Ok(LegendreValue::Zero),
            1 => Ok(LegendreValue::One),
            other => Err(format!("{other} is not a Legendre symbol value")),
        }
    }
}

impl fmt::Display for LegendreValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value().fmt(f)
    }
}

/// Definition-based evaluator: is there an `x` with `x^2 = a`?
pub fn legendre_brute(a: Residue) -> LegendreValue {
    if a.is_zero() {
        return LegendreValue::Zero;
    }
    let p = a.modulus().get();
    // x and p - x have the same square, so half the range suffices.
    let found = (1..=a.modulus().half_order()).any(|x| mul_mod(x, x, p) == a.value());
    LegendreValue::sign(!found)
}

pub fn legendre_euler(a: Residue) -> Result<LegendreValue> {
    let p = a.modulus().get();
    match mod_pow(a, a.modulus().half_order()).value() {
        0 => Ok(LegendreValue::Zero),
        1 => Ok(LegendreValue::One),
        v if v == p - 1 => Ok(LegendreValue::MinusOne),
        v => Err(Error::InternalInconsistency(format!(
            "{}^(({p}-1)/2) = {v} mod {p} is not 0 or +-1",
            a.value()
        ))),
    }
}

/// `(-1/p) = (-1)^((p-1)/2)`.
pub fn minus_one_symbol(p: OddPrime) -> LegendreValue {
    LegendreValue::sign(p.half_order() % 2 == 1)
}

/// `(2/p) = +1` iff `p = +-1 (mod 8)`.
pub fn two_symbol(p: OddPrime) -> LegendreValue {
    LegendreValue::sign(!matches!(p.get() % 8, 1 | 7))
}

/// `(-1)^(((p-1)/2)((q-1)/2))`.
pub fn reciprocity_sign(p: OddPrime, q: OddPrime) -> LegendreValue {
    LegendreValue::sign(p.half_order() % 2 == 1 && q.half_order() % 2 == 1)
}

pub fn legendre_reciprocity(a: Residue) -> Result<LegendreValue> {
    legendre_reciprocity_with_budget(a, DEFAULT_FACTORING_BUDGET)
}

/// Reciprocity-law evaluator spending at most `budget` trial divisions.
pub fn legendre_reciprocity_with_budget(a: Residue, budget: u64) -> Result<LegendreValue> {
    let mut state = ReciprocityEval {
        budget,
        spent: 0,
        depth_limit: depth_limit(a.modulus().get()),
    };
    state.symbol(a.value(), a.modulus(), 0)
}

// Moduli along any recursion chain satisfy m[k+1] + m[k] <= m[k-1], so the
// chain length is at most logarithmic (base golden ratio) in p.
fn depth_limit(p: u64) -> u32 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    ((p as f64).ln() / phi.ln()).ceil() as u32 + 2
}

struct ReciprocityEval {
    budget: u64,
    spent: u64,
    depth_limit: u32,
}

impl ReciprocityEval {
    fn divides(&mut self, n: u64, d: u64) -> Result<bool> {
        self.spent += 1;
        if self.spent > self.budget {
            return Err(Error::FactoringBudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(n.is_multiple_of(d))
    }

    /// Prime factorization of `n >= 1` as (prime, exponent) pairs.
    fn factor(&mut self, mut n: u64) -> Result<Vec<(u64, u32)>> {
        let mut out = Vec::new();
        let twos = n.trailing_zeros();
        if twos > 0 {
            out.push((2, twos));
            n >>= twos;
        }
        let mut d = 3u64;
        while d.saturating_mul(d) <= n {
            if self.divides(n, d)? {
                let mut e = 0;
                while n.is_multiple_of(d) {
                    n /= d;
                    e += 1;
                }
                out.push((d, e));
            }
            d += 2;
        }
        if n > 1 {
            out.push((n, 1));
        }
        Ok(out)
    }

    fn symbol(&mut self, a: u64, p: OddPrime, depth: u32) -> Result<LegendreValue> {
        if depth > self.depth_limit {
            return Err(Error::InternalInconsistency(format!(
                "reciprocity recursion exceeded depth {}",
                self.depth_limit
            )));
        }
        let a = a % p.get();
        if a == 0 {
            return Ok(LegendreValue::Zero);
        }
        let mut acc = LegendreValue::One;
        for (r, e) in self.factor(a)? {
            if e % 2 == 0 {
                continue;
            }
            let factor = if r == 2 {
                two_symbol(p)
            } else {
                // r < p, so r is an odd prime distinct from p.
                let r = OddPrime::new(r)?;
                reciprocity_sign(r, p) * self.symbol(p.get() % r.get(), r, depth + 1)?
            };
            acc = acc * factor;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::odd_primes_up_to;
    use LegendreValue::*;

    fn r(a: u64, p: u64) -> Residue {
        OddPrime::new(p).unwrap().residue(a)
    }

    #[test]
    fn brute_examples() {
        assert_eq!(legendre_brute(r(0, 7)), Zero);
        assert_eq!(legendre_brute(r(1, 7)), One);
        assert_eq!(legendre_brute(r(2, 5)), MinusOne);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(legendre_euler(r(1, 13)).unwrap(), One);
        assert_eq!(legendre_euler(r(2, 5)).unwrap(), MinusOne);
        assert_eq!(legendre_euler(r(12, 13)).unwrap(), One);
    }

    #[test]
    fn reciprocity_examples() {
        assert_eq!(legendre_reciprocity(r(1, 101)).unwrap(), One);
        assert_eq!(legendre_reciprocity(r(5, 3)).unwrap(), MinusOne);
        assert_eq!(legendre_reciprocity(r(2, 7)).unwrap(), One);
    }

    #[test]
    fn evaluators_agree_small() {
        for p in odd_primes_up_to(300) {
            for a in p.residues() {
                let b = legendre_brute(a);
                assert_eq!(legendre_euler(a).unwrap(), b, "{a}");
                assert_eq!(legendre_reciprocity(a).unwrap(), b, "{a}");
            }
        }
    }

    #[test]
    fn multiplicativity_exhaustive() {
        for p in odd_primes_up_to(200) {
            let chi: Vec<LegendreValue> = p.residues().map(legendre_brute).collect();
            for a in p.residues() {
                for b in p.residues() {
                    let ab = a.try_mul(b).unwrap();
                    assert_eq!(
                        chi[ab.value() as usize],
                        chi[a.value() as usize] * chi[b.value() as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn residues_and_nonresidues_split_evenly() {
        for p in odd_primes_up_to(1000) {
            let mut plus = 0;
            let mut minus = 0;
            for a in p.units() {
                match legendre_euler(a).unwrap() {
                    One => plus += 1,
                    MinusOne => minus += 1,
                    Zero => panic!("unit {a} gave 0"),
                }
            }
            assert_eq!(plus, p.half_order());
            assert_eq!(minus, p.half_order());
        }
    }

    #[test]
    fn symbols_sum_to_zero() {
        for p in odd_primes_up_to(1000) {
            let total: i64 = p
                .residues()
                .map(|a| i64::from(legendre_euler(a).unwrap()))
                .sum();
            assert_eq!(total, 0, "p = {p}");
        }
    }

    #[test]
    fn supplements_match_euler() {
        for p in odd_primes_up_to(2000) {
            assert_eq!(
                minus_one_symbol(p),
                legendre_euler(p.residue(p.get() - 1)).unwrap()
            );
            assert_eq!(two_symbol(p), legendre_euler(p.residue(2)).unwrap());
        }
    }

    #[test]
    fn factoring_budget_is_enforced() {
        // 999_983 is prime: trial division runs up to its square root.
        let p = OddPrime::new(1_000_003).unwrap();
        let a = p.residue(999_983);
        assert_eq!(
            legendre_reciprocity_with_budget(a, 10),
            Err(Error::FactoringBudgetExceeded { budget: 10 })
        );
        assert_eq!(legendre_reciprocity(a).unwrap(), legendre_euler(a).unwrap());
    }

    #[test]
    fn large_modulus() {
        let p = OddPrime::new(9_223_372_036_854_775_783).unwrap();
        for a in [2u64, 3, 5, 12_345, 1 << 40, 3u64.pow(30)] {
            let a = p.residue(a);
            assert_eq!(legendre_reciprocity(a).unwrap(), legendre_euler(a).unwrap());
        }
    }

    #[test]
    fn value_algebra() {
        assert_eq!(MinusOne.pow(3), MinusOne);
        assert_eq!(MinusOne.pow(4), One);
        assert_eq!(Zero.pow(0), One);
        assert_eq!(MinusOne.to_residue_mod(5), 4);
        assert_eq!(One.to_residue_mod(5), 1);
    }
}
