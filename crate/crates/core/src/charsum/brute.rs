//! Direct enumeration of `S_n(t)` over the tuples `(x_1, ..., x_n)` with
//! `x_1 + ... + x_n = t`.
//!
//! This is the oracle for the convolution and closed-form routes, so it
//! shares nothing with them: the quadratic characters come from a table of
//! squares, and every tuple's full product is reduced and looked up.

use num_bigint::BigInt;

use crate::config::{checked_tuple_count, describe_power, DEFAULT_ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::legendre::legendre_brute;
use crate::modular::{mul_mod, OddPrime, Residue};

const MUL_TABLE_LIMIT: usize = 512;
const TABLE_LIMIT: u64 = u32::MAX as u64;

/// Quadratic characters and multiplication for a small prime field.
pub(crate) struct FieldTables {
    p: usize,
    chi: Vec<i8>,
    mul: Option<Vec<u16>>,
}

impl FieldTables {
    pub(crate) fn new(p: OddPrime) -> Self {
        let n = p.get() as usize;
        let mut is_square = vec![false; n];
        for x in 1..n as u64 {
            is_square[mul_mod(x, x, p.get()) as usize] = true;
        }
        let chi = (0..n)
            .map(|a| match (a, is_square[a]) {
                (0, _) => 0,
                (_, true) => 1,
                (_, false) => -1,
            })
            .collect();
        let mul = (n <= MUL_TABLE_LIMIT).then(|| {
            let mut table = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] = (a * b % n) as u16;
                }
            }
            table
        });
        FieldTables { p: n, chi, mul }
    }

    #[inline]
    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mul {
            Some(table) => table[a * self.p + b] as usize,
            // p < 2^32, so the product fits in a u64.
            None => a * b % self.p,
        }
    }

    #[inline]
    pub(crate) fn chi(&self, a: usize) -> i8 {
        self.chi[a]
    }
}

pub fn charsum_brute(p: OddPrime, n: u64, t: Residue) -> Result<BigInt> {
    charsum_brute_with_budget(p, n, t, DEFAULT_ENUMERATION_BUDGET)
}

/// Enumerates `(x_1, ..., x_{n-1})` and sets `x_n = t - sum`. Requires
/// `p^(n-1) <= budget`.
pub fn charsum_brute_with_budget(p: OddPrime, n: u64, t: Residue, budget: u64) -> Result<BigInt> {
    check(p, n, budget)?;
    if t.modulus() != p {
        return Err(Error::ModulusMismatch {
            left: p.get(),
            right: t.modulus().get(),
        });
    }
    if n == 1 {
        return Ok(BigInt::from(legendre_brute(t).value()));
    }
    let tables = FieldTables::new(p);
    Ok(BigInt::from(enumerate(&tables, n, t.value() as usize)))
}

/// The brute-force value at every `t`, with the budget applied per entry.
pub fn charsum_brute_vector(p: OddPrime, n: u64, budget: u64) -> Result<Vec<BigInt>> {
    check(p, n, budget)?;
    if n == 1 {
        return Ok(p
            .residues()
            .map(|t| BigInt::from(legendre_brute(t).value()))
            .collect());
    }
    let tables = FieldTables::new(p);
    Ok((0..p.get() as usize)
        .map(|t| BigInt::from(enumerate(&tables, n, t)))
        .collect())
}

fn check(p: OddPrime, n: u64, budget: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    if checked_tuple_count(p.get(), n - 1, budget).is_none() {
        return Err(Error::EnumerationBudgetExceeded {
            required: describe_power(p.get(), n - 1),
            budget,
        });
    }
    // The tables hold p entries; n >= 2 keeps p within the budget.
    if n > 1 && p.get() > TABLE_LIMIT {
        return Err(Error::EnumerationBudgetExceeded {
            required: describe_power(p.get(), n - 1),
            budget,
        });
    }
    Ok(())
}

fn enumerate(tables: &FieldTables, n: u64, t: usize) -> i64 {
    walk(tables, n - 1, 0, 1, t)
}

// A zero coordinate makes the whole product zero, so only nonzero free
// coordinates are visited.
fn walk(tables: &FieldTables, free: u64, sum: usize, prod: usize, t: usize) -> i64 {
    let p = tables.p;
    let last = |sum: usize| if t >= sum { t - sum } else { t + p - sum };
    match free {
        0 => tables.chi(tables.mul(prod, last(sum))) as i64,
        1 => {
            let mut acc = 0i64;
            for x in 1..p {
                let s = if sum + x >= p { sum + x - p } else { sum + x };
                let full = tables.mul(tables.mul(prod, x), last(s));
                acc += tables.chi(full) as i64;
            }
            acc
        }
        _ => {
            let mut acc = 0i64;
            for x in 1..p {
                let s = if sum + x >= p { sum + x - p } else { sum + x };
                acc += walk(tables, free - 1, s, tables.mul(prod, x), t);
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn brute(q: u64, n: u64, t: u64) -> i64 {
        let q = p(q);
        charsum_brute(q, n, q.residue(t))
            .unwrap()
            .try_into()
            .unwrap()
    }

    /// Enumeration of every n-tuple with no pruning, for tiny cases.
    fn naive(q: u64, n: u32, t: u64) -> i64 {
        let chi = |a: u64| -> i64 {
            if a.is_multiple_of(q) {
                0
            } else if (1..q).any(|x| x * x % q == a % q) {
                1
            } else {
                -1
            }
        };
        let mut acc = 0;
        for code in 0..q.pow(n) {
            let mut c = code;
            let (mut sum, mut prod) = (0, 1);
            for _ in 0..n {
                sum += c % q;
                prod = prod * (c % q) % q;
                c /= q;
            }
            if sum % q == t {
                acc += chi(prod);
            }
        }
        acc
    }

    #[test]
    fn examples() {
        assert_eq!(brute(3, 2, 0), -2);
        assert_eq!(brute(3, 2, 1), 1);
        assert_eq!(brute(5, 1, 2), -1);
    }

    #[test]
    fn agrees_with_unpruned_enumeration() {
        for (q, n) in [(3, 1), (3, 4), (5, 3), (7, 3), (11, 2), (5, 5)] {
            for t in 0..q {
                assert_eq!(brute(q, n as u64, t), naive(q, n, t), "p={q} n={n} t={t}");
            }
        }
    }

    #[test]
    fn large_prime_without_mul_table() {
        // p above the table limit multiplies directly.
        let q = p(1009);
        let v = charsum_brute_vector(q, 2, DEFAULT_ENUMERATION_BUDGET).unwrap();
        // p = 1 mod 4: S_2(0) = p - 1 and S_2(t) = -1 elsewhere.
        assert_eq!(v[0], BigInt::from(1008));
        assert!(v[1..].iter().all(|x| *x == BigInt::from(-1)));
    }

    #[test]
    fn budget_and_validation() {
        let q = p(11);
        assert_eq!(
            charsum_brute_with_budget(q, 4, q.residue(1), 1000),
            Err(Error::EnumerationBudgetExceeded {
                required: "11^3".into(),
                budget: 1000
            })
        );
        assert!(charsum_brute_with_budget(q, 3, q.residue(1), 121).is_ok());
        assert_eq!(charsum_brute(q, 0, q.residue(1)), Err(Error::InvalidOrder));
        assert!(matches!(
            charsum_brute(q, 2, p(13).residue(1)),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn single_coordinate_needs_no_tables() {
        let q = p(1_000_003);
        assert_eq!(charsum_brute(q, 1, q.residue(4)), Ok(BigInt::from(1)));
        let big = p(4_294_967_311);
        assert!(matches!(
            charsum_brute_with_budget(big, 2, big.residue(1), u64::MAX),
            Err(Error::EnumerationBudgetExceeded { .. })
        ));
    }
}
