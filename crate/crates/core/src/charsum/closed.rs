//! Closed forms: `S_n(t) = (t/p) p^((n-1)/2) (-1)^(((p-1)/2)((n-1)/2))` for
//! odd `n`, and the two values of `S_2`.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::legendre::{legendre_euler, minus_one_symbol, LegendreValue};
use crate::modular::{OddPrime, Residue};

fn same_prime(p: OddPrime, t: Residue) -> Result<()> {
    if t.modulus() != p {
        return Err(Error::ModulusMismatch {
            left: p.get(),
            right: t.modulus().get(),
        });
    }
    Ok(())
}

pub fn charsum_closed(p: OddPrime, n: u64, t: Residue) -> Result<BigInt> {
    same_prime(p, t)?;
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n));
    }
    let symbol = legendre_euler(t)?;
    if symbol == LegendreValue::Zero {
        return Ok(BigInt::zero());
    }
    let k = (n - 1) / 2;
    let magnitude: BigInt = Pow::pow(BigInt::from(p.get()), k);
    // ((-1/p) p)^k = p^k (-1)^(((p-1)/2) k)
    let sign = minus_one_symbol(p).pow(k) * symbol;
    Ok(if sign == LegendreValue::One {
        magnitude
    } else {
        -magnitude
    })
}

/// `S_2(0) = (-1/p)(p - 1)`, and `S_2(t) = -(-1/p)` for every `t != 0`.
pub fn charsum_s2(p: OddPrime, t: Residue) -> Result<i64> {
    same_prime(p, t)?;
    let minus_one = i64::from(minus_one_symbol(p));
    Ok(if t.is_zero() {
        minus_one * (p.get() as i64 - 1)
    } else {
        -minus_one
    })
}

/// `(-1/p) p`, the factor relating `S_{n+2}(1)` to `S_n(1)`.
pub fn recurrence_factor(p: OddPrime) -> BigInt {
    BigInt::from(i64::from(minus_one_symbol(p))) * BigInt::from(p.get())
}

/// `S_n(1)` for odd `n` by repeated multiplication with the recurrence factor.
pub fn s_n_one_by_recurrence(p: OddPrime, n: u64) -> Result<BigInt> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n));
    }
    let factor = recurrence_factor(p);
    let mut acc = BigInt::one();
    for _ in 0..(n - 1) / 2 {
        acc *= &factor;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn closed(q: u64, n: u64, t: u64) -> i64 {
        let q = p(q);
        charsum_closed(q, n, q.residue(t))
            .unwrap()
            .try_into()
            .unwrap()
    }

    #[test]
    fn closed_examples() {
        assert_eq!(closed(3, 3, 1), -3);
        assert_eq!(closed(5, 3, 1), 5);
        assert_eq!(closed(7, 5, 0), 0);
        assert_eq!(closed(3, 1, 2), -1);
        assert_eq!(closed(3, 5, 1), 9);
    }

    #[test]
    fn closed_rejects_even_orders() {
        let q = p(7);
        assert_eq!(charsum_closed(q, 4, q.residue(1)), Err(Error::EvenOrder(4)));
        assert_eq!(charsum_closed(q, 0, q.residue(1)), Err(Error::InvalidOrder));
    }

    #[test]
    fn s2_examples() {
        let s2 = |q: u64, t: u64| charsum_s2(p(q), p(q).residue(t)).unwrap();
        assert_eq!(s2(3, 0), -2);
        assert_eq!(s2(3, 1), 1);
        assert_eq!(s2(5, 2), -1);
        assert_eq!(s2(5, 0), 4);
    }

    #[test]
    fn s2_values_cancel() {
        for q in crate::modular::odd_primes_up_to(500) {
            let total: i64 = q.residues().map(|t| charsum_s2(q, t).unwrap()).sum();
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn recurrence_product_matches_closed_form() {
        for q in crate::modular::odd_primes_up_to(100) {
            for n in (1..=15).step_by(2) {
                assert_eq!(
                    s_n_one_by_recurrence(q, n).unwrap(),
                    charsum_closed(q, n, q.residue(1)).unwrap()
                );
            }
        }
    }
}
