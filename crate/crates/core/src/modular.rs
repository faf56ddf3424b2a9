//! Modular arithmetic on moduli below 2^63: validated odd primes, residues,
//! exponentiation, inversion and a deterministic primality test.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MODULUS_LIMIT: u64 = 1 << 63;

/// Bases for which Miller-Rabin is deterministic on every 64-bit input.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Deterministic primality test for all `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A validated odd prime below 2^63.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(n: u64) -> Result<Self> {
        if n >= MODULUS_LIMIT {
            return Err(Error::OutOfRange(n));
        }
        if n == 2 {
            return Err(Error::NotOdd);
        }
        if !is_prime_u64(n) {
            return Err(Error::NotPrime(n as i128));
        }
        Ok(OddPrime(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `(p - 1) / 2`, the exponent in Euler's criterion.
    #[inline]
    pub fn half_order(self) -> u64 {
        (self.0 - 1) / 2
    }

    pub fn residue(self, value: u64) -> Residue {
        Residue::new(value, self)
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn residue_i128(self, value: i128) -> Residue {
        Residue {
            value: value.rem_euclid(self.0 as i128) as u64,
            modulus: self,
        }
    }

    /// All residues `0, 1, ..., p - 1` in order.
    pub fn residues(self) -> impl Iterator<Item = Residue> {
        (0..self.0).map(move |value| Residue {
            value,
            modulus: self,
        })
    }

    /// The nonzero residues `1, ..., p - 1`.
    pub fn units(self) -> impl Iterator<Item = Residue> {
        self.residues().skip(1)
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self> {
        OddPrime::new(n)
    }
}

impl From<OddPrime> for u64 {
    fn from(p: OddPrime) -> u64 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Validates an arbitrary integer as an odd prime modulus.
pub fn make_odd_prime(n: i64) -> Result<OddPrime> {
    if n < 2 {
        return Err(Error::NotPrime(n as i128));
    }
    OddPrime::new(n as u64)
}

/// All odd primes `p <= limit`, ascending.
pub fn odd_primes_up_to(limit: u64) -> Vec<OddPrime> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(OddPrime(i as u64));
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// An element of `Z_p` carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: OddPrime,
}

impl Residue {
    pub fn new(value: u64, modulus: OddPrime) -> Self {
        Residue {
            value: value % modulus.0,
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> OddPrime {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_modulus(self, other: Residue) -> Result<u64> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.0,
                right: other.modulus.0,
            });
        }
        Ok(self.modulus.0)
    }

    pub fn try_add(self, other: Residue) -> Result<Residue> {
        let m = self.same_modulus(other)?;
        let s = (self.value as u128 + other.value as u128) % m as u128;
        Ok(Residue {
            value: s as u64,
            modulus: self.modulus,
        })
    }

    pub fn try_sub(self, other: Residue) -> Result<Residue> {
        self.try_add(-other)
    }

    pub fn try_mul(self, other: Residue) -> Result<Residue> {
        let m = self.same_modulus(other)?;
        Ok(Residue {
            value: mul_mod(self.value, other.value, m),
            modulus: self.modulus,
        })
    }
}

impl std::ops::Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus.0 - self.value
        };
        Residue { value, ..self }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.0)
    }
}

pub fn mod_pow(base: Residue, exponent: u64) -> Residue {
    Residue {
        value: pow_mod(base.value, exponent, base.modulus.0),
        modulus: base.modulus,
    }
}

/// Inverse by the extended Euclidean algorithm.
pub fn mod_inv(a: Residue) -> Result<Residue> {
    let m = a.modulus.0;
    if a.value == 0 {
        return Err(Error::ZeroInverse(m));
    }
    let (mut r0, mut r1) = (m as i128, a.value as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::InternalInconsistency(format!(
            "gcd({}, {m}) = {r0} for a validated prime modulus",
            a.value
        )));
    }
    Ok(a.modulus.residue_i128(s0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn pow_examples() {
        assert_eq!(mod_pow(p(5).residue(2), 0).value(), 1);
        assert_eq!(mod_pow(p(7).residue(0), 3).value(), 0);
        assert_eq!(mod_pow(p(5).residue(2), 4).value(), 1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inv(p(7).residue(1)).unwrap().value(), 1);
        assert_eq!(mod_inv(p(5).residue(2)).unwrap().value(), 3);
        assert_eq!(mod_inv(p(7).residue(3)).unwrap().value(), 5);
        assert_eq!(mod_inv(p(7).residue(0)), Err(Error::ZeroInverse(7)));
    }

    #[test]
    fn inverse_exhaustive_small_primes() {
        for q in odd_primes_up_to(200) {
            for a in q.units() {
                let b = mod_inv(a).unwrap();
                assert_eq!(a.try_mul(b).unwrap().value(), 1, "{a}");
            }
        }
    }

    #[test]
    fn make_odd_prime_examples() {
        assert_eq!(make_odd_prime(97).unwrap().get(), 97);
        assert_eq!(make_odd_prime(2), Err(Error::NotOdd));
        assert_eq!(make_odd_prime(9), Err(Error::NotPrime(9)));
        assert_eq!(make_odd_prime(1), Err(Error::NotPrime(1)));
        assert_eq!(make_odd_prime(-7), Err(Error::NotPrime(-7)));
        assert_eq!(OddPrime::new(1 << 63), Err(Error::OutOfRange(1 << 63)));
    }

    #[test]
    fn primality_matches_trial_division_below_a_million() {
        for n in 0..=1_000_000u64 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn primality_large_known_values() {
        // Largest prime below 2^63, and strong pseudoprimes to small bases.
        assert!(is_prime_u64(9_223_372_036_854_775_783));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        assert!(is_prime_u64(u64::MAX - 58));
    }

    #[test]
    fn sieve_agrees_with_miller_rabin() {
        let sieved: Vec<u64> = odd_primes_up_to(10_000)
            .into_iter()
            .map(OddPrime::get)
            .collect();
        let tested: Vec<u64> = (3..=10_000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieved, tested);
        assert!(odd_primes_up_to(2).is_empty());
    }

    #[test]
    fn mismatched_moduli_are_rejected() {
        let a = p(5).residue(2);
        let b = p(7).residue(2);
        assert_eq!(
            a.try_add(b),
            Err(Error::ModulusMismatch { left: 5, right: 7 })
        );
        assert!(a.try_mul(b).is_err());
        assert!(a.try_sub(b).is_err());
    }

    #[test]
    fn signed_reduction() {
        assert_eq!(p(7).residue_i128(-1).value(), 6);
        assert_eq!(p(7).residue_i128(-14).value(), 0);
        assert_eq!(p(7).residue(15).value(), 1);
    }
}
