//! Cyclic-shift orbits of the q-tuples summing to `t` in `Z_p`.
//!
//! Rotating a tuple preserves both its coordinate sum and its product, so
//! the tuples counted by `S_q(t)` split into rotation orbits. Each orbit is
//! identified by its lexicographically least rotation. For prime `q` an
//! orbit has size 1 (constant tuple) or `q`, and the size-`q` orbits add a
//! multiple of `q` to the sum; this module enumerates and checks that.

use num_bigint::BigInt;

use super::brute::FieldTables;
use crate::config::{checked_tuple_count, describe_power, DEFAULT_ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::legendre::{legendre_euler, LegendreValue};
use crate::modular::{mod_inv, OddPrime, Residue};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitStats {
    pub modulus: OddPrime,
    pub tuple_len: OddPrime,
    pub target: Residue,
    /// Orbits of size 1, i.e. constant tuples.
    pub n_fixed: u64,
    /// Orbits of size `q`.
    pub n_free: u64,
    /// The common coordinate of the constant tuple, when there is one.
    pub fixed_value: Option<Residue>,
    pub fixed_contribution: i64,
    pub free_contribution: BigInt,
    /// `S_q(t)`, summed over every tuple.
    pub total: BigInt,
}

impl OrbitStats {
    /// Number of q-tuples with coordinate sum `t`: `n_fixed + q * n_free`.
    pub fn tuple_count(&self) -> u64 {
        self.n_fixed + self.tuple_len.get() * self.n_free
    }

    /// `total = fixed_contribution (mod q)`.
    pub fn congruence_holds(&self) -> bool {
        let q = BigInt::from(self.tuple_len.get());
        let diff = &self.total - BigInt::from(self.fixed_contribution);
        (diff % q) == BigInt::from(0)
    }
}

pub fn orbit_decompose(p: OddPrime, q: OddPrime, t: Residue) -> Result<OrbitStats> {
    orbit_decompose_with_budget(p, q, t, DEFAULT_ENUMERATION_BUDGET)
}

pub fn orbit_decompose_with_budget(
    p: OddPrime,
    q: OddPrime,
    t: Residue,
    budget: u64,
) -> Result<OrbitStats> {
    if p == q {
        return Err(Error::SamePrime(p.get()));
    }
    if t.modulus() != p {
        return Err(Error::ModulusMismatch {
            left: p.get(),
            right: t.modulus().get(),
        });
    }
    let len = q.get() as usize;
    if checked_tuple_count(p.get(), q.get() - 1, budget).is_none() {
        return Err(Error::EnumerationBudgetExceeded {
            required: describe_power(p.get(), q.get() - 1),
            budget,
        });
    }

    let mut walker = OrbitWalker {
        tables: FieldTables::new(p),
        p: p.get() as usize,
        len,
        t: t.value() as usize,
        buf: vec![0; 2 * len],
        tuples_by_size: vec![0; len + 1],
        orbits_by_size: vec![0; len + 1],
        fixed_value: None,
        fixed_contribution: 0,
        free_contribution: 0,
        total: 0,
    };
    walker.walk(0, 0, 1);

    for size in 1..=len {
        let (tuples, orbits) = (walker.tuples_by_size[size], walker.orbits_by_size[size]);
        if tuples != size as u64 * orbits {
            return Err(Error::InternalInconsistency(format!(
                "{tuples} tuples of period {size} do not form {orbits} orbits"
            )));
        }
        if tuples > 0 && size != 1 && size != len {
            return Err(Error::InternalInconsistency(format!(
                "orbit of size {size} for prime length {len}"
            )));
        }
    }

    Ok(OrbitStats {
        modulus: p,
        tuple_len: q,
        target: t,
        n_fixed: walker.orbits_by_size[1],
        n_free: walker.orbits_by_size[len],
        fixed_value: walker.fixed_value.map(|x| p.residue(x as u64)),
        fixed_contribution: walker.fixed_contribution,
        free_contribution: BigInt::from(walker.free_contribution),
        total: BigInt::from(walker.total),
    })
}

struct OrbitWalker {
    tables: FieldTables,
    p: usize,
    len: usize,
    t: usize,
    /// The current tuple written twice, so `buf[d..d + len]` is its rotation by `d`.
    buf: Vec<u32>,
    tuples_by_size: Vec<u64>,
    orbits_by_size: Vec<u64>,
    fixed_value: Option<usize>,
    fixed_contribution: i64,
    free_contribution: i64,
    total: i64,
}

impl OrbitWalker {
    fn set(&mut self, i: usize, x: usize) {
        self.buf[i] = x as u32;
        self.buf[i + self.len] = x as u32;
    }

    fn walk(&mut self, i: usize, sum: usize, prod: usize) {
        if i + 1 == self.len {
            let last = if self.t >= sum {
                self.t - sum
            } else {
                self.t + self.p - sum
            };
            self.set(i, last);
            let chi = self.tables.chi(self.tables.mul(prod, last)) as i64;
            self.visit(chi);
            return;
        }
        for x in 0..self.p {
            self.set(i, x);
            let s = if sum + x >= self.p {
                sum + x - self.p
            } else {
                sum + x
            };
            self.walk(i + 1, s, self.tables.mul(prod, x));
        }
    }

    fn visit(&mut self, chi: i64) {
        let len = self.len;
        let first = self.buf[0];
        let (size, canonical) = if self.buf[..len].iter().all(|&x| x == first) {
            (1, true)
        } else {
            let mut period = len;
            let mut canonical = true;
            for d in 1..len {
                // Most rotations already differ in their first coordinate.
                let order = match self.buf[d].cmp(&first) {
                    std::cmp::Ordering::Equal => self.buf[d..d + len].cmp(&self.buf[..len]),
                    other => other,
                };
                match order {
                    std::cmp::Ordering::Less => canonical = false,
                    std::cmp::Ordering::Equal if period == len => period = d,
                    _ => {}
                }
            }
            (period, canonical)
        };
        self.tuples_by_size[size] += 1;
        if canonical {
            self.orbits_by_size[size] += 1;
        }
        if size == 1 {
            self.fixed_value = Some(first as usize);
            self.fixed_contribution += chi;
        } else {
            self.free_contribution += chi;
        }
        self.total += chi;
    }
}

/// `S_q(1) mod q` from the constant tuple alone: `(q^{-1}/p)^q`, which
/// equals `(q/p)` because `q` is odd.
pub fn sq1_mod_q_orbit(p: OddPrime, q: OddPrime) -> Result<LegendreValue> {
    if p == q {
        return Err(Error::SamePrime(p.get()));
    }
    let inverse = mod_inv(p.residue(q.get()))?;
    Ok(legendre_euler(inverse)?.pow(q.get()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::charsum_brute;
    use LegendreValue::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let stats = orbit_decompose(p(3), p(5), p(3).residue(1)).unwrap();
        assert_eq!(stats.n_fixed, 1);
        assert_eq!(stats.fixed_value, Some(p(3).residue(2)));
        assert_eq!(stats.tuple_count(), 81);
        assert_eq!(stats.n_fixed + 5 * stats.n_free, 81);
        assert!(stats.congruence_holds());

        let stats = orbit_decompose(p(5), p(3), p(5).residue(0)).unwrap();
        assert_eq!(stats.fixed_value, Some(p(5).residue(0)));
        assert_eq!(stats.fixed_contribution, 0);
    }

    #[test]
    fn totals_match_brute_force() {
        for (a, b) in [(3, 5), (5, 3), (7, 3), (3, 7), (11, 3), (5, 7)] {
            let (pp, qq) = (p(a), p(b));
            for t in pp.residues() {
                let stats = orbit_decompose(pp, qq, t).unwrap();
                assert_eq!(stats.total, charsum_brute(pp, b, t).unwrap());
                assert_eq!(stats.tuple_count(), a.pow(b as u32 - 1));
                assert!(stats.congruence_holds());
                assert_eq!(
                    stats.free_contribution.clone() % BigInt::from(b),
                    BigInt::from(0)
                );
            }
        }
    }

    #[test]
    fn orbit_errors() {
        let q = p(7);
        assert_eq!(
            orbit_decompose(q, q, q.residue(1)),
            Err(Error::SamePrime(7))
        );
        assert!(matches!(
            orbit_decompose_with_budget(p(11), p(7), p(11).residue(1), 1000),
            Err(Error::EnumerationBudgetExceeded { .. })
        ));
    }

    #[test]
    fn shortcut_examples() {
        assert_eq!(sq1_mod_q_orbit(p(3), p(5)).unwrap(), MinusOne);
        assert_eq!(sq1_mod_q_orbit(p(5), p(3)).unwrap(), MinusOne);
        assert_eq!(sq1_mod_q_orbit(p(7), p(3)).unwrap(), MinusOne);
        assert_eq!(sq1_mod_q_orbit(p(7), p(7)), Err(Error::SamePrime(7)));
    }
}
