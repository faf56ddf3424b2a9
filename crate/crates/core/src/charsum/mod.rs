//! Character sums `S_n(t)`: the sum of `(x_1 x_2 ... x_n / p)` over all
//! n-tuples in `Z_p` whose coordinates add up to `t`.
//!
//! Three evaluation routes are kept apart so they can check one another:
//! cyclic convolution of full vectors (this module), direct enumeration of
//! tuples ([`brute`]) and the closed forms for odd `n` and `n = 2`
//! ([`closed`]). [`orbit`] realizes the cyclic-shift argument for `S_q(t)`.

pub mod brute;
pub mod closed;
pub mod orbit;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::config::DEFAULT_MAX_EXACT_ORDER;
use crate::error::{Error, Result};
use crate::legendre::legendre_euler;
use crate::modular::OddPrime;

pub use brute::{charsum_brute, charsum_brute_vector, charsum_brute_with_budget};
pub use closed::{charsum_closed, charsum_s2};
pub use orbit::{orbit_decompose, orbit_decompose_with_budget, sq1_mod_q_orbit, OrbitStats};

/// Modulus `m >= 2` used by the modular pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReductionModulus(u64);

impl ReductionModulus {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(ReductionModulus(m))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Canonical representative of `v` in `[0, m)`.
    pub fn reduce(self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.0);
        let r = ((v % &m) + &m) % &m;
        r.to_u64().expect("value below a u64 modulus")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Modular(ReductionModulus),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Values {
    Exact(Vec<BigInt>),
    Modular(Vec<u64>),
}

/// The full map `t -> S_n(t)` for one modulus and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSumVector {
    modulus: OddPrime,
    order: u64,
    mode: Mode,
    values: Values,
}

impl CharSumVector {
    pub fn zeros(modulus: OddPrime, order: u64, mode: Mode) -> Self {
        let len = modulus.get() as usize;
        let values = match mode {
            Mode::Exact => Values::Exact(vec![BigInt::zero(); len]),
            Mode::Modular(_) => Values::Modular(vec![0; len]),
        };
        CharSumVector {
            modulus,
            order,
            mode,
            values,
        }
    }

    pub fn modulus(&self) -> OddPrime {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        match &self.values {
            Values::Exact(v) => v.len(),
            Values::Modular(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exact_values(&self) -> Option<&[BigInt]> {
        match &self.values {
            Values::Exact(v) => Some(v),
            Values::Modular(_) => None,
        }
    }

    pub fn modular_values(&self) -> Option<&[u64]> {
        match &self.values {
            Values::Modular(v) => Some(v),
            Values::Exact(_) => None,
        }
    }

    /// Exact entry at `t`, or `None` in modular mode.
    pub fn exact_at(&self, t: u64) -> Option<&BigInt> {
        self.exact_values()
            .map(|v| &v[(t % self.modulus.get()) as usize])
    }

    pub fn modular_at(&self, t: u64) -> Option<u64> {
        self.modular_values()
            .map(|v| v[(t % self.modulus.get()) as usize])
    }

    /// Reduces an exact vector modulo `m`; modular vectors are returned as is
    /// when they already use `m`.
    pub fn reduce(&self, m: ReductionModulus) -> Result<CharSumVector> {
        match &self.values {
            Values::Exact(v) => Ok(CharSumVector {
                modulus: self.modulus,
                order: self.order,
                mode: Mode::Modular(m),
                values: Values::Modular(v.iter().map(|x| m.reduce(x)).collect()),
            }),
            Values::Modular(_) if self.mode == Mode::Modular(m) => Ok(self.clone()),
            Values::Modular(_) => Err(Error::ModeMismatch),
        }
    }

    /// Copy of the vector with `delta` added to the entry at `t`.
    pub fn perturbed(&self, t: u64, delta: i64) -> CharSumVector {
        let mut out = self.clone();
        let idx = (t % self.modulus.get()) as usize;
        match (&mut out.values, self.mode) {
            (Values::Exact(v), _) => v[idx] += delta,
            (Values::Modular(v), Mode::Modular(m)) => {
                v[idx] = m.reduce(&(BigInt::from(v[idx]) + delta));
            }
            (Values::Modular(_), Mode::Exact) => unreachable!("mode and storage agree"),
        }
        out
    }

    fn check_compatible(&self, other: &CharSumVector) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.get(),
                right: other.modulus.get(),
            });
        }
        if self.mode != other.mode {
            return Err(Error::ModeMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for CharSumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for t in 0..self.len() {
            if t > 0 {
                f.write_str(", ")?;
            }
            match &self.values {
                Values::Exact(v) => write!(f, "{}", v[t])?,
                Values::Modular(v) => write!(f, "{}", v[t])?,
            }
        }
        f.write_str("]")
    }
}

/// `S_1`: the entry at `t` is `(t/p)`, with `-1` stored as `m - 1` in
/// modular mode.
pub fn s1_vector(p: OddPrime, mode: Mode) -> CharSumVector {
    let symbols = p
        .residues()
        .map(|t| i64::from(legendre_euler(t).expect("Euler's criterion on a validated prime")));
    let values = match mode {
        Mode::Exact => Values::Exact(symbols.map(BigInt::from).collect()),
        Mode::Modular(m) => Values::Modular(
            symbols
                .map(|s| {
                    if s < 0 {
                        m.get() - 1
                    } else {
                        s as u64 % m.get()
                    }
                })
                .collect(),
        ),
    };
    CharSumVector {
        modulus: p,
        order: 1,
        mode,
        values,
    }
}

/// Cyclic convolution over `Z_p`: `u(t) = sum_s v(s) w(t - s)`.
pub fn convolve(v: &CharSumVector, w: &CharSumVector) -> Result<CharSumVector> {
    v.check_compatible(w)?;
    let p = v.modulus.get() as usize;
    let values = match (&v.values, &w.values, v.mode) {
        (Values::Exact(a), Values::Exact(b), _) => {
            let ops = ExactOperands::new(a, b);
            Values::Exact((0..p).map(|t| ops.entry(t)).collect())
        }
        (Values::Modular(a), Values::Modular(b), Mode::Modular(m)) => {
            Values::Modular((0..p).map(|t| modular_entry(a, b, t, m.get())).collect())
        }
        _ => return Err(Error::ModeMismatch),
    };
    Ok(CharSumVector {
        modulus: v.modulus,
        order: v.order + w.order,
        mode: v.mode,
        values,
    })
}

/// A single entry `(v * w)(t)` of an exact convolution.
pub fn convolve_exact_at(v: &CharSumVector, w: &CharSumVector, t: u64) -> Result<BigInt> {
    v.check_compatible(w)?;
    match (&v.values, &w.values) {
        (Values::Exact(a), Values::Exact(b)) => {
            Ok(ExactOperands::new(a, b).entry((t % v.modulus.get()) as usize))
        }
        _ => Err(Error::ModeMismatch),
    }
}

fn small_values(v: &[BigInt]) -> Option<(Vec<i64>, u64)> {
    let mut out = Vec::with_capacity(v.len());
    let mut bits = 0;
    for x in v {
        out.push(x.to_i64()?);
        bits = bits.max(x.abs().bits());
    }
    Some((out, bits))
}

/// Exact operands, lowered to machine integers when every partial sum of a
/// convolution fits an i128.
enum ExactOperands<'a> {
    Small(Vec<i64>, Vec<i64>),
    Big(&'a [BigInt], &'a [BigInt]),
}

impl<'a> ExactOperands<'a> {
    fn new(a: &'a [BigInt], b: &'a [BigInt]) -> Self {
        if let (Some((sa, ba)), Some((sb, bb))) = (small_values(a), small_values(b)) {
            let width = 64 - (a.len() as u64).leading_zeros() as u64;
            if ba + bb + width <= 126 {
                return ExactOperands::Small(sa, sb);
            }
        }
        ExactOperands::Big(a, b)
    }

    fn entry(&self, t: usize) -> BigInt {
        match self {
            ExactOperands::Small(a, b) => {
                let p = a.len();
                let mut acc: i128 = 0;
                for s in 0..=t {
                    acc += a[s] as i128 * b[t - s] as i128;
                }
                for s in t + 1..p {
                    acc += a[s] as i128 * b[t + p - s] as i128;
                }
                BigInt::from(acc)
            }
            ExactOperands::Big(a, b) => {
                let p = a.len();
                let mut acc = BigInt::zero();
                for (s, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let y = &b[if s <= t { t - s } else { t + p - s }];
                    if !y.is_zero() {
                        acc += x * y;
                    }
                }
                acc
            }
        }
    }
}

fn modular_entry(a: &[u64], b: &[u64], t: usize, m: u64) -> u64 {
    let p = a.len();
    let index = |s: usize| if s <= t { t - s } else { t + p - s };
    if m <= u32::MAX as u64 {
        // Each product is below 2^64 and p of them stay below 2^128.
        let acc: u128 = (0..p).map(|s| a[s] as u128 * b[index(s)] as u128).sum();
        return (acc % m as u128) as u64;
    }
    let m = m as u128;
    let mut acc: u128 = 0;
    for s in 0..p {
        acc = (acc + a[s] as u128 * b[index(s)] as u128 % m) % m;
    }
    acc as u64
}

/// `S_1, S_2, ..., S_n_max`, each obtained from the previous one by a
/// convolution with `S_1`.
pub fn charsum_ladder(
    p: OddPrime,
    n_max: u64,
    mode: Mode,
    max_exact_order: u64,
) -> Result<Vec<CharSumVector>> {
    if n_max == 0 {
        return Err(Error::InvalidOrder);
    }
    if mode == Mode::Exact && n_max > max_exact_order {
        return Err(Error::OrderBudgetExceeded {
            order: n_max,
            max: max_exact_order,
        });
    }
    let s1 = s1_vector(p, mode);
    let mut ladder = Vec::with_capacity(n_max as usize);
    ladder.push(s1.clone());
    for _ in 1..n_max {
        let next = convolve(ladder.last().expect("non-empty"), &s1)?;
        ladder.push(next);
    }
    Ok(ladder)
}

/// `S_n` from `n - 1` successive convolutions, starting at `S_1`.
pub fn charsum_vector(p: OddPrime, n: u64, mode: Mode) -> Result<CharSumVector> {
    charsum_vector_capped(p, n, mode, DEFAULT_MAX_EXACT_ORDER)
}

pub fn charsum_vector_capped(
    p: OddPrime,
    n: u64,
    mode: Mode,
    max_exact_order: u64,
) -> Result<CharSumVector> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    if mode == Mode::Exact && n > max_exact_order {
        return Err(Error::OrderBudgetExceeded {
            order: n,
            max: max_exact_order,
        });
    }
    let s1 = s1_vector(p, mode);
    let mut acc = s1.clone();
    for _ in 1..n {
        acc = convolve(&acc, &s1)?;
    }
    Ok(acc)
}
