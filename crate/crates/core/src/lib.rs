//! Computational companion to a short proof of quadratic reciprocity.
//!
//! The crate evaluates Legendre symbols three independent ways, computes
//! the character sums `S_n(t)` by convolution, enumeration and closed form,
//! decomposes the tuples behind `S_q(1)` into cyclic-shift orbits, and
//! certifies every step of the argument numerically over ranges of primes.
//! Verification is by instantiation: a passing report covers the primes it
//! lists and nothing more.

pub mod charsum;
pub mod cli;
pub mod config;
pub mod error;
pub mod legendre;
pub mod modular;
pub mod proofcheck;

pub use config::Budgets;
pub use error::{Error, Result};
pub use legendre::LegendreValue;
pub use modular::{OddPrime, Residue};
