//! Work budgets shared by the enumerating and exact-arithmetic routines.
//!
//! Every budget is a hard cap: exceeding it is reported as an error, never
//! by truncating the computation.

use serde::{Deserialize, Serialize};

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;
pub const DEFAULT_MAX_EXACT_ORDER: u64 = 64;
pub const DEFAULT_FACTORING_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Maximum number of tuples a brute-force or orbit enumeration may visit.
    pub enumeration: u64,
    /// Largest order n for which an exact (big integer) character-sum vector is built.
    pub max_exact_order: u64,
    /// Maximum number of trial divisions spent by the reciprocity evaluator.
    pub factoring: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: DEFAULT_ENUMERATION_BUDGET,
            max_exact_order: DEFAULT_MAX_EXACT_ORDER,
            factoring: DEFAULT_FACTORING_BUDGET,
        }
    }
}

/// `base^exp` if it does not exceed `budget`, otherwise `None`.
pub(crate) fn checked_tuple_count(base: u64, exp: u64, budget: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > budget {
            return None;
        }
    }
    Some(acc)
}

pub(crate) fn describe_power(base: u64, exp: u64) -> String {
    format!("{base}^{exp}")
}
