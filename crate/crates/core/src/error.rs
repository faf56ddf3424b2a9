use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NotPrime: {0} is not prime")]
    NotPrime(i128),
    #[error("NotOdd: 2 is not an odd prime")]
    NotOdd,
    #[error("OutOfRange: {0} is not below 2^63")]
    OutOfRange(u64),
    #[error("ZeroInverse: 0 has no inverse modulo {0}")]
    ZeroInverse(u64),
    #[error("ModulusMismatch: residues modulo {left} and {right} cannot be combined")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("ModeMismatch: vectors use different arithmetic modes")]
    ModeMismatch,
    #[error("InvalidModulus: reduction modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("InvalidOrder: order must be positive")]
    InvalidOrder,
    #[error("EvenOrder: n = {0} is even; no closed form is available")]
    EvenOrder(u64),
    #[error("InvalidRange: {0}")]
    InvalidRange(String),
    #[error("SamePrime: p and q must differ (both are {0})")]
    SamePrime(u64),
    #[error("FactoringBudgetExceeded: more than {budget} trial divisions needed")]
    FactoringBudgetExceeded { budget: u64 },
    #[error("OrderBudgetExceeded: exact order {order} exceeds the cap {max}")]
    OrderBudgetExceeded { order: u64, max: u64 },
    #[error("EnumerationBudgetExceeded: {required} tuples exceed the budget {budget}")]
    EnumerationBudgetExceeded { required: String, budget: u64 },
    #[error("InternalInconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// True for the errors raised when a configured work budget is exhausted.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::FactoringBudgetExceeded { .. }
                | Error::OrderBudgetExceeded { .. }
                | Error::EnumerationBudgetExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
