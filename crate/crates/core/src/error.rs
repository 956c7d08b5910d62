use num_bigint::BigUint;
use thiserror::Error;

use crate::tree::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid dag: {0}")]
    Invalid(#[from] Violation),
    #[error("enumeration budget exceeded: about {estimate} objects, budget is {budget}")]
    BudgetExceeded { estimate: BigUint, budget: u64 },
    #[error("index n={n} is outside the table (built up to {nmax})")]
    OutOfRange { n: usize, nmax: usize },
    #[error("seed for n={n} is unavailable: {reason}")]
    SeedUnavailable { n: usize, reason: String },
    #[error("non-integral coefficient at n={n}")]
    Integrality { n: usize },
    #[error("leading recurrence coefficient vanishes at n={n}")]
    SingularStep { n: usize },
    #[error("no closed form for {0}")]
    Unavailable(String),
    #[error("{0}")]
    Domain(String),
}
