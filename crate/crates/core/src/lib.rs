//! Exact enumeration of compacted and relaxed binary trees.
//!
//! The crate covers the whole pipeline from hash-consing a tree into its compacted DAG,
//! through brute-force and recurrence-based counting, to the D-finite differential
//! operators for bounded right height and the asymptotic data they determine.

pub mod asymptotics;
pub mod cli;
pub mod compaction;
pub mod dfinite;
pub mod enumerate;
mod error;
pub mod operator;
pub mod recurrences;
pub mod tree;

pub use error::{Error, Result};

/// Which class of trees a count or operator refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Relaxed,
    Compacted,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Relaxed => "relaxed",
            Family::Compacted => "compacted",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relaxed" => Ok(Family::Relaxed),
            "compacted" => Ok(Family::Compacted),
            other => Err(Error::Domain(format!("unknown family '{other}'"))),
        }
    }
}
