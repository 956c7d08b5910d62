//! Two-parameter recurrences for compacted (`gamma`) and relaxed (`delta`) counts.
//!
//! Entry `(n, p)` counts the subtrees of size `n` that can appear when a pool of `p`
//! previously discovered subtrees (plus the leaf) is available for pointers:
//!
//! ```text
//! T[n+1][p] = sum_{i=0..n} T[i][p] * T[n-i][p+i]      (n >= 1)
//! T[0][p]   = p + 1
//! gamma[1][p] = p^2 + p + 1,   delta[1][p] = (p + 1)^2
//! ```
//!
//! Only the triangle `n + p <= nmax` is needed for `T[n][0]`, so only that is stored.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::Family;

#[derive(Clone, Debug)]
pub struct CountTable {
    kind: Family,
    nmax: usize,
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    pub fn build(kind: Family, nmax: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(nmax + 1);
        rows.push((0..=nmax).map(|p| BigUint::from(p + 1)).collect());
        if nmax >= 1 {
            rows.push(
                (0..nmax)
                    .map(|p| {
                        let p = BigUint::from(p);
                        match kind {
                            Family::Compacted => &p * &p + &p + 1u32,
                            Family::Relaxed => (&p + 1u32) * (&p + 1u32),
                        }
                    })
                    .collect(),
            );
        }
        for n in 1..nmax {
            let row: Vec<BigUint> = (0..nmax - n)
                .map(|p| (0..=n).map(|i| &rows[i][p] * &rows[n - i][p + i]).sum())
                .collect();
            rows.push(row);
        }
        CountTable { kind, nmax, rows }
    }

    pub fn kind(&self) -> Family {
        self.kind
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    /// Entry `(n, p)`; `None` outside the stored triangle.
    pub fn get(&self, n: usize, p: usize) -> Option<&BigUint> {
        self.rows.get(n)?.get(p)
    }

    /// Number of trees of size `n`.
    pub fn count(&self, n: usize) -> Result<BigUint> {
        self.get(n, 0).cloned().ok_or(Error::OutOfRange { n, nmax: self.nmax })
    }

    /// `n,p,value` for every stored entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p,value\n");
        for (n, row) in self.rows.iter().enumerate() {
            for (p, v) in row.iter().enumerate() {
                let _ = writeln!(out, "{n},{p},{v}");
            }
        }
        out
    }
}

pub fn build_table(kind: Family, nmax: usize) -> CountTable {
    CountTable::build(kind, nmax)
}

/// Compacted trees of size `n`.
pub fn c(n: usize) -> BigUint {
    CountTable::build(Family::Compacted, n).count(n).expect("table built to n")
}

/// Relaxed trees of size `n`.
pub fn r(n: usize) -> BigUint {
    CountTable::build(Family::Relaxed, n).count(n).expect("table built to n")
}

/// `count(0..=nmax)` for the family, from a single table.
pub fn counts(kind: Family, nmax: usize) -> Vec<BigUint> {
    let t = CountTable::build(kind, nmax);
    (0..=nmax).map(|n| t.count(n).expect("in range")).collect()
}
