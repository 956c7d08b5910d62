//! Exhaustive generation of spines, relaxed dags and compacted dags.
//!
//! Dags are produced spine by spine; for each spine the pointer slots are taken in
//! traversal visit order and their targets counted in mixed radix, the last slot varying
//! fastest. Output order is therefore deterministic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::compaction::is_compacted;
use crate::error::{Error, Result};
use crate::tree::{RelaxedDag, SpineLayout, SpineNode, SpineTree};
use crate::Family;

/// Default cap on the number of objects a generator may produce.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenFilter {
    pub n: usize,
    pub max_right_height: Option<usize>,
    pub kind: Family,
}

impl GenFilter {
    pub fn relaxed(n: usize) -> Self {
        GenFilter { n, max_right_height: None, kind: Family::Relaxed }
    }

    pub fn compacted(n: usize) -> Self {
        GenFilter { n, max_right_height: None, kind: Family::Compacted }
    }

    pub fn with_max_right_height(mut self, k: usize) -> Self {
        self.max_right_height = Some(k);
        self
    }
}

/// All spines with `n` nodes, optionally with right height at most `k`.
fn spines_bounded(n: usize, k: Option<usize>) -> Vec<Option<SpineNode>> {
    if n == 0 {
        return vec![None];
    }
    let mut out = Vec::new();
    for left_size in 0..n {
        let right_size = n - 1 - left_size;
        let rights = match k {
            Some(0) if right_size > 0 => continue,
            Some(k) => spines_bounded(right_size, Some(k.saturating_sub(1))),
            None => spines_bounded(right_size, None),
        };
        let lefts = spines_bounded(left_size, k);
        for l in &lefts {
            for r in &rights {
                out.push(Some(SpineNode::new(l.clone(), r.clone())));
            }
        }
    }
    out
}

/// Every spine of size `n`, each exactly once.
pub fn gen_spines(n: usize) -> impl Iterator<Item = SpineTree> {
    gen_spines_bounded(n, None)
}

pub fn gen_spines_bounded(n: usize, k: Option<usize>) -> impl Iterator<Item = SpineTree> {
    spines_bounded(n, k).into_iter().map(|root| SpineTree { root: root.map(Box::new) })
}

fn layouts(f: &GenFilter) -> Vec<SpineLayout> {
    gen_spines_bounded(f.n, f.max_right_height).map(|s| s.layout()).collect()
}

fn layout_count(layout: &SpineLayout) -> BigUint {
    layout.slots.iter().fold(BigUint::one(), |acc, s| acc * BigUint::from(s.choices()))
}

/// Sum over spines of the product of per-slot choice counts.
pub fn count_relaxed_spine_product(n: usize, k: Option<usize>) -> BigUint {
    gen_spines_bounded(n, k).map(|s| layout_count(&s.layout())).sum()
}

/// Exact number of relaxed dags matching the filter, which bounds every generator's output.
///
/// Comes from the recurrence tables (or the bounded-height stream), so it is cheap even
/// when enumeration is not.
pub fn relaxed_total(n: usize, k: Option<usize>) -> Result<BigUint> {
    match k {
        Some(k) if k + 1 < n => {
            let v = crate::dfinite::sequence(Family::Relaxed, k, n)?.swap_remove(n);
            Ok(v.to_biguint().expect("counts are nonnegative"))
        }
        _ => crate::recurrences::CountTable::build(Family::Relaxed, n).count(n),
    }
}

fn check_budget(f: &GenFilter, budget: u64) -> Result<()> {
    let estimate = relaxed_total(f.n, f.max_right_height)?;
    if estimate > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    Ok(())
}

/// Streams relaxed dags spine by spine.
pub struct RelaxedIter {
    layouts: Vec<SpineLayout>,
    spine: usize,
    digits: Vec<u32>,
}

impl RelaxedIter {
    fn new(layouts: Vec<SpineLayout>) -> Self {
        let digits = layouts.first().map_or(Vec::new(), |l| vec![0; l.slots.len()]);
        RelaxedIter { layouts, spine: 0, digits }
    }
}

impl Iterator for RelaxedIter {
    type Item = RelaxedDag;

    fn next(&mut self) -> Option<RelaxedDag> {
        let layout = self.layouts.get(self.spine)?;
        let dag = layout.assemble(&self.digits);
        let mut carried = true;
        for (d, s) in self.digits.iter_mut().zip(&layout.slots).rev() {
            *d += 1;
            if *d <= s.max_target {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            self.spine += 1;
            if let Some(next) = self.layouts.get(self.spine) {
                self.digits = vec![0; next.slots.len()];
            }
        }
        Some(dag)
    }
}

/// Every relaxed dag matching the filter, each exactly once.
pub fn gen_relaxed(f: &GenFilter, budget: u64) -> Result<RelaxedIter> {
    check_budget(f, budget)?;
    Ok(RelaxedIter::new(layouts(f)))
}

/// Relaxed dags that pass the uniqueness test.
pub fn gen_compacted(f: &GenFilter, budget: u64) -> Result<impl Iterator<Item = RelaxedDag>> {
    Ok(gen_relaxed(f, budget)?.filter(is_compacted))
}

/// Generates according to `f.kind`.
pub fn generate(f: &GenFilter, budget: u64) -> Result<Box<dyn Iterator<Item = RelaxedDag>>> {
    Ok(match f.kind {
        Family::Relaxed => Box::new(gen_relaxed(f, budget)?),
        Family::Compacted => Box::new(gen_compacted(f, budget)?),
    })
}

/// Counts generated objects, with spines split across the rayon pool.
pub fn count_exhaustive(f: &GenFilter, budget: u64) -> Result<u64> {
    check_budget(f, budget)?;
    let kind = f.kind;
    Ok(layouts(f)
        .into_par_iter()
        .map(|layout| {
            let it = RelaxedIter::new(vec![layout]);
            match kind {
                Family::Relaxed => it.count() as u64,
                Family::Compacted => it.filter(is_compacted).count() as u64,
            }
        })
        .sum())
}

/// Catalan(n) from the product formula.
pub fn catalan(n: usize) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..n {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Estimated object count as `f64`, for messages.
pub fn estimate(f: &GenFilter) -> f64 {
    match relaxed_total(f.n, f.max_right_height) {
        Ok(e) if e.is_zero() => 0.0,
        Ok(e) => e.to_f64().unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}
