//! Coefficient recurrences from annihilating operators, and exact streaming of
//! bounded-height counts.
//!
//! For `L = sum p_{i,j} z^j D^i`, comparing coefficients of `z^(N-d)` in `L f = 0`, with
//! `d = max(i - j)`, gives
//!
//! ```text
//! sum_s q_s(N) a_{N-s} = 0,     q_s(N) = sum_{i-j = d-s} p_{i,j} (N-s)^(falling i)
//! ```
//!
//! which holds for every `N >= 0` once `a_n = 0` for `n < 0`. Counts are `b_n = n! a_n`,
//! and multiplying through by `N!` gives the integer form `sum_s q_s(N) N^(falling s) b_{N-s} = 0`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumerate::{count_exhaustive, factorial, GenFilter, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::operator::{annihilator, DiffOperator, IntPoly};
use crate::recurrences::CountTable;
use crate::Family;

/// `sum_{s=0..span} q_s(N) a_{N-s} = 0` on ordinary series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffRecurrence {
    q: Vec<IntPoly>,
}

impl CoeffRecurrence {
    /// `q[s]` is the polynomial in `N` multiplying `a_{N-s}`.
    pub fn new(mut q: Vec<IntPoly>) -> Self {
        while q.last().is_some_and(IntPoly::is_zero) {
            q.pop();
        }
        assert!(q.first().is_some_and(|p| !p.is_zero()), "leading recurrence polynomial is zero");
        CoeffRecurrence { q }
    }

    pub fn span(&self) -> usize {
        self.q.len() - 1
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.q
    }

    /// Nonnegative integer roots of `q_0`, ascending.
    pub fn leading_integer_roots(&self) -> Vec<usize> {
        let q0 = &self.q[0];
        let lead = q0.leading().expect("nonzero").abs();
        // Cauchy bound on the roots
        let bound = q0.coeffs().iter().map(|c| c.abs().div_ceil(&lead)).max().unwrap_or_default() + 1u32;
        let bound = bound.to_usize().unwrap_or(usize::MAX).min(1 << 20);
        (0..=bound).filter(|&n| q0.eval_i64(n as i64).is_zero()).collect()
    }

    /// Smallest number of initial terms that determines every later term.
    pub fn min_seeds(&self) -> usize {
        let root = self.leading_integer_roots().last().map_or(0, |r| r + 1);
        root.max(self.span())
    }

    /// `sum_s q_s(n) a_{n-s}` for ordinary coefficients `a`.
    pub fn residual(&self, a: &[BigRational], n: usize) -> BigRational {
        let nn = BigInt::from(n);
        self.q
            .iter()
            .enumerate()
            .filter(|&(s, _)| s <= n)
            .map(|(s, q)| BigRational::from_integer(q.eval(&nn)) * &a[n - s])
            .sum()
    }
}

impl fmt::Display for CoeffRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .q
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(s, q)| {
                let q = q.to_string().replace('z', "n");
                if s == 0 { format!("({q})*a(n)") } else { format!("({q})*a(n-{s})") }
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// `x (x-1) ... (x-i+1)` as a polynomial in `x`, after substituting `x = N - s`.
fn shifted_falling(s: usize, i: usize) -> IntPoly {
    (0..i).fold(IntPoly::one(), |acc, t| &acc * &IntPoly::new(vec![-BigInt::from(s + t), BigInt::one()]))
}

/// Coefficient extraction: the recurrence satisfied by the series of any solution of `op`.
pub fn ode_to_recurrence(op: &DiffOperator) -> CoeffRecurrence {
    assert!(!op.is_zero(), "zero operator");
    let terms: Vec<(usize, usize, &BigInt)> = op
        .coeffs()
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, c)| (i, j, c)))
        .collect();
    let d = terms.iter().map(|&(i, j, _)| i as isize - j as isize).max().expect("nonzero");
    let lo = terms.iter().map(|&(i, j, _)| i as isize - j as isize).min().expect("nonzero");
    let mut q = vec![IntPoly::zero(); (d - lo) as usize + 1];
    for (i, j, c) in terms {
        let s = (d - (i as isize - j as isize)) as usize;
        q[s] = &q[s] + &shifted_falling(s, i).scale(c);
    }
    CoeffRecurrence::new(q)
}

/// Recurrence plus initial counts for one family and height bound.
#[derive(Clone, Debug)]
pub struct SeededSequence {
    pub family: Family,
    pub k: usize,
    pub rec: CoeffRecurrence,
    /// Counts `n! a_n` for `n < seeds.len()`.
    pub seeds: Vec<BigUint>,
}

impl SeededSequence {
    /// Seeds as ordinary coefficients `a_n = count / n!`.
    pub fn seeds_ogf(&self) -> Vec<BigRational> {
        self.seeds
            .iter()
            .enumerate()
            .map(|(n, c)| BigRational::new(BigInt::from(c.clone()), BigInt::from(factorial(n))))
            .collect()
    }
}

/// Count of trees of size `n` with right height at most `k`.
///
/// Up to size `k + 1` every spine qualifies, so the unrestricted tables answer directly;
/// beyond that the count comes from exhaustive generation.
pub fn bounded_count(family: Family, k: usize, n: usize, budget: u64) -> Result<BigUint> {
    if n <= k + 1 {
        return CountTable::build(family, n).count(n);
    }
    let f = GenFilter { n, max_right_height: Some(k), kind: family };
    match count_exhaustive(&f, budget) {
        Ok(c) => Ok(BigUint::from(c)),
        Err(Error::BudgetExceeded { estimate, budget }) => Err(Error::SeedUnavailable {
            n,
            reason: format!("exhaustive count needs about {estimate} objects, budget is {budget}"),
        }),
        Err(e) => Err(e),
    }
}

/// Seeds the recurrence of `annihilator(family, k)` with `n0` initial counts.
///
/// `n0 = None` uses the minimum. Seeds past the minimum are checked against the recurrence.
pub fn seed(k: usize, family: Family, n0: Option<usize>) -> Result<SeededSequence> {
    seed_with_budget(k, family, n0, DEFAULT_BUDGET)
}

pub fn seed_with_budget(k: usize, family: Family, n0: Option<usize>, budget: u64) -> Result<SeededSequence> {
    let rec = ode_to_recurrence(&annihilator(family, k));
    let min = rec.min_seeds();
    let n0 = n0.unwrap_or(min);
    if n0 < min {
        return Err(Error::SeedUnavailable {
            n: n0,
            reason: format!("the recurrence needs at least {min} initial values"),
        });
    }
    let table = CountTable::build(family, (k + 1).min(n0));
    let mut seeds = Vec::with_capacity(n0);
    for n in 0..n0 {
        let v = match table.count(n) {
            Ok(v) if n <= k + 1 => v,
            _ => bounded_count(family, k, n, budget)?,
        };
        seeds.push(v);
    }
    let seq = SeededSequence { family, k, rec, seeds };
    if n0 == min {
        return Ok(seq);
    }
    let head = SeededSequence { seeds: seq.seeds[..min].to_vec(), ..seq.clone() };
    let derived = stream(&head, n0.saturating_sub(1))?;
    for n in min..n0 {
        if BigInt::from(seq.seeds[n].clone()) != derived[n] {
            return Err(Error::Domain(format!("seed at n={n} disagrees with the recurrence")));
        }
    }
    Ok(seq)
}

/// Iterator over counts `b_0, b_1, ...` using the integer form of the recurrence.
pub struct SequenceStream<'a> {
    seq: &'a SeededSequence,
    values: Vec<BigInt>,
}

impl<'a> SequenceStream<'a> {
    pub fn new(seq: &'a SeededSequence) -> Self {
        SequenceStream { seq, values: Vec::new() }
    }

    fn step(&self, n: usize) -> Result<BigInt> {
        if let Some(s) = self.seq.seeds.get(n) {
            return Ok(BigInt::from(s.clone()));
        }
        let q = self.seq.rec.coeffs();
        let nn = BigInt::from(n);
        let den = q[0].eval(&nn);
        if den.is_zero() {
            return Err(Error::SingularStep { n });
        }
        let mut acc = BigInt::zero();
        let mut falling = BigInt::one();
        for (s, qs) in q.iter().enumerate().skip(1) {
            if s > n {
                break;
            }
            falling *= BigInt::from(n + 1 - s);
            if !qs.is_zero() {
                acc += qs.eval(&nn) * &falling * &self.values[n - s];
            }
        }
        let (quot, rem) = (-acc).div_rem(&den);
        if !rem.is_zero() {
            return Err(Error::Integrality { n });
        }
        Ok(quot)
    }
}

impl Iterator for SequenceStream<'_> {
    type Item = Result<BigInt>;

    fn next(&mut self) -> Option<Result<BigInt>> {
        let n = self.values.len();
        match self.step(n) {
            Ok(v) => {
                self.values.push(v.clone());
                Some(Ok(v))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

/// Counts `b_0..=b_upto`, exact.
pub fn stream(seq: &SeededSequence, upto: usize) -> Result<Vec<BigInt>> {
    SequenceStream::new(seq).take(upto + 1).collect()
}

/// Ordinary coefficients `a_0..=a_upto` by the rational form of the recurrence.
pub fn stream_ogf(seq: &SeededSequence, upto: usize) -> Result<Vec<BigRational>> {
    let q = seq.rec.coeffs();
    let mut a = seq.seeds_ogf();
    a.truncate(upto + 1);
    for n in a.len()..=upto {
        let nn = BigInt::from(n);
        let den = q[0].eval(&nn);
        if den.is_zero() {
            return Err(Error::SingularStep { n });
        }
        let acc: BigRational = q
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(s, _)| s <= n)
            .map(|(s, qs)| BigRational::from_integer(qs.eval(&nn)) * &a[n - s])
            .sum();
        a.push(-acc / BigRational::from_integer(den));
    }
    Ok(a)
}

/// Counts for `family` at height `k` up to `upto`, with minimal seeding.
pub fn sequence(family: Family, k: usize, upto: usize) -> Result<Vec<BigInt>> {
    stream(&seed(k, family, None)?, upto)
}

fn fibonacci(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

/// Exact value from a known closed form, where one exists.
///
/// Height 0 gives `n!` in both families, relaxed height 1 gives `(2n-1)!!`, and relaxed
/// height 2 gives `(n-1)! F_{2n}`.
pub fn closed_form_oracle(k: usize, family: Family, n: usize) -> Result<BigUint> {
    match (k, family) {
        (0, _) => Ok(factorial(n)),
        (1, Family::Relaxed) => Ok((1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(2 * i - 1))),
        (2, Family::Relaxed) if n == 0 => Ok(BigUint::one()),
        (2, Family::Relaxed) => Ok(factorial(n - 1) * fibonacci(2 * n)),
        _ => Err(Error::Unavailable(format!("no closed form for {family} trees of right height at most {k}"))),
    }
}

/// True when every value is a nonnegative integer; used by reports.
pub fn all_nonnegative(values: &[BigInt]) -> bool {
    values.iter().all(|v| v.sign() != Sign::Minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{build_l, build_m};

    fn ints(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn l1_recurrence_by_hand() {
        // (n+1) a_{n+1} = (2n+1) a_n, written at N = n+1: N a_N - (2N-1) a_{N-1} = 0
        let rec = ode_to_recurrence(&build_l(1));
        assert_eq!(rec.coeffs(), &[IntPoly::from_i64s(&[0, 1]), IntPoly::from_i64s(&[1, -2])]);
        assert_eq!(rec.min_seeds(), 1);
    }

    #[test]
    fn leading_roots_fit_in_unrestricted_range() {
        for k in 0..=8 {
            for family in [Family::Relaxed, Family::Compacted] {
                let rec = ode_to_recurrence(&annihilator(family, k));
                assert!(rec.min_seeds() <= k + 2, "{family} k={k}: {}", rec.min_seeds());
            }
        }
    }

    #[test]
    fn small_streams() {
        assert_eq!(sequence(Family::Relaxed, 1, 5).unwrap(), ints(&[1, 1, 3, 15, 105, 945]));
        assert_eq!(sequence(Family::Relaxed, 0, 5).unwrap(), ints(&[1, 1, 2, 6, 24, 120]));
        assert_eq!(sequence(Family::Relaxed, 2, 5).unwrap(), ints(&[1, 1, 3, 16, 126, 1320]));
        // derivative of the series is e^{z/2} (1-2z)^{-5/4}
        assert_eq!(sequence(Family::Compacted, 1, 6).unwrap(), ints(&[1, 1, 3, 14, 92, 786, 8278]));
        assert_eq!(sequence(Family::Compacted, 2, 2).unwrap(), ints(&[1, 1, 3]));
    }

    #[test]
    fn recurrence_kills_own_solution() {
        let seq = seed(3, Family::Compacted, None).unwrap();
        let a = stream_ogf(&seq, 50).unwrap();
        for n in 0..=50 {
            assert!(seq.rec.residual(&a, n).is_zero());
        }
        // and the operator itself annihilates the truncated series
        let applied = build_m(3).apply_series(&a);
        assert!(applied.iter().all(Zero::is_zero));
    }

    #[test]
    fn integer_and_rational_routes_agree() {
        for family in [Family::Relaxed, Family::Compacted] {
            let seq = seed(3, family, None).unwrap();
            let ints = stream(&seq, 40).unwrap();
            let rats = stream_ogf(&seq, 40).unwrap();
            for (n, (b, a)) in ints.iter().zip(&rats).enumerate() {
                let scaled = a * BigRational::from_integer(BigInt::from(factorial(n)));
                assert_eq!(scaled, BigRational::from_integer(b.clone()));
            }
        }
    }

    #[test]
    fn extra_seeds_are_validated() {
        let seq = seed(2, Family::Relaxed, Some(5)).unwrap();
        assert_eq!(seq.seeds[4], BigUint::from(126u32));
        assert!(matches!(seed(3, Family::Relaxed, Some(0)), Err(Error::SeedUnavailable { .. })));
    }

    #[test]
    fn seeding_beyond_budget_fails() {
        let err = seed_with_budget(1, Family::Relaxed, Some(8), 100).unwrap_err();
        assert!(matches!(err, Error::SeedUnavailable { n: 4, .. }));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_oracle(2, Family::Relaxed, 4).unwrap(), BigUint::from(126u32));
        assert_eq!(closed_form_oracle(1, Family::Relaxed, 10).unwrap(), BigUint::from(654_729_075u64));
        assert!(matches!(closed_form_oracle(2, Family::Compacted, 10), Err(Error::Unavailable(_))));
    }

    #[test]
    fn recurrence_display() {
        let rec = ode_to_recurrence(&build_l(1));
        assert_eq!(rec.to_string(), "(n)*a(n) + (1 - 2*n)*a(n-1) = 0");
    }
}
