//! The annihilating operators for bounded right height.
//!
//! ```text
//! L_0 = 1 - z                 L_1 = (1 - 2z) D - 1
//! L_k = L_{k-1} D - L_{k-2} (z D^2 + 2D)
//! M_0 = (1 - z) D - 1         M_1 = (1 - 2z) D^2 - (3 - z) D
//! M_k = M_{k-1} D - M_{k-2} (z D^2 + (2 - z) D)
//! ```
//!
//! `ell(k, i)` is the coefficient of `D^i` in `L_k`, and `m_coeff(k, i)` the coefficient of
//! `D^(i+1)` in `M_k`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::{chebyshev_t, chebyshev_u, distinct_real_roots_above, IntPoly};
use super::DiffOperator;
use crate::Family;

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

fn unfold(k: usize, base0: DiffOperator, base1: DiffOperator, step: &DiffOperator) -> DiffOperator {
    if k == 0 {
        return base0;
    }
    let d = DiffOperator::d();
    let (mut a, mut b) = (base0, base1);
    for _ in 1..k {
        let c = b.compose(&d).sub(&a.compose(step));
        a = b;
        b = c;
    }
    b
}

/// `L_k`, annihilating the relaxed generating function of right height at most `k`.
pub fn build_l(k: usize) -> DiffOperator {
    unfold(
        k,
        DiffOperator::poly(p(&[1, -1])),
        DiffOperator::new(vec![p(&[-1]), p(&[1, -2])]),
        &DiffOperator::new(vec![p(&[]), p(&[2]), p(&[0, 1])]),
    )
}

/// `M_k`, annihilating the compacted generating function of right height at most `k`.
pub fn build_m(k: usize) -> DiffOperator {
    unfold(
        k,
        DiffOperator::new(vec![p(&[-1]), p(&[1, -1])]),
        DiffOperator::new(vec![p(&[]), p(&[-3, 1]), p(&[1, -2])]),
        &DiffOperator::new(vec![p(&[]), p(&[2, -1]), p(&[0, 1])]),
    )
}

/// Operator used to generate the series of `family` at height `k`.
///
/// At `k = 0` both families are `1/(1 - z)`, which `L_0` does not annihilate, so `M_0` is
/// used for both.
pub fn annihilator(family: Family, k: usize) -> DiffOperator {
    match (family, k) {
        (_, 0) | (Family::Compacted, _) => build_m(k),
        (Family::Relaxed, _) => build_l(k),
    }
}

pub fn ell(k: usize, i: usize) -> IntPoly {
    build_l(k).coeff(i)
}

pub fn m_coeff(k: usize, i: usize) -> IntPoly {
    build_m(k).coeff(i + 1)
}

/// `sum_n (-1)^n binom(k+2-n, n) z^n`.
pub fn leading_closed_form(k: usize) -> IntPoly {
    let mut coeffs = Vec::new();
    for n in 0..=(k + 2) / 2 {
        let b = binomial(k + 2 - n, n);
        coeffs.push(if n % 2 == 0 { b } else { -b });
    }
    IntPoly::new(coeffs)
}

fn binomial(n: usize, r: usize) -> BigInt {
    (0..r).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub family: Family,
    pub k: usize,
    pub i: isize,
    pub what: &'static str,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} k={} i={}: {}", self.family, self.k, self.i, self.what)
    }
}

/// Coefficients of `L_j` (or `M_j`) for `j <= k` from the per-coefficient recurrences alone,
/// without operator composition. Row `j` entry `i` is the coefficient of `D^i`.
fn coefficient_table(family: Family, k: usize) -> Vec<Vec<IntPoly>> {
    let z = IntPoly::z();
    let mut rows: Vec<Vec<IntPoly>> = match family {
        Family::Relaxed => vec![build_l(0).coeffs().to_vec(), build_l(1).coeffs().to_vec()],
        Family::Compacted => vec![build_m(0).coeffs().to_vec(), build_m(1).coeffs().to_vec()],
    };
    let get = |row: &Vec<IntPoly>, i: isize| -> IntPoly {
        if i < 0 {
            IntPoly::zero()
        } else {
            row.get(i as usize).cloned().unwrap_or_default()
        }
    };
    for j in 2..=k {
        let (a, b) = (&rows[j - 1], &rows[j - 2]);
        let top = j + usize::from(family == Family::Compacted);
        let row = (0..=top as isize)
            .map(|ii| match family {
                Family::Relaxed => {
                    let i = ii;
                    &(&get(a, i - 1) - &get(b, i - 1).scale_i64(i as i64 + 1)) - &(&z * &get(b, i - 2))
                }
                Family::Compacted => {
                    // m index i = ii - 1
                    let i = ii - 1;
                    let at = |r: &Vec<IntPoly>, t: isize| get(r, t + 1);
                    let zmi = &z - &IntPoly::constant(i as i64 + 2);
                    let mut v = &at(a, i - 1) + &at(b, i).scale_i64(i as i64 + 1);
                    v = &v + &(&zmi * &at(b, i - 1));
                    &v - &(&z * &at(b, i - 2))
                }
            })
            .collect();
        rows.push(row);
    }
    rows.truncate(k + 1);
    rows
}

/// Checks the structural identities of `L_k` and `M_k` against composition.
///
/// Covers the per-coefficient recurrences, the leading coefficient recurrence, the vanishing
/// low coefficients and `m_{k,k} = ell_{k,k}`.
pub fn coeff_recurrences_check(k: usize) -> Result<(), Mismatch> {
    let miss = |family, i: usize, what| Mismatch { family, k, i: i as isize, what };
    for family in [Family::Relaxed, Family::Compacted] {
        let op = match family {
            Family::Relaxed => build_l(k),
            Family::Compacted => build_m(k),
        };
        let table = coefficient_table(family, k);
        let row = &table[k];
        for i in 0..row.len().max(op.coeffs().len()) {
            let want = row.get(i).cloned().unwrap_or_default();
            if op.coeff(i) != want {
                let shown = if family == Family::Compacted { i as isize - 1 } else { i as isize };
                return Err(Mismatch { family, k, i: shown, what: "coefficient recurrence" });
            }
        }
    }
    let l = build_l(k);
    let m = build_m(k);
    if k >= 2 {
        let lead = &ell(k - 1, k - 1) - &(&IntPoly::z() * &ell(k - 2, k - 2));
        if l.coeff(k) != lead {
            return Err(miss(Family::Relaxed, k, "leading coefficient recurrence"));
        }
        if !l.coeff(0).is_zero() {
            return Err(miss(Family::Relaxed, 0, "ell_{k,0} is not zero"));
        }
        if !m.coeff(0).is_zero() {
            return Err(Mismatch { family: Family::Compacted, k, i: -1, what: "m_{k,-1} is not zero" });
        }
        for i in 0..=(k - 2) / 2 {
            if !l.coeff(i).is_zero() {
                return Err(miss(Family::Relaxed, i, "low coefficient is not zero"));
            }
        }
    }
    if k >= 1 && m.coeff(k + 1) != l.coeff(k) {
        return Err(miss(Family::Compacted, k, "m_{k,k} differs from ell_{k,k}"));
    }
    if l.coeff(k) != leading_closed_form(k) {
        return Err(miss(Family::Relaxed, k, "leading coefficient closed form"));
    }
    if k >= 1 && l.coeff(k - 1).scale_i64(2) != l.coeff(k).derivative().scale_i64(k as i64) {
        return Err(miss(Family::Relaxed, k - 1, "2 ell_{k,k-1} differs from k ell'_{k,k}"));
    }
    Ok(())
}

/// Checks `2(x^2-1)(2x)^K m_{k,k-1}(1/(4x^2))` against the Chebyshev form with `K = k + 2`.
///
/// Both sides are multiplied by a power of `2x` when needed so that they are polynomials.
pub fn transformed_m_check(k: usize) -> bool {
    let kk = k + 2;
    let m = build_m(k).coeff(k);
    let d = m.degree().unwrap_or(0);
    let extra = (2 * d).saturating_sub(kk);
    let total = kk + extra;
    let mut lhs = vec![BigInt::zero(); total + 1];
    for (j, c) in m.coeffs().iter().enumerate() {
        let e = total - 2 * j;
        lhs[e] += c * BigInt::from(2).pow(e as u32);
    }
    let lhs = &p(&[-2, 0, 2]) * &IntPoly::new(lhs);
    let kk_i = kk as i64;
    let t_part = &p(&[kk_i - 3, 0, -2 * (kk_i * kk_i + kk_i - 2)]) * &chebyshev_t(kk);
    let u_part = &p(&[1, 0, 2 * (kk_i - 1)]) * &chebyshev_u(kk);
    let shift = IntPoly::monomial(BigInt::from(2).pow(extra as u32), extra);
    lhs == &shift * &(&t_part + &u_part)
}

/// The roots of `ell_{k,k}` predicted by the Chebyshev closed form, ascending.
pub fn leading_roots(k: usize) -> Vec<f64> {
    let n = (k + 2) / 2;
    (1..=n)
        .map(|j| {
            let c = (j as f64 * PI / (k as f64 + 3.0)).cos();
            1.0 / (4.0 * c * c)
        })
        .collect()
}

/// Exact Sturm count of distinct positive roots of `ell_{k,k}` against its degree, plus
/// a relative residual check at each predicted root.
pub fn roots_real_positive_distinct(k: usize) -> bool {
    let lead = leading_closed_form(k);
    let deg = lead.degree().unwrap_or(0);
    if distinct_real_roots_above(&lead, &BigRational::zero()) != deg {
        return false;
    }
    let roots = leading_roots(k);
    if roots.len() != deg {
        return false;
    }
    roots.iter().all(|&r| {
        let scale: f64 = lead
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs().to_f64().unwrap_or(f64::INFINITY) * r.powi(i as i32))
            .sum();
        (lead.eval_f64(r) / scale).abs() < 1e-12
    }) && roots.windows(2).all(|w| w[1] - w[0] > 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(cs: &[&[i64]]) -> DiffOperator {
        DiffOperator::new(cs.iter().map(|c| p(c)).collect())
    }

    #[test]
    fn small_relaxed_operators() {
        assert_eq!(build_l(1), op(&[&[-1], &[1, -2]]));
        assert_eq!(build_l(2), op(&[&[], &[-3, 2], &[1, -3, 1]]));
        let l4 = op(&[&[], &[], &[11, -6], &[-10, 24, -6], &[1, -5, 6, -1]]);
        assert!(build_l(4).equal_up_to_scalar(&l4));
        assert_eq!(build_l(4).order(), Some(4));
    }

    #[test]
    fn small_compacted_operators() {
        assert_eq!(build_m(1), op(&[&[], &[-3, 1], &[1, -2]]));
        assert_eq!(build_m(2), op(&[&[], &[3, -2], &[-6, 6, -1], &[1, -3, 1]]));
        assert_eq!(build_m(3).order(), Some(4));
    }

    #[test]
    fn operators_annihilate_small_series() {
        use num_traits::One;
        // 1/(1-z) and (1-2z)^{-1/2}
        let geo: Vec<BigRational> = (0..12).map(|_| BigRational::one()).collect();
        assert!(annihilator(Family::Relaxed, 0).apply_series(&geo).iter().all(Zero::is_zero));
        let mut r1 = vec![BigRational::one()];
        for n in 0..11 {
            let next = &r1[n] * BigRational::new(BigInt::from(2 * n + 1), BigInt::from(n + 1));
            r1.push(next);
        }
        assert!(build_l(1).apply_series(&r1).iter().all(Zero::is_zero));
    }

    #[test]
    fn closed_form_leading_coefficients() {
        assert_eq!(leading_closed_form(1), p(&[1, -2]));
        assert_eq!(leading_closed_form(2), p(&[1, -3, 1]));
        assert_eq!(leading_closed_form(4), p(&[1, -5, 6, -1]));
        for k in 0..=12 {
            assert_eq!(ell(k, k), leading_closed_form(k), "k={k}");
        }
    }

    #[test]
    fn recurrence_checks_pass() {
        for k in 0..=12 {
            coeff_recurrences_check(k).unwrap();
        }
    }

    #[test]
    fn independent_table_detects_changes() {
        let t = coefficient_table(Family::Compacted, 3);
        assert_eq!(t[3], build_m(3).coeffs().to_vec());
        assert_ne!(t[2], build_m(3).coeffs().to_vec());
    }

    #[test]
    fn reduced_orders() {
        for k in 2..=10 {
            let (r, s) = build_l(k).reduce_order();
            assert_eq!(s, k / 2, "k={k}");
            assert_eq!(r.order(), Some(k.div_ceil(2)));
        }
        for k in 1..=10 {
            assert_eq!(build_m(k).reduce_order().1, 1);
        }
    }

    #[test]
    fn transformed_m() {
        for k in 0..=10 {
            assert!(transformed_m_check(k), "k={k}");
        }
    }

    #[test]
    fn leading_roots_properties() {
        for k in 0..=12 {
            assert!(roots_real_positive_distinct(k), "k={k}");
        }
        let r = leading_roots(2);
        assert!((r[0] - 1.0 / 2.618_033_988_749_895).abs() < 1e-12);
    }
}
