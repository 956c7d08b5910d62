//! Linear differential operators with integer polynomial coefficients.
//!
//! Operators are kept as `sum p_i(z) D^i` with every `D` to the right. Composition moves
//! `D` past polynomials with `D^i p = sum_t binom(i, t) p^(t) D^(i-t)`.

mod families;
mod poly;

pub use families::{
    annihilator, build_l, build_m, coeff_recurrences_check, ell, leading_closed_form, leading_roots,
    m_coeff, roots_real_positive_distinct, transformed_m_check, Mismatch,
};
pub use poly::{chebyshev_t, chebyshev_u, distinct_real_roots_above, sturm_chain, IntPoly, RatPoly};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    coeffs: Vec<IntPoly>,
}

impl DiffOperator {
    pub fn new(mut coeffs: Vec<IntPoly>) -> Self {
        while coeffs.last().is_some_and(IntPoly::is_zero) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::poly(IntPoly::one())
    }

    /// Multiplication by `p`.
    pub fn poly(p: IntPoly) -> Self {
        Self::new(vec![p])
    }

    /// `D^i`.
    pub fn d_pow(i: usize) -> Self {
        let mut coeffs = vec![IntPoly::zero(); i + 1];
        coeffs[i] = IntPoly::one();
        Self::new(coeffs)
    }

    pub fn d() -> Self {
        Self::d_pow(1)
    }

    /// `p D^i`.
    pub fn term(p: IntPoly, i: usize) -> Self {
        let mut coeffs = vec![IntPoly::zero(); i + 1];
        coeffs[i] = p;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.coeffs
    }

    /// Coefficient of `D^i`.
    pub fn coeff(&self, i: usize) -> IntPoly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> DiffOperator {
        Self::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// `self * other`, so that `(a * b)(f) = a(b(f))`.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        if self.is_zero() || other.is_zero() {
            return DiffOperator::zero();
        }
        let mut out = vec![IntPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in other.coeffs.iter().enumerate() {
                let mut dq = q.clone();
                let mut binom = BigInt::one();
                for t in 0..=i {
                    if dq.is_zero() {
                        break;
                    }
                    let term = &(p * &dq).scale(&binom);
                    out[i - t + j] = &out[i - t + j] + term;
                    dq = dq.derivative();
                    binom = binom * BigInt::from(i - t) / BigInt::from(t + 1);
                }
            }
        }
        Self::new(out)
    }

    /// Applies the operator to a truncated power series.
    ///
    /// The result is exact for indices below `series.len() - order`.
    pub fn apply_series(&self, series: &[BigRational]) -> Vec<BigRational> {
        let order = self.order().unwrap_or(0);
        let len = series.len().saturating_sub(order);
        let mut out = vec![BigRational::zero(); len];
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = BigRational::from_integer(c.clone());
                // z^j D^i f has coefficient (m+i)!/m! f_{m+i} at z^{m+j}
                for (n, slot) in out.iter_mut().enumerate().skip(j) {
                    let m = n - j;
                    let ff: BigInt = (m + 1..=m + i).map(BigInt::from).product();
                    *slot += &c * BigRational::from_integer(ff) * &series[m + i];
                }
            }
        }
        out
    }

    /// True when `self = c * other` for some nonzero rational `c`.
    pub fn equal_up_to_scalar(&self, other: &DiffOperator) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let pivot = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .find_map(|(a, b)| a.leading().cloned().zip(b.leading().cloned()));
        let Some((ca, cb)) = pivot else {
            return self.is_zero() && other.is_zero();
        };
        self.scale(&cb) == other.scale(&ca)
    }

    /// Strips the identically-zero low-order coefficients.
    ///
    /// Returns the operator acting on the `shift`-th derivative, and `shift`.
    pub fn reduce_order(&self) -> (DiffOperator, usize) {
        let shift = self.coeffs.iter().take_while(|p| p.is_zero()).count();
        (DiffOperator::new(self.coeffs[shift..].to_vec()), shift)
    }

    pub fn to_latex(&self) -> String {
        self.render(|p, i| {
            let d = match i {
                0 => String::new(),
                1 => " D".to_string(),
                _ => format!(" D^{{{i}}}"),
            };
            format!("\\left({}\\right){d}", p.to_latex())
        })
    }

    fn render(&self, term: impl Fn(&IntPoly, usize) -> String) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| term(p, i))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|p, i| format!("({p})*D^{i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn commutation_rule() {
        let dz = DiffOperator::d().compose(&DiffOperator::poly(IntPoly::z()));
        assert_eq!(dz, DiffOperator::new(vec![p(&[1]), p(&[0, 1])]));
        assert_eq!(DiffOperator::d().compose(&DiffOperator::d()), DiffOperator::d_pow(2));
        // D^2 z = z D^2 + 2 D
        let d2z = DiffOperator::d_pow(2).compose(&DiffOperator::poly(IntPoly::z()));
        assert_eq!(d2z, DiffOperator::new(vec![p(&[]), p(&[2]), p(&[0, 1])]));
    }

    #[test]
    fn l1_times_d() {
        let l1 = DiffOperator::new(vec![p(&[-1]), p(&[1, -2])]);
        let got = l1.compose(&DiffOperator::d());
        assert_eq!(got, DiffOperator::new(vec![p(&[]), p(&[-1]), p(&[1, -2])]));
    }

    #[test]
    fn composition_is_associative() {
        let a = DiffOperator::new(vec![p(&[1, 2]), p(&[0, 0, 3]), p(&[-1, 1])]);
        let b = DiffOperator::new(vec![p(&[0, 1, 1]), p(&[5])]);
        let c = DiffOperator::new(vec![p(&[2, 0, 0, 1]), p(&[]), p(&[1, -1])]);
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn composition_matches_application() {
        let a = DiffOperator::new(vec![p(&[1, 2]), p(&[0, 0, 3]), p(&[-1, 1])]);
        let b = DiffOperator::new(vec![p(&[0, 1, 1]), p(&[5, -3])]);
        let f: Vec<BigRational> =
            (0..20).map(|n| BigRational::new(BigInt::from(n * n + 1), BigInt::from(n + 2))).collect();
        let lhs = a.compose(&b).apply_series(&f);
        let rhs = a.apply_series(&b.apply_series(&f));
        assert_eq!(lhs[..rhs.len()], rhs[..]);
    }

    #[test]
    fn scalar_equality_and_display() {
        let a = DiffOperator::new(vec![p(&[-1]), p(&[1, -2])]);
        assert!(a.equal_up_to_scalar(&a.scale(&BigInt::from(-3))));
        assert!(!a.equal_up_to_scalar(&DiffOperator::d()));
        assert_eq!(a.to_string(), "(1 - 2*z)*D^1 + (-1)*D^0");
        assert_eq!(a.to_latex(), "\\left(1 - 2 z\\right) D + \\left(-1\\right)");
        assert_eq!(DiffOperator::zero().to_string(), "0");
    }

    #[test]
    fn reduce_strips_low_terms() {
        let a = DiffOperator::new(vec![p(&[]), p(&[]), p(&[1]), p(&[0, 1])]);
        let (r, s) = a.reduce_order();
        assert_eq!(s, 2);
        assert_eq!(r.order(), Some(1));
    }
}
