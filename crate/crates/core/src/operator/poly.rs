use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial in `z` over the integers, ascending degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64s(&[c])
    }

    /// The indeterminate `z`.
    pub fn z() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&BigInt::from(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `t`-th derivative.
    pub fn derivative_n(&self, t: usize) -> Self {
        (0..t).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `p(c * z)`.
    pub fn substitute_scaled(&self, c: &BigInt) -> Self {
        let mut pow = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }

    /// Sign of the leading coefficient, or 0 for the zero polynomial.
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
            None => 0,
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(IntPoly::one(), |acc, _| &acc * self)
    }

    pub fn to_latex(&self) -> String {
        self.render("z", true)
    }

    fn render(&self, var: &str, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ if latex => format!("{var}^{{{i}}}"),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if latex {
                out.push_str(&format!("{mag} {mono}"));
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("z", false))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        -&self
    }
}

/// Polynomial over the rationals, used where exact division is needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_int(p: &IntPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Remainder of division by a nonzero `divisor`.
    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] / &lead;
            if !q.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + i;
                    r[idx] = &r[idx] - &q * d;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    /// Sign at `+infinity`.
    pub fn sign_at_infinity(&self) -> i32 {
        self.coeffs.last().map_or(0, |c| if c.is_positive() { 1 } else { -1 })
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// Sturm chain of `p`.
pub fn sturm_chain(p: &IntPoly) -> Vec<RatPoly> {
    let p0 = RatPoly::from_int(p);
    let p1 = p0.derivative();
    let mut chain = vec![p0, p1];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut prev = 0;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

/// Number of distinct real roots of `p` in `(a, +infinity)`, with `p(a) != 0`.
pub fn distinct_real_roots_above(p: &IntPoly, a: &BigRational) -> usize {
    let chain = sturm_chain(p);
    let at_a = sign_changes(chain.iter().map(|q| q.sign_at(a)));
    let at_inf = sign_changes(chain.iter().map(|q| q.sign_at_infinity()));
    at_a - at_inf
}

/// Chebyshev polynomial of the first kind.
pub fn chebyshev_t(n: usize) -> IntPoly {
    chebyshev(n, IntPoly::one(), IntPoly::z())
}

/// Chebyshev polynomial of the second kind.
pub fn chebyshev_u(n: usize) -> IntPoly {
    chebyshev(n, IntPoly::one(), IntPoly::from_i64s(&[0, 2]))
}

fn chebyshev(n: usize, p0: IntPoly, p1: IntPoly) -> IntPoly {
    if n == 0 {
        return p0;
    }
    let two_z = IntPoly::from_i64s(&[0, 2]);
    let (mut a, mut b) = (p0, p1);
    for _ in 1..n {
        let c = &(&two_z * &b) - &a;
        a = b;
        b = c;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let p = IntPoly::from_i64s(&[1, -2]);
        let q = IntPoly::from_i64s(&[0, 1, 1]);
        assert_eq!(&p + &q, IntPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(&p * &q, IntPoly::from_i64s(&[0, 1, -1, -2]));
        assert_eq!((&p - &p).degree(), None);
        assert_eq!(q.derivative(), IntPoly::from_i64s(&[1, 2]));
        assert_eq!(IntPoly::from_i64s(&[1, 0, 0]).degree(), Some(0));
        assert_eq!(p.eval_i64(3), BigInt::from(-5));
        assert_eq!(p.to_string(), "1 - 2*z");
        assert_eq!(IntPoly::from_i64s(&[0, -1, 3]).to_string(), "-z + 3*z^2");
        assert_eq!(IntPoly::from_i64s(&[0, 0, 3]).to_latex(), "3 z^{2}");
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev_u(2), IntPoly::from_i64s(&[-1, 0, 4]));
        assert_eq!(chebyshev_u(3), IntPoly::from_i64s(&[0, -4, 0, 8]));
        assert_eq!(chebyshev_t(2), IntPoly::from_i64s(&[-1, 0, 2]));
        assert_eq!(chebyshev_t(0), IntPoly::one());
        assert_eq!(chebyshev_u(1), IntPoly::from_i64s(&[0, 2]));
    }

    #[test]
    fn chebyshev_u_roots_are_cosines() {
        for k in 1..=12 {
            let u = chebyshev_u(k);
            let x = (std::f64::consts::PI / (k as f64 + 1.0)).cos();
            assert!(u.eval_f64(x).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn sturm_counts_roots() {
        // (z - 1)(z - 2)(z + 3)
        let p = &(&IntPoly::from_i64s(&[-1, 1]) * &IntPoly::from_i64s(&[-2, 1])) * &IntPoly::from_i64s(&[3, 1]);
        let zero = BigRational::zero();
        assert_eq!(distinct_real_roots_above(&p, &zero), 2);
        let minus_ten = BigRational::from_integer(BigInt::from(-10));
        assert_eq!(distinct_real_roots_above(&p, &minus_ten), 3);
        // z^2 + 1 has none
        assert_eq!(distinct_real_roots_above(&IntPoly::from_i64s(&[1, 0, 1]), &minus_ten), 0);
    }
}
