//! Dominant singularity, critical exponents and numerical constants.
//!
//! Counts of right height at most `k` behave like `const * n! * growth^n * n^exponent`, with
//! `growth = 4 cos^2(pi/(k+3))`.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dfinite::{seed, stream};
use crate::enumerate::factorial;
use crate::error::{Error, Result};
use crate::operator::{build_l, build_m, IntPoly};
use crate::Family;

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityData {
    pub k: usize,
    pub family: Family,
    pub rho: f64,
    pub growth: f64,
    pub delta1: f64,
    /// `k/2`, present when the polynomial identity behind it has been checked.
    pub delta1_exact: Option<BigRational>,
    /// `delta1` recomputed as a ratio of coefficient polynomials at `rho`.
    pub delta1_numeric: f64,
    pub indicial_roots: Vec<f64>,
    pub exponent: f64,
}

fn cos2(k: usize) -> f64 {
    let c = (PI / (k as f64 + 3.0)).cos();
    c * c
}

pub fn rho(k: usize) -> f64 {
    1.0 / (4.0 * cos2(k))
}

pub fn growth(k: usize) -> f64 {
    4.0 * cos2(k)
}

/// Closed form of `delta1` for the compacted family.
pub fn compacted_delta1(k: usize) -> f64 {
    let kk = k as f64 + 3.0;
    k as f64 / 2.0 + 1.0 - 1.0 / kk - (0.25 - 1.0 / kk) / cos2(k)
}

/// `p(x) / q'(x)` evaluated exactly at the rational value of `x`.
fn ratio_at(p: &IntPoly, q: &IntPoly, x: f64) -> f64 {
    let x = BigRational::from_float(x).expect("finite");
    let den = q.derivative().eval_rational(&x);
    if den.is_zero() {
        return f64::NAN;
    }
    (p.eval_rational(&x) / den).to_f64().unwrap_or(f64::NAN)
}

pub fn singularity_data(k: usize, family: Family) -> SingularityData {
    if k == 0 {
        return SingularityData {
            k,
            family,
            rho: 1.0,
            growth: 1.0,
            delta1: 0.0,
            delta1_exact: Some(BigRational::zero()),
            delta1_numeric: 0.0,
            indicial_roots: vec![0.0],
            exponent: 0.0,
        };
    }
    let r = rho(k);
    match family {
        Family::Relaxed => {
            let l = build_l(k);
            let (lead, sub) = (l.coeff(k), l.coeff(k - 1));
            let exact = (sub.scale_i64(2) == lead.derivative().scale_i64(k as i64))
                .then(|| BigRational::new(BigInt::from(k), BigInt::from(2)));
            let delta1 = k as f64 / 2.0;
            let mut roots: Vec<f64> = (0..k.saturating_sub(1)).map(|i| i as f64).collect();
            roots.push(delta1 - 1.0);
            SingularityData {
                k,
                family,
                rho: r,
                growth: 1.0 / r,
                delta1,
                delta1_exact: exact,
                delta1_numeric: ratio_at(&sub, &lead, r),
                indicial_roots: roots,
                exponent: -delta1,
            }
        }
        Family::Compacted => {
            let m = build_m(k);
            let delta1 = compacted_delta1(k);
            let mut roots: Vec<f64> = (0..k).map(|i| i as f64).collect();
            roots.push(k as f64 - delta1);
            SingularityData {
                k,
                family,
                rho: r,
                growth: 1.0 / r,
                delta1,
                delta1_exact: None,
                delta1_numeric: ratio_at(&m.coeff(k), &m.coeff(k + 1), r),
                indicial_roots: roots,
                exponent: delta1 - k as f64 - 1.0,
            }
        }
    }
}

/// Difference of the compacted and relaxed exponents.
pub fn proportion_exponent(k: usize) -> f64 {
    let kk = k as f64 + 3.0;
    -1.0 / kk - (0.25 - 1.0 / kk) / cos2(k)
}

/// Growth and exponents as printed to three decimals, for `k = 1..=7`.
pub const REFERENCE_TABLE: [(usize, f64, f64, f64); 7] = [
    (1, 2.000, -0.750, -0.5),
    (2, 2.618, -1.276, -1.0),
    (3, 3.000, -1.778, -1.5),
    (4, 3.246, -2.275, -2.0),
    (5, 3.414, -2.772, -2.5),
    (6, 3.532, -3.268, -3.0),
    (7, 3.618, -3.766, -3.5),
];

pub const TABLE_TOLERANCE: f64 = 5e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub k: usize,
    pub growth: f64,
    pub alpha: f64,
    pub beta: f64,
    pub ref_growth: f64,
    pub ref_alpha: f64,
    pub ref_beta: f64,
}

impl Table1Row {
    pub fn pass(&self) -> bool {
        (self.growth - self.ref_growth).abs() <= TABLE_TOLERANCE
            && (self.alpha - self.ref_alpha).abs() <= TABLE_TOLERANCE
            && (self.beta - self.ref_beta).abs() <= TABLE_TOLERANCE
    }
}

pub fn table1() -> Vec<Table1Row> {
    REFERENCE_TABLE
        .iter()
        .map(|&(k, rg, ra, rb)| Table1Row {
            k,
            growth: singularity_data(k, Family::Relaxed).growth,
            alpha: singularity_data(k, Family::Compacted).exponent,
            beta: singularity_data(k, Family::Relaxed).exponent,
            ref_growth: rg,
            ref_alpha: ra,
            ref_beta: rb,
        })
        .collect()
}

/// Aligned text rendering with a PASS/FAIL column.
pub fn format_table1(rows: &[Table1Row]) -> String {
    let mut out = format!("{:>2}  {:>7}  {:>7}  {:>7}  {}\n", "k", "r", "alpha", "beta", "check");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>2}  {:>7.3}  {:>7.3}  {:>7.3}  {}",
            r.k,
            r.growth,
            r.alpha,
            r.beta,
            if r.pass() { "PASS" } else { "FAIL" }
        );
    }
    out
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * LN_2
}

/// `ln(count / n!) - n ln(growth)` for each `n` in `ns`.
fn log_scaled(counts: &[BigInt], ns: &[usize], growth: f64) -> Vec<f64> {
    ns.iter()
        .map(|&n| {
            let c = counts[n].to_biguint().expect("counts are nonnegative");
            ln_big(&c) - ln_big(&factorial(n)) - n as f64 * growth.ln()
        })
        .collect()
}

/// `u_n = count / (n! growth^n n^exponent)` for `n` in `ns`.
pub fn normalized(counts: &[BigInt], ns: &[usize], growth: f64, exponent: f64) -> Vec<(usize, f64)> {
    let logs = log_scaled(counts, ns, growth);
    ns.iter().zip(logs).map(|(&n, l)| (n, (l - exponent * (n as f64).ln()).exp())).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantFit {
    pub estimate: f64,
    /// `(n, u_n)` on the ladder, ascending in `n`.
    pub ladder: Vec<(usize, f64)>,
    /// Highest-order extrapolants, ascending in the finest `n` used.
    pub extrapolants: Vec<f64>,
    pub warning: Option<String>,
}

pub const RICHARDSON_ORDER: usize = 3;
pub const LADDER_STEPS: usize = 5;

/// Richardson extrapolation in `1/n` on values at `n, 2n, 4n, ...`.
///
/// Returns every extrapolant of order `order`.
pub fn richardson(values: &[f64], order: usize) -> Vec<f64> {
    let mut col = values.to_vec();
    for m in 1..=order.min(values.len().saturating_sub(1)) {
        let f = (1u64 << m) as f64;
        col = col.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    col
}

/// Estimates the constant in front of `n! growth^n n^exponent`.
pub fn fit_constant(k: usize, family: Family, n_max: usize) -> Result<ConstantFit> {
    let min = 1 << (LADDER_STEPS - 1);
    if n_max < min {
        return Err(Error::Domain(format!("n_max must be at least {min}")));
    }
    let counts = stream(&seed(k, family, None)?, n_max)?;
    Ok(fit_from_counts(&counts, &singularity_data(k, family), n_max))
}

pub fn fit_from_counts(counts: &[BigInt], sd: &SingularityData, n_max: usize) -> ConstantFit {
    let ns: Vec<usize> = (0..LADDER_STEPS).rev().map(|j| n_max >> j).collect();
    let ladder = normalized(counts, &ns, sd.growth, sd.exponent);
    let values: Vec<f64> = ladder.iter().map(|&(_, u)| u).collect();
    let extrapolants = richardson(&values, RICHARDSON_ORDER);
    let estimate = *extrapolants.last().expect("ladder is long enough");
    let warning = match extrapolants.as_slice() {
        [.., a, b] if ((b - a) / b).abs() > 1e-3 => {
            Some(format!("extrapolants {a:.6} and {b:.6} differ by more than 1e-3 relatively"))
        }
        _ => None,
    };
    ConstantFit { estimate, ladder, extrapolants, warning }
}

/// Least-squares slope of `ln(count / (n! growth^n))` against `ln n` over `lo..=hi`.
pub fn regress_exponent(counts: &[BigInt], growth: f64, lo: usize, hi: usize) -> f64 {
    let step = ((hi - lo) / 64).max(1);
    let ns: Vec<usize> = (lo..=hi).step_by(step).collect();
    let ys = log_scaled(counts, &ns, growth);
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let len = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / len, ys.iter().sum::<f64>() / len);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `n,u_n` lines for plotting.
pub fn plot_csv(points: &[(usize, f64)]) -> String {
    let mut out = String::from("n,u_n\n");
    for (n, u) in points {
        let _ = writeln!(out, "{n},{u:.12e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relaxed_k2() {
        let sd = singularity_data(2, Family::Relaxed);
        assert!((sd.growth - 2.618_033_988_749_895).abs() < 1e-12);
        assert_eq!(sd.exponent, -1.0);
        assert_eq!(sd.delta1_exact, Some(BigRational::from_integer(BigInt::from(1))));
        assert!((sd.delta1_numeric - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compacted_small_k() {
        let sd = singularity_data(1, Family::Compacted);
        assert!((sd.delta1 - 1.25).abs() < 1e-12);
        assert!((sd.exponent + 0.75).abs() < 1e-12);
        assert!((sd.delta1_numeric - 1.25).abs() < 1e-12);
        let sd3 = singularity_data(3, Family::Compacted);
        assert!((sd3.growth - 3.0).abs() < 1e-12);
        assert!((sd3.exponent + 16.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn rho_is_a_root_of_the_leading_coefficient() {
        for k in 1..=20 {
            let lead = build_l(k).coeff(k);
            assert!(lead.eval_f64(rho(k)).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn rho_decreases() {
        for k in 1..30 {
            assert!(rho(k + 1) < rho(k));
            assert!(rho(k) > 0.25);
        }
    }

    #[test]
    fn table_matches_exact_expressions() {
        let c2 = |d: f64| (PI / d).cos().powi(2);
        let exact_alpha = [
            -0.75,
            -6.0 / 5.0 - 1.0 / (20.0 * c2(5.0)),
            -16.0 / 9.0,
            -15.0 / 7.0 - 3.0 / (28.0 * c2(7.0)),
            -21.0 / 8.0 - 1.0 / (8.0 * c2(8.0)),
            -28.0 / 9.0 - 5.0 / (36.0 * c2(9.0)),
            -18.0 / 5.0 - 3.0 / (20.0 * c2(10.0)),
        ];
        let rows = table1();
        assert_eq!(rows.len(), 7);
        for (row, a) in rows.iter().zip(exact_alpha) {
            assert!((row.alpha - a).abs() < 1e-12, "k={}", row.k);
            assert!((row.growth - 4.0 * c2(row.k as f64 + 3.0)).abs() < 1e-12);
            assert_eq!(row.beta, -(row.k as f64) / 2.0);
            // printed to three decimals, sometimes truncated rather than rounded
            assert!((row.growth - row.ref_growth).abs() < 1e-3);
            assert!((row.alpha - row.ref_alpha).abs() < 1e-3);
        }
        let text = format_table1(&rows);
        assert_eq!(text.lines().count(), 8);
        assert!(text.lines().nth(1).unwrap().ends_with("PASS"));
    }

    #[test]
    fn richardson_removes_polynomial_error() {
        // 3 + 1/n - 2/n^2 + 5/n^3 is recovered exactly by order 3
        let vals: Vec<f64> = (0..5)
            .map(|j| {
                let n = (10 << j) as f64;
                3.0 + 1.0 / n - 2.0 / (n * n) + 5.0 / (n * n * n)
            })
            .collect();
        let ex = richardson(&vals, 3);
        assert_eq!(ex.len(), 2);
        assert!((ex[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn height_zero_is_exact() {
        let fit = fit_constant(0, Family::Relaxed, 64).unwrap();
        assert!(fit.ladder.iter().all(|&(_, u)| (u - 1.0).abs() < 1e-12));
        assert!((fit.estimate - 1.0).abs() < 1e-12);
        assert!(fit.warning.is_none());
    }

    #[test]
    fn ln_big_matches_f64() {
        let x = BigUint::from(123_456_789_u64) << 200;
        assert!((ln_big(&x) - (123_456_789f64.ln() + 200.0 * LN_2)).abs() < 1e-12);
        assert!((ln_big(&BigUint::from(10u32)) - 10f64.ln()).abs() < 1e-15);
    }
}
