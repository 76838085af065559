//! Scalar fields used by every construction.
//!
//! Two fields are supported: exact rationals over arbitrary-precision
//! integers (the oracle path) and binary64 floats (the fast path). Quantities
//! that are irrational in general, such as `‖x‖_p` for `p ≠ 1`, are returned
//! as [`Approx`] values that carry an exactness flag. Rational approximations
//! are decimal with at least [`SIGNIFICANT_DIGITS`] significant digits and are
//! rounded in a documented direction so that inequalities built from them stay
//! valid.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde_json::Number;

use crate::echelon::{self, Echelon, SparseRow};

pub type Rational = BigRational;

/// Exponent `p` of an `ℓ_p` model, stored exactly.
pub type Exponent = Ratio<u64>;

/// Significant digits kept when an exact rational result is impossible.
pub const SIGNIFICANT_DIGITS: u32 = 50;

/// Relative threshold under which a float is treated as zero during elimination.
pub const FLOAT_PIVOT_TOL: f64 = 1e-10;

/// A value together with a flag telling whether it is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Approx<S> {
    pub value: S,
    pub exact: bool,
}

impl<S> Approx<S> {
    pub fn exact(value: S) -> Self {
        Approx { value, exact: true }
    }

    pub fn approximate(value: S) -> Self {
        Approx {
            value,
            exact: false,
        }
    }
}

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Signed + Send + Sync + 'static
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(value: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// `Σ |v|^p`, rounded up when not representable.
    fn power_sum<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self>;

    /// `(Σ |v|^p)^(1/p)`, rounded up when not representable.
    fn lp_norm<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self>;

    /// A positive `c ≤ 1 / ‖v‖_p`, equal to it when the flag is exact.
    /// Undefined for the empty vector.
    fn reciprocal_lp_norm<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self>;

    /// Reduced row echelon form of the given sparse rows.
    fn echelon(rows: Vec<SparseRow<Self>>) -> Echelon<Self>;

    /// Zero test relative to `scale`; exact fields ignore the scale.
    fn negligible(&self, scale: f64) -> bool;

    /// `[num, den]` for exact values, `[x]` for floats.
    fn to_json_parts(&self) -> Vec<Number>;

    /// Inverse of [`Scalar::to_json_parts`]. Exact fields reject floats.
    fn from_json_parts(parts: &[Number]) -> std::result::Result<Self, String>;
}

fn parse_integer(n: &Number) -> std::result::Result<BigInt, String> {
    n.to_string()
        .parse()
        .map_err(|_| format!("expected an integer, got {n}"))
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn power_sum<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self> {
        let (a, b) = split_exponent(p);
        let mut exact = true;
        let mut total = Rational::zero();
        for v in values {
            let powered = Pow::pow(v.abs(), a);
            if b == 1 {
                total += powered;
            } else {
                let term = root_up(&powered, b);
                exact &= term.exact;
                total += term.value;
            }
        }
        Approx {
            value: total,
            exact,
        }
    }

    fn lp_norm<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self> {
        let (a, b) = split_exponent(p);
        let sum = Self::power_sum(values, p);
        let root = root_up(&Pow::pow(sum.value, b), a);
        Approx {
            value: root.value,
            exact: sum.exact && root.exact,
        }
    }

    fn reciprocal_lp_norm<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self> {
        let (a, b) = split_exponent(p);
        let sum = Self::power_sum(values, p);
        debug_assert!(
            sum.value.is_positive(),
            "reciprocal norm of the zero vector"
        );
        let powered = Pow::pow(sum.value, b);
        if sum.exact {
            if let Some(norm) = exact_root(&powered, a) {
                return Approx::exact(norm.recip());
            }
        }
        // sum is an upper bound, so rounding the root of its reciprocal down
        // keeps c below the true reciprocal norm.
        let target = powered.recip();
        let digits = digits_for(&target, a);
        Approx::approximate(decimal_root(&target, a, digits, false))
    }

    fn echelon(rows: Vec<SparseRow<Self>>) -> Echelon<Self> {
        echelon::exact_echelon(rows)
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_json_parts(&self) -> Vec<Number> {
        [self.numer(), self.denom()]
            .map(|v| Number::from_str(&v.to_string()).expect("integers are valid JSON numbers"))
            .to_vec()
    }

    fn from_json_parts(parts: &[Number]) -> std::result::Result<Self, String> {
        match parts {
            [num, den] => {
                let den = parse_integer(den)?;
                if den.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rational::new(parse_integer(num)?, den))
            }
            [_] => Err("float coordinates are only accepted in float mode".into()),
            _ => Err(format!("expected [num, den], got {} numbers", parts.len())),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(value: &Rational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn power_sum<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self> {
        let total = match integer_exponent(p) {
            Some(k) => values.map(|v| v.abs().powi(k as i32)).sum(),
            None => {
                let pf = exponent_f64(p);
                values.map(|v| v.abs().powf(pf)).sum()
            }
        };
        Approx::approximate(total)
    }

    fn lp_norm<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self> {
        if p == Exponent::one() {
            return Approx::approximate(values.map(|v| v.abs()).sum());
        }
        let sum = Self::power_sum(values, p).value;
        Approx::approximate(sum.powf(1.0 / exponent_f64(p)))
    }

    fn reciprocal_lp_norm<'a>(values: impl Iterator<Item = &'a Self>, p: Exponent) -> Approx<Self> {
        Approx::approximate(1.0 / Self::lp_norm(values, p).value)
    }

    fn echelon(rows: Vec<SparseRow<Self>>) -> Echelon<Self> {
        echelon::float_echelon(rows)
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_PIVOT_TOL * scale.max(f64::MIN_POSITIVE)
    }

    fn to_json_parts(&self) -> Vec<Number> {
        vec![Number::from_f64(*self).expect("finite value")]
    }

    fn from_json_parts(parts: &[Number]) -> std::result::Result<Self, String> {
        let float = |n: &Number| -> std::result::Result<f64, String> {
            n.to_string()
                .parse()
                .map_err(|_| format!("expected a number, got {n}"))
        };
        let value = match parts {
            [x] => float(x)?,
            [num, den] => float(num)? / float(den)?,
            _ => {
                return Err(format!(
                    "expected [x] or [num, den], got {} numbers",
                    parts.len()
                ))
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err("non-finite coordinate".into())
        }
    }
}

pub fn exponent_f64(p: Exponent) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

pub fn integer_exponent(p: Exponent) -> Option<u32> {
    if p.is_integer() {
        u32::try_from(*p.numer()).ok()
    } else {
        None
    }
}

fn split_exponent(p: Exponent) -> (u32, u32) {
    let a = u32::try_from(*p.numer()).expect("exponent numerator exceeds u32");
    let b = u32::try_from(*p.denom()).expect("exponent denominator exceeds u32");
    (a, b)
}

/// `r^(1/n)` if it is rational.
pub fn exact_root(r: &Rational, n: u32) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if n == 1 {
        return Some(r.clone());
    }
    let num = r.numer().nth_root(n);
    if Pow::pow(&num, n) != *r.numer() {
        return None;
    }
    let den = r.denom().nth_root(n);
    if Pow::pow(&den, n) != *r.denom() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `floor` (or `ceil`) of `10^digits · r^(1/n)`, divided by `10^digits`.
pub fn decimal_root(r: &Rational, n: u32, digits: u32, round_up: bool) -> Rational {
    let ten = BigInt::from(10u32);
    let scaled = r.numer() * Pow::pow(&ten, digits * n);
    let (q, rem) = scaled.div_rem(r.denom());
    let mut s = q.nth_root(n);
    if round_up && !(rem.is_zero() && Pow::pow(&s, n) == q) {
        s += 1;
    }
    Rational::new(s, Pow::pow(&ten, digits))
}

fn root_up(r: &Rational, n: u32) -> Approx<Rational> {
    match exact_root(r, n) {
        Some(v) => Approx::exact(v),
        None => Approx::approximate(decimal_root(r, n, digits_for(r, n), true)),
    }
}

/// Decimal places needed so that `r^(1/n)` keeps enough significant digits.
fn digits_for(r: &Rational, n: u32) -> u32 {
    let magnitude = ToPrimitive::to_f64(r).map(|v| v.log10() / n as f64);
    let shift = match magnitude {
        Some(m) if m.is_finite() => (-m).ceil().max(0.0) as u32,
        _ => 40,
    };
    SIGNIFICANT_DIGITS + shift + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn integer_norms_are_exact() {
        let v = [q(3, 1), q(-4, 1)];
        let two = Exponent::from_integer(2);
        let n = Rational::lp_norm(v.iter(), two);
        assert!(n.exact);
        assert_eq!(n.value, q(5, 1));
        let c = Rational::reciprocal_lp_norm(v.iter(), two);
        assert!(c.exact);
        assert_eq!(c.value, q(1, 5));
        let one = Rational::lp_norm(v.iter(), Exponent::one());
        assert_eq!(one.value, q(7, 1));
    }

    #[test]
    fn irrational_norm_is_bracketed() {
        let v = [q(1, 1), q(1, 1)];
        let two = Exponent::from_integer(2);
        let upper = Rational::lp_norm(v.iter(), two);
        assert!(!upper.exact);
        assert!(&upper.value * &upper.value >= q(2, 1));
        let c = Rational::reciprocal_lp_norm(v.iter(), two);
        assert!(!c.exact);
        // c ≤ 1/√2  ⇔  2c² ≤ 1
        assert!(&c.value * &c.value * q(2, 1) <= q(1, 1));
        let err = (Scalar::to_f64(&c.value) - std::f64::consts::FRAC_1_SQRT_2).abs();
        assert!(err < 1e-15);
    }

    #[test]
    fn fractional_exponent_rounds_up() {
        // |4|^(3/2) = 8 exactly; |2|^(3/2) = 2√2 is not rational.
        let p = Exponent::new(3, 2);
        let s = Rational::power_sum([q(4, 1)].iter(), p);
        assert!(s.exact);
        assert_eq!(s.value, q(8, 1));
        let s = Rational::power_sum([q(2, 1)].iter(), p);
        assert!(!s.exact);
        assert!(&s.value * &s.value >= q(8, 1));
        assert!((Scalar::to_f64(&s.value) - 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn decimal_root_rounding() {
        let two = q(2, 1);
        let lo = decimal_root(&two, 2, 10, false);
        let hi = decimal_root(&two, 2, 10, true);
        assert_eq!(&hi - &lo, q(1, 10_000_000_000));
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert_eq!(decimal_root(&q(9, 4), 2, 3, true), q(3, 2));
    }

    #[test]
    fn float_norms() {
        let v = [3.0, 4.0];
        assert_eq!(f64::lp_norm(v.iter(), Exponent::from_integer(2)).value, 5.0);
        assert_eq!(f64::lp_norm(v.iter(), Exponent::one()).value, 7.0);
    }
}
