//! Exact rational scalars and their text form.
//!
//! Every number in the library is a [`Rational`]. The serialized form is
//! always `"num/den"`; parsing also accepts a bare integer. Decimal points
//! are rejected so that no value ever passes through a float.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"a"`, `"a/b"`, `"-a/b"` (whitespace around the parts allowed).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let valid = |p: &str, signed: bool| {
        let digits = if signed { p.strip_prefix('-').unwrap_or(p) } else { p };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(err());
    }
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Serialized form: always `num/den` with the reduced denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Compact display form: integers without the `/1`.
pub fn fmt_compact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        fmt_rational(r)
    }
}

/// Display-only decimal approximation, rounded half away from zero.
pub fn fmt_decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let abs = rounded.abs();
    let (ip, fp) = abs.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("coordinate out of i64 range")
}

pub fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().expect("coordinate out of i64 range")
}

/// Least common multiple of the denominators of `vals` (1 for an empty slice).
pub fn denominator_lcm<'a>(vals: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    vals.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Rational], x: &[i64]) -> Rational {
    debug_assert_eq!(a.len(), x.len());
    a.iter()
        .zip(x)
        .filter(|(_, &xi)| xi != 0)
        .fold(zero(), |acc, (c, &xi)| acc + c * int(xi))
}

pub fn to_rationals(x: &[i64]) -> Vec<Rational> {
    x.iter().map(|&v| int(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("4/5").unwrap(), rat(4, 5));
        assert_eq!(parse_rational(" -3 / 10 ").unwrap(), rat(-3, 10));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(fmt_rational(&int(3)), "3/1");
        assert_eq!(fmt_compact(&int(3)), "3");
        assert_eq!(fmt_compact(&rat(-7, 6)), "-7/6");
    }

    #[test]
    fn decimal_display() {
        assert_eq!(fmt_decimal(&rat(35, 12), 4), "2.9167");
        assert_eq!(fmt_decimal(&rat(-1, 3), 3), "-0.333");
        assert_eq!(fmt_decimal(&int(2), 2), "2.00");
        assert_eq!(fmt_decimal(&rat(-1, 1000), 2), "0.00");
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(floor_i64(&rat(-1, 2)), -1);
        assert_eq!(ceil_i64(&rat(-1, 2)), 0);
        assert_eq!(floor_i64(&int(3)), 3);
        assert_eq!(denominator_lcm(&[rat(1, 4), rat(1, 6)]), BigInt::from(12));
    }
}
