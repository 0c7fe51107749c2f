//! Exact rational scalars.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator, so equality is exact structural equality. The textual
//! form used on every JSON surface is `"p/q"`, or just `"p"` when `q = 1`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always reduced, denominator > 0.
pub type Rational = BigRational;

/// Shorthand constructor from machine integers. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Canonical string form: `"p/q"`, or `"p"` when the denominator is 1.
pub fn to_string(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses the canonical form. Accepts an optional leading sign, `"p"` or
/// `"p/q"`, and reduces non-canonical input such as `"2/4"`.
pub fn parse(input: &str) -> Result<Rational> {
    let bad = |message: &str| Error::InvalidRational {
        input: input.to_string(),
        message: message.to_string(),
    };
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(bad("empty string"));
    }
    let (num_str, den_str) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let denom: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| bad("denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad("denominator is zero"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Least common multiple of two positive integers.
pub(crate) fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num::Integer;
    a.lcm(b)
}

/// True when the value is a (weakly) negative rational; used for parameter gates.
pub fn is_at_most_minus_one(value: &Rational) -> bool {
    *value <= -BigRational::one()
}

/// Absolute value, re-exported for callers that avoid importing `Signed`.
pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_display() {
        assert_eq!(to_string(&rat(1, 2)), "1/2");
        assert_eq!(to_string(&rat(-1, 2)), "-1/2");
        assert_eq!(to_string(&rat(1, -2)), "-1/2");
        assert_eq!(to_string(&rat(4, 2)), "2");
        assert_eq!(to_string(&int(0)), "0");
        assert_eq!(to_string(&rat(2, 4)), "1/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "-7", "1/3", "-8/55", "22/7"] {
            let v = parse(s).unwrap();
            assert_eq!(to_string(&v), s);
        }
        assert_eq!(parse("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse(" 3 / 9 ").unwrap(), rat(1, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "a", "1/2/3", "1.5", "--3"] {
            assert!(parse(s).is_err(), "expected error for {s:?}");
        }
    }

    #[test]
    fn arithmetic_round_trip() {
        // (a/b + c/d) - c/d = a/b exactly.
        let a = rat(3, 7);
        let c = rat(-5, 11);
        assert_eq!(&(&a + &c) - &c, a);
    }
}
