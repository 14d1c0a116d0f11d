//! Parsing and formatting of exact rationals (`"p/q"`, integers, finite decimals).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ParseError;

/// Parses `"3"`, `"-2/6"` or `"0.125"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let t = text.trim();
    let bad = || ParseError::Rational(text.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = BigRational::from_integer(int_part.abs_sub_sign(negative))
            + BigRational::new(frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>, ParseError> {
    text.split(',').map(parse_rational).collect()
}

/// Parses a rational or decimal and returns it as a double.
pub fn parse_real(text: &str) -> Result<f64, ParseError> {
    parse_rational(text)?
        .to_f64()
        .ok_or_else(|| ParseError::Rational(text.to_string()))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

trait AbsSubSign {
    fn abs_sub_sign(self, negative: bool) -> BigInt;
}

impl AbsSubSign for BigInt {
    fn abs_sub_sign(self, negative: bool) -> BigInt {
        if negative {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -2/6 ").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(".25").unwrap(), rat(1, 4));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "a", "1.", "1/2/3", "1.2e3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(3, 9)), "1/3");
    }
}
