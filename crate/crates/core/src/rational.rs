//! Small helpers for exact rationals and their text forms.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn big_to_rational(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Always "num/den", including integers ("1/1").
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// "num/den", or just "num" for integers.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        ratio_string(r)
    }
}

/// Parses "n" or "n/d".
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let err = |reason: &str| Error::Parse {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
    let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        assert_eq!(ratio_string(&ratio(2, 4)), "1/2");
        assert_eq!(ratio_string(&ratio(3, 3)), "1/1");
        assert_eq!(rational_string(&ratio(6, 3)), "2");
        assert_eq!(parse_rational("11/36").unwrap(), ratio(11, 36));
        assert_eq!(parse_rational("5").unwrap(), ratio(5, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
