//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rational = num_rational::BigRational;

pub fn int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `a/b` or a bare integer `a`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(int(t.parse::<BigInt>().map_err(|_| err())?)),
    }
}

pub fn lcm_denominators<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn max_abs(values: &[Rational]) -> Rational {
    values.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
}

/// The rational with the smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(
        &(Rational::one() / (hi - &fl)),
        &(Rational::one() / (lo - &fl)),
    );
    fl + Rational::one() / inner
}

/// Recovers the unique rational with denominator at most `max_den` inside `[lo, hi]`,
/// assuming the bracket is narrower than `1/max_den^2`.
pub fn reconstruct(lo: &Rational, hi: &Rational, max_den: &BigInt) -> Option<Rational> {
    let c = simplest_between(lo, hi);
    if c.denom() <= max_den {
        Some(c)
    } else {
        None
    }
}

/// Smallest integer not below `r`.
pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(fmt_rational(&int(0)), "0/1");
        assert_eq!(fmt_rational(&rat(-2, 6)), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
        assert_eq!(simplest_between(&rat(5, 2), &rat(5, 2)), rat(5, 2));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), int(0));
    }

    #[test]
    fn reconstruction_respects_bound() {
        let lo = rat(2, 7) - rat(1, 200);
        let hi = rat(2, 7) + rat(1, 200);
        assert_eq!(reconstruct(&lo, &hi, &BigInt::from(7)), Some(rat(2, 7)));
        assert_eq!(reconstruct(&lo, &hi, &BigInt::from(3)), None);
    }
}
