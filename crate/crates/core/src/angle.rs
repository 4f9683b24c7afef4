//! Exact angles measured in turns, reduced modulo 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// An angle in turns, kept canonical in the half-open interval `[0, 1)`.
///
/// Angles form a group under addition mod 1. The inner rational is always
/// in lowest terms with a positive denominator (guaranteed by `BigRational`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(BigRational);

/// Errors from parsing a fraction literal.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseAngleError {
    /// The text is not of the form `p/q` or `p` with integer parts.
    #[error("malformed fraction `{0}`: expected `p/q` or an integer")]
    Malformed(String),
    /// The denominator is zero.
    #[error("fraction `{0}` has denominator zero")]
    ZeroDenominator(String),
    /// The fraction is not in lowest terms or has a non-positive denominator.
    #[error("fraction `{0}` is not reduced: write it in lowest terms with a positive denominator")]
    NotReduced(String),
}

impl Angle {
    /// Builds an angle from any rational number of turns, reducing mod 1.
    pub fn new(turns: BigRational) -> Self {
        Angle(reduce_mod_1(turns))
    }

    /// Builds an angle from an integer fraction `numer / denom` of a turn.
    ///
    /// Panics if `denom == 0`.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "angle denominator must be nonzero");
        Angle::new(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// The zero angle.
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    /// The canonical representative in `[0, 1)`.
    pub fn turns(&self) -> &BigRational {
        &self.0
    }

    /// Consumes the angle, returning the representative in `[0, 1)`.
    pub fn into_turns(self) -> BigRational {
        self.0
    }

    /// True when this is the zero angle.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplies the angle by a nonnegative integer, mod 1.
    pub fn scale(&self, k: u32) -> Self {
        Angle::new(&self.0 * BigInt::from(k))
    }
}

/// Reduces a rational to its representative in `[0, 1)`.
pub fn reduce_mod_1(t: BigRational) -> BigRational {
    let f = t.floor();
    t - f
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl Add for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        Angle::new(&self.0 + &rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl Sub for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        Angle::new(&self.0 - &rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

impl Mul<u32> for &Angle {
    type Output = Angle;
    fn mul(self, k: u32) -> Angle {
        self.scale(k)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({})", self)
    }
}

impl FromStr for Angle {
    type Err = ParseAngleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = parse_rational(s)?;
        if reduce_mod_1(r.clone()) != r {
            return Err(ParseAngleError::NotReduced(s.to_string()));
        }
        Ok(Angle(r))
    }
}

/// Formats a rational as `p/q`, always with an explicit denominator.
///
/// Zero prints as `0/1` and one prints as `1/1` so every gap and angle in a
/// document uses the same grammar.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses a fraction literal `p/q` (or a bare integer `p`).
///
/// The fraction must be written in lowest terms with a positive denominator:
/// `2/4` and `1/-2` are rejected so that every rational has exactly one
/// accepted spelling.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseAngleError> {
    let malformed = || ParseAngleError::Malformed(s.to_string());
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = num_str.parse().map_err(|_| malformed())?;
    let denom: BigInt = den_str.parse().map_err(|_| malformed())?;
    if denom.is_zero() {
        return Err(ParseAngleError::ZeroDenominator(s.to_string()));
    }
    if denom.is_negative() {
        return Err(ParseAngleError::NotReduced(s.to_string()));
    }
    let r = BigRational::new(numer.clone(), denom.clone());
    if r.numer() != &numer || r.denom() != &denom {
        return Err(ParseAngleError::NotReduced(s.to_string()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_representative() {
        assert_eq!(Angle::new(rat(3, 2)), Angle::from_ratio(1, 2));
        assert_eq!(Angle::new(rat(-1, 3)), Angle::from_ratio(2, 3));
        assert_eq!(Angle::new(rat(7, 1)), Angle::zero());
        assert_eq!(Angle::from_ratio(-5, 3), Angle::from_ratio(1, 3));
    }

    #[test]
    fn group_operations() {
        let a = Angle::from_ratio(2, 3);
        let b = Angle::from_ratio(1, 2);
        assert_eq!(&a + &b, Angle::from_ratio(1, 6));
        assert_eq!(&a - &b, Angle::from_ratio(1, 6));
        assert_eq!(-a.clone(), Angle::from_ratio(1, 3));
        assert_eq!(a.scale(3), Angle::zero());
        assert_eq!(Angle::from_ratio(1, 6).scale(2), Angle::from_ratio(1, 3));
    }

    #[test]
    fn parse_accepts_reduced_fractions() {
        assert_eq!("1/2".parse::<Angle>().unwrap(), Angle::from_ratio(1, 2));
        assert_eq!("0/1".parse::<Angle>().unwrap(), Angle::zero());
        assert_eq!("0".parse::<Angle>().unwrap(), Angle::zero());
        assert_eq!(
            "5/7".parse::<Angle>().unwrap(),
            Angle::from_ratio(5, 7)
        );
    }

    #[test]
    fn parse_rejects_unreduced_and_malformed() {
        assert!(matches!(
            "2/4".parse::<Angle>(),
            Err(ParseAngleError::NotReduced(_))
        ));
        assert!(matches!(
            "1/0".parse::<Angle>(),
            Err(ParseAngleError::ZeroDenominator(_))
        ));
        assert!(matches!(
            "1/-2".parse::<Angle>(),
            Err(ParseAngleError::NotReduced(_))
        ));
        assert!(matches!(
            "".parse::<Angle>(),
            Err(ParseAngleError::Malformed(_))
        ));
        assert!(matches!(
            "a/b".parse::<Angle>(),
            Err(ParseAngleError::Malformed(_))
        ));
        assert!(matches!(
            "1/2/3".parse::<Angle>(),
            Err(ParseAngleError::Malformed(_))
        ));
        // 3/2 is a valid rational but not a canonical angle.
        assert!(matches!(
            "3/2".parse::<Angle>(),
            Err(ParseAngleError::NotReduced(_))
        ));
    }

    #[test]
    fn display_always_shows_denominator() {
        assert_eq!(Angle::zero().to_string(), "0/1");
        assert_eq!(Angle::from_ratio(1, 2).to_string(), "1/2");
        assert_eq!(format_rational(&rat(1, 1)), "1/1");
    }
}
