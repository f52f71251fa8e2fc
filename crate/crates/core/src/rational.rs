//! Arbitrary-precision rational numbers, the carrier of every exact
//! quantity in this crate.
//!
//! `ExactRational` is `num_rational::BigRational`, which already keeps the
//! two invariants we rely on everywhere: the denominator is positive and
//! numerator/denominator are coprime after every operation.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type ExactRational = num_rational::BigRational;

/// Rational from an integer numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(value: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(value))
}

pub fn from_biguint(value: BigUint) -> ExactRational {
    ExactRational::from_integer(BigInt::from(value))
}

pub fn zero() -> ExactRational {
    ExactRational::zero()
}

pub fn one() -> ExactRational {
    ExactRational::one()
}

/// Nearest `f64`, saturating on overflow. Exact rationals in this crate
/// stay well inside `f64` range, so the fallback is never hit in practice.
pub fn to_f64(value: &ExactRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Wire form of a rational: decimal strings, so arbitrary precision
/// survives JSON round trips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for RationalRepr {
    fn from(value: &ExactRational) -> Self {
        RationalRepr {
            num: value.numer().to_string(),
            den: value.denom().to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_normalizes() {
        let r = ratio(-6, -8);
        assert_eq!(r, ratio(3, 4));
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn repr_round_trip() {
        let r = ratio(-355, 113);
        let repr = RationalRepr::from(&r);
        assert_eq!(repr.num, "-355");
        assert_eq!(repr.den, "113");
    }
}
