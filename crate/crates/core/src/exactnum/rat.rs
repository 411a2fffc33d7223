//! Exact rational scalars.
//!
//! `Rat` is `num_rational::BigRational`: always stored in lowest terms with a
//! positive denominator, which is exactly the normalization the rest of the
//! crate relies on. This module adds the fallible constructor and the few
//! convenience operations the callers need.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ExactNumError;

/// Arbitrary-precision rational number, canonical form `num/den` with
/// `den > 0` and `gcd(|num|, den) = 1`.
pub type Rat = num_rational::BigRational;

/// Builds the canonical reduced rational `num/den`.
///
/// Errors on `den == 0`; the sign always ends up on the numerator.
pub fn rat_normalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rat, ExactNumError> {
    let den = den.into();
    if den.is_zero() {
        return Err(ExactNumError::ZeroDenominator);
    }
    Ok(Rat::new(num.into(), den))
}

/// Small helpers on [`Rat`] used throughout the crate.
pub trait RatExt: Sized {
    fn from_int(n: i64) -> Self;
    /// `self^exp` for a nonnegative exponent.
    fn pow_u(&self, exp: u32) -> Self;
    fn to_f64_lossy(&self) -> f64;
}

impl RatExt for Rat {
    fn from_int(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn pow_u(&self, exp: u32) -> Rat {
        num_traits::pow::pow(self.clone(), exp as usize)
    }

    fn to_f64_lossy(&self) -> f64 {
        // Scale into f64 range before dividing so huge numerators survive.
        let num = self.numer();
        let den = self.denom();
        let nb = num.bits() as i64;
        let db = den.bits() as i64;
        if nb < 900 && db < 900 {
            let n = bigint_to_f64(num);
            let d = bigint_to_f64(den);
            n / d
        } else {
            let shift = (nb.max(db) - 512).max(0) as u64;
            let n = bigint_to_f64(&(num >> shift));
            let d = bigint_to_f64(&(den >> shift));
            n / d
        }
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else if x.is_zero() {
        0.0
    } else {
        f64::INFINITY
    })
}

/// Integer power `base^exp` over `BigInt` with `exp >= 0`.
pub(crate) fn bigint_pow(base: &BigInt, exp: u32) -> BigInt {
    let mut out = BigInt::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            out *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_reduces_and_fixes_sign() {
        let r = rat_normalize(2, 4).unwrap();
        assert_eq!(r, Rat::new(BigInt::from(1), BigInt::from(2)));
        let r = rat_normalize(3, -6).unwrap();
        assert_eq!(r, Rat::new(BigInt::from(-1), BigInt::from(2)));
        assert!(r.denom() > &BigInt::zero());
        let r = rat_normalize(0, 7).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.denom(), &BigInt::one());
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(rat_normalize(1, 0), Err(ExactNumError::ZeroDenominator));
    }

    #[test]
    fn display_round_trips() {
        let r = rat_normalize(-7, 3).unwrap();
        assert_eq!(r.to_string(), "-7/3");
        assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
        let n = Rat::from_int(5);
        assert_eq!(n.to_string(), "5");
        assert_eq!("5".parse::<Rat>().unwrap(), n);
    }

    proptest! {
        // (a/b + c/d) * bd = ad + cb, exactly, for big random values.
        #[test]
        fn addition_is_exact(a in any::<i128>(), b in 1i128..=i128::MAX, c in any::<i128>(), d in 1i128..=i128::MAX) {
            let ra = rat_normalize(BigInt::from(a), BigInt::from(b)).unwrap();
            let rc = rat_normalize(BigInt::from(c), BigInt::from(d)).unwrap();
            let lhs = (&ra + &rc) * Rat::from_integer(BigInt::from(b) * BigInt::from(d));
            let rhs = Rat::from_integer(BigInt::from(a) * BigInt::from(d) + BigInt::from(c) * BigInt::from(b));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
