//! 2x2 integer matrices with big-integer entries.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rat;

/// Integer matrix `[a b; c d]`. Group elements, Manin matrices and Hecke
/// coset representatives all live here; everything this crate constructs
/// has positive determinant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Mat2Z {
        Mat2Z {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Mat2Z {
        Mat2Z::new(1, 0, 0, 1)
    }

    /// `S = [0 -1; 1 0]`.
    pub fn s() -> Mat2Z {
        Mat2Z::new(0, -1, 1, 0)
    }

    /// `T = [1 1; 0 1]`.
    pub fn t() -> Mat2Z {
        Mat2Z::new(1, 1, 0, 1)
    }

    /// `U = TS = [1 -1; 1 0]`, of order 6 (`U^3 = -I`).
    pub fn u() -> Mat2Z {
        Mat2Z::new(1, -1, 1, 0)
    }

    /// `R = [1 0; 2 1]`; together with `T` it generates `Gamma_0(2)`.
    pub fn r() -> Mat2Z {
        Mat2Z::new(1, 0, 2, 1)
    }

    /// `T^n = [1 n; 0 1]`.
    pub fn t_pow(n: i64) -> Mat2Z {
        Mat2Z::new(1, n, 0, 1)
    }

    /// `R^n = [1 0; 2n 1]`.
    pub fn r_pow(n: i64) -> Mat2Z {
        Mat2Z::new(1, 0, 2 * n, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, rhs: &Mat2Z) -> Mat2Z {
        Mat2Z {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    pub fn neg(&self) -> Mat2Z {
        Mat2Z {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Inverse of a determinant-1 matrix (the adjugate).
    pub fn inverse_unimodular(&self) -> Option<Mat2Z> {
        if self.det() != BigInt::one() {
            return None;
        }
        Some(Mat2Z {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Moebius action `x -> (ax + b)/(cx + d)`; `None` at the pole.
    pub fn moebius(&self, x: &Rat) -> Option<Rat> {
        let num = Rat::from_integer(self.a.clone()) * x + Rat::from_integer(self.b.clone());
        let den = Rat::from_integer(self.c.clone()) * x + Rat::from_integer(self.d.clone());
        if den.is_zero() {
            None
        } else {
            Some(num / den)
        }
    }

    /// Entries as `i64`s when they fit.
    pub fn to_i64(&self) -> Option<(i64, i64, i64, i64)> {
        use num_traits::ToPrimitive;
        Some((
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ))
    }
}

impl std::ops::Mul for &Mat2Z {
    type Output = Mat2Z;
    fn mul(self, rhs: &Mat2Z) -> Mat2Z {
        Mat2Z::mul(self, rhs)
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}
