//! Dense truncated power series with big-integer coefficients.
//!
//! Just enough machinery for the q-expansions this crate needs: the eta
//! product for tau, and the two sigma(q) series. Series are truncated at a
//! fixed order; `coeffs[n]` is the coefficient of `q^n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    pub coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(order: usize) -> IntSeries {
        IntSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> IntSeries {
        let mut s = IntSeries::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add_assign(&mut self, rhs: &IntSeries) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }

    pub fn mul(&self, rhs: &IntSeries) -> IntSeries {
        let order = self.order();
        let mut out = IntSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Multiplies by the sparse factor `1 + sign * q^k`.
    pub fn mul_one_plus_qk(&self, k: usize, sign: i64) -> IntSeries {
        let order = self.order();
        let mut out = self.clone();
        if k <= order {
            for i in 0..=order - k {
                if !self.coeffs[i].is_zero() {
                    let term = &self.coeffs[i] * BigInt::from(sign);
                    out.coeffs[i + k] += term;
                }
            }
        }
        out
    }

    /// Multiplies by `1/(1 + q^k) = sum_m (-1)^m q^{km}`.
    pub fn mul_inv_one_plus_qk(&self, k: usize) -> IntSeries {
        let order = self.order();
        let mut out = IntSeries::zero(order);
        let mut m = 0usize;
        while k * m <= order {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            for i in 0..=order - k * m {
                if !self.coeffs[i].is_zero() {
                    out.coeffs[i + k * m] += &self.coeffs[i] * BigInt::from(sign);
                }
            }
            m += 1;
            if k == 0 {
                break;
            }
        }
        out
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, n: u32) -> IntSeries {
        let mut result = IntSeries::one(self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// `prod_{n>=1} (1 - q^n)` to the given order, via Euler's pentagonal
/// number theorem (sparse, exact).
pub fn euler_product(order: usize) -> IntSeries {
    let mut s = IntSeries::zero(order);
    let mut m: i64 = 0;
    loop {
        // exponents m(3m-1)/2 for m = 0, 1, -1, 2, -2, ...
        let e = m * (3 * m - 1) / 2;
        if e as usize > order {
            if m > 0 {
                m = -m;
                continue;
            } else {
                break;
            }
        }
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        s.coeffs[e as usize] += BigInt::from(sign);
        m = if m > 0 { -m } else { -m + 1 };
    }
    s
}
