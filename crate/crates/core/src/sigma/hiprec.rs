//! Arbitrary-precision binary fixed-point evaluation of the Andrews sum.
//!
//! Near a rational with small denominator the partial products
//! `prod_j (1 - q^j)` spike to `2^2600` and beyond (Sudler-type growth)
//! while the final sum stays moderate, so double precision loses every
//! significant digit to cancellation. This module reruns the sum with
//! `BigInt` mantissas at a per-point precision chosen from a cheap
//! scaled-f64 prepass of the peak exponent.
//!
//! Numbers are `mant / 2^scale`; sin/cos/pi come from Taylor series and a
//! Machin formula, all self-terminating at the working precision.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::exactnum::Cplx;

#[derive(Clone, Debug)]
struct FixCplx {
    re: BigInt,
    im: BigInt,
}

impl FixCplx {
    fn one(scale: u32) -> FixCplx {
        FixCplx {
            re: BigInt::from(1) << scale,
            im: BigInt::zero(),
        }
    }

    fn mul(&self, rhs: &FixCplx, scale: u32) -> FixCplx {
        FixCplx {
            re: (&self.re * &rhs.re - &self.im * &rhs.im) >> scale,
            im: (&self.re * &rhs.im + &self.im * &rhs.re) >> scale,
        }
    }

    fn sub_from_one(&self, scale: u32) -> FixCplx {
        FixCplx {
            re: (BigInt::from(1) << scale) - &self.re,
            im: -&self.im,
        }
    }

    fn add_assign(&mut self, rhs: &FixCplx) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }

    fn sub_assign(&mut self, rhs: &FixCplx) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }

    fn to_cplx(&self, scale: u32) -> Cplx {
        Cplx::new(fix_to_f64(&self.re, scale), fix_to_f64(&self.im, scale))
    }
}

fn fix_to_f64(mant: &BigInt, scale: u32) -> f64 {
    let bits = mant.bits() as i64;
    if bits == 0 {
        return 0.0;
    }
    // keep the top <= 64 bits so the head conversion is exact-ish, then
    // apply the remaining exponent; scale can exceed the f64 exponent
    // range even though the represented value is moderate
    let drop = (bits - 64).max(0);
    let head = (mant >> drop).to_f64().unwrap_or(0.0);
    let e = drop - scale as i64;
    if e < -1100 {
        0.0
    } else if e > 1000 {
        // cannot happen for the moderate values this module returns
        f64::INFINITY * head.signum()
    } else {
        head * 2f64.powi(e as i32)
    }
}

/// `pi` at the working precision, by Machin's formula
/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
fn pi_fix(scale: u32) -> BigInt {
    let atan_inv = |x: u64| -> BigInt {
        // atan(1/x) = sum_m (-1)^m / ((2m+1) x^(2m+1))
        let x2 = BigInt::from(x * x);
        let mut term = (BigInt::from(1) << scale) / BigInt::from(x);
        let mut acc = BigInt::zero();
        let mut m = 0u64;
        while !term.is_zero() {
            let piece = &term / BigInt::from(2 * m + 1);
            if m % 2 == 0 {
                acc += &piece;
            } else {
                acc -= &piece;
            }
            term /= &x2;
            m += 1;
        }
        acc
    };
    atan_inv(5) * 16 - atan_inv(239) * 4
}

/// `e^{2 pi i num/den}` at the working precision (Taylor on the full
/// angle; self-terminating).
fn unit_root(num: u64, den: u64, scale: u32) -> FixCplx {
    let pi = pi_fix(scale);
    // theta = 2 pi num / den
    let theta = (pi * BigInt::from(2 * num as u128)) / BigInt::from(den);
    // cos + i sin via one pass of the exponential series
    let mut term = BigInt::from(1) << scale; // theta^n / n!, starting n = 0
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut n = 0u64;
    while !term.is_zero() {
        match n % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        term = (&term * &theta) >> scale;
        n += 1;
        term /= BigInt::from(n);
    }
    FixCplx { re: cos, im: sin }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Number of nonvanishing Andrews terms: the factor `(1 - q^j)` is zero
/// exactly at `j = ord(q) = h/gcd(k, h)`, killing every later term.
pub(crate) fn live_terms(k_mod_h: u64, h: u64) -> u64 {
    h / gcd_u64(k_mod_h % h, h)
}

/// Scaled-f64 prepass: the peak binary exponent reached by the running
/// product and partial sum of the Andrews recurrence.
pub(crate) fn peak_exponent_bits(k_mod_h: u64, h: u64) -> u32 {
    let mut prod = Cplx::new(1.0, 0.0);
    let mut prod_e: i64 = 0;
    let mut sum_mag: f64 = 1.0;
    let mut sum_e: i64 = 0;
    let mut peak: i64 = 0;
    let mut m = 0u64;
    for _ in 0..live_terms(k_mod_h, h) {
        m = (m + k_mod_h) % h;
        let theta = 2.0 * std::f64::consts::PI * (m as f64) / (h as f64);
        let rot = Cplx::new(theta.cos(), theta.sin());
        // |term| = |prod|
        let term_mag = prod.norm();
        if term_mag > 0.0 {
            // align exponents to accumulate |sum| conservatively
            let delta = prod_e - sum_e;
            if delta > 0 {
                sum_mag = sum_mag * 2f64.powi(-delta.min(200) as i32) + term_mag;
                sum_e = prod_e;
            } else {
                sum_mag += term_mag * 2f64.powi(delta.max(-200) as i32);
            }
            while sum_mag > 1e30 {
                sum_mag /= 1e30;
                sum_e += 100;
            }
            peak = peak.max(sum_e).max(prod_e);
        }
        prod *= Cplx::new(1.0, 0.0) - rot;
        if prod.norm() == 0.0 {
            break;
        }
        while prod.norm() > 1.8e19 {
            prod *= 2f64.powi(-64);
            prod_e += 64;
        }
        while prod.norm() < 5.4e-20 && prod.norm() > 0.0 {
            prod *= 2f64.powi(64);
            prod_e -= 64;
        }
    }
    peak.max(0) as u32 + 24
}

/// The Andrews sum `1 + sum_{n=0}^{h-1} (-1)^n q^{n+1} prod_{j<=n}(1-q^j)`
/// at `q = e^{2 pi i k/h}`, in fixed point with `extra_bits` of guard
/// precision above the measured peak. Terms past the order of `q` vanish
/// identically and are not computed.
pub(crate) fn sigma_at_root_fix(k_mod_h: u64, h: u64, extra_bits: u32) -> Cplx {
    if h == 1 {
        return Cplx::new(2.0, 0.0);
    }
    let peak = peak_exponent_bits(k_mod_h, h);
    let scale = (peak + extra_bits).max(128);
    let q = unit_root(k_mod_h % h, h, scale);
    let mut qpow = FixCplx::one(scale);
    let mut prod = FixCplx::one(scale);
    let mut sum = FixCplx::one(scale);
    for n in 0..live_terms(k_mod_h, h) {
        qpow = qpow.mul(&q, scale);
        let term = qpow.mul(&prod, scale);
        if n % 2 == 0 {
            sum.add_assign(&term);
        } else {
            sum.sub_assign(&term);
        }
        prod = prod.mul(&qpow.sub_from_one(scale), scale);
    }
    sum.to_cplx(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machin_pi_matches_f64() {
        let scale = 256u32;
        let pi = pi_fix(scale);
        let approx = fix_to_f64(&pi, scale);
        assert!((approx - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn unit_root_matches_f64_exponential() {
        for (num, den) in [(1u64, 7u64), (3, 8), (5, 12), (122, 123)] {
            let z = unit_root(num, den, 192);
            let got = z.to_cplx(192);
            let theta = 2.0 * std::f64::consts::PI * num as f64 / den as f64;
            assert!((got.re - theta.cos()).abs() < 1e-14, "{num}/{den}");
            assert!((got.im - theta.sin()).abs() < 1e-14, "{num}/{den}");
        }
    }

    #[test]
    fn fixed_point_sigma_matches_f64_in_benign_range() {
        // small denominators are stable in f64; the two paths must agree
        for (k, h) in [(1u64, 5u64), (2, 7), (5, 12), (7, 24), (13, 100)] {
            let hi = sigma_at_root_fix(k, h, 64);
            let lo = crate::sigma::sigma_at_root(k as i64, h).unwrap();
            assert!((hi - lo).norm() < 1e-9 * (1.0 + lo.norm()), "k={k} h={h}");
        }
    }
}
