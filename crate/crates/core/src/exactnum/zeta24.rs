//! The cyclic group of 24th roots of unity, stored as exponents.
//!
//! Multiplier-system values are always powers of `zeta_24 = e^{2 pi i/24}`;
//! keeping the exponent instead of a floating approximation makes equality
//! checks exact integer comparisons mod 24.

use std::fmt;

use super::Cplx;

/// `zeta_24^exp` with `0 <= exp < 24`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zeta24 {
    exp: u8,
}

impl Zeta24 {
    pub const ONE: Zeta24 = Zeta24 { exp: 0 };
    /// `zeta_24` itself.
    pub const GEN: Zeta24 = Zeta24 { exp: 1 };
    /// `-1 = zeta_24^12`.
    pub const MINUS_ONE: Zeta24 = Zeta24 { exp: 12 };

    /// Builds `zeta_24^exp`, reducing the exponent mod 24.
    pub fn new(exp: i64) -> Zeta24 {
        Zeta24 {
            exp: exp.rem_euclid(24) as u8,
        }
    }

    pub fn exp(self) -> u8 {
        self.exp
    }

    pub fn pow(self, k: i64) -> Zeta24 {
        Zeta24::new(self.exp as i64 * (k.rem_euclid(24)))
    }

    pub fn inv(self) -> Zeta24 {
        Zeta24::new(-(self.exp as i64))
    }

    pub fn is_one(self) -> bool {
        self.exp == 0
    }

    /// Complex value `cos(2 pi exp/24) + i sin(2 pi exp/24)`.
    ///
    /// Built from a quarter-turn table, so the values at multiples of 6
    /// (i.e. 1, i, -1, -i) are exact.
    pub fn to_cplx(self) -> Cplx {
        Cplx::new(cos24(self.exp), sin24(self.exp))
    }
}

impl std::ops::Mul for Zeta24 {
    type Output = Zeta24;
    fn mul(self, rhs: Zeta24) -> Zeta24 {
        Zeta24::new(self.exp as i64 + rhs.exp as i64)
    }
}

impl fmt::Display for Zeta24 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta24^{}", self.exp)
    }
}

/// cos(2 pi e / 24) for e in 0..=6.
fn first_quadrant_cos(e: u8) -> f64 {
    let s6 = 6.0_f64.sqrt();
    let s2 = std::f64::consts::SQRT_2;
    let s3 = 3.0_f64.sqrt();
    match e {
        0 => 1.0,
        1 => (s6 + s2) / 4.0,
        2 => s3 / 2.0,
        3 => s2 / 2.0,
        4 => 0.5,
        5 => (s6 - s2) / 4.0,
        6 => 0.0,
        _ => unreachable!(),
    }
}

fn cos24(e: u8) -> f64 {
    // cos is even and cos(theta + pi) = -cos(theta).
    let e = e % 24;
    let folded = e.min(24 - e); // 0..=12
    if folded <= 6 {
        first_quadrant_cos(folded)
    } else {
        -first_quadrant_cos(12 - folded)
    }
}

fn sin24(e: u8) -> f64 {
    // sin(theta) = cos(theta - pi/2).
    cos24((e + 24 - 6) % 24)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_values_are_exact() {
        assert_eq!(Zeta24::new(0).to_cplx(), Cplx::new(1.0, 0.0));
        assert_eq!(Zeta24::new(12).to_cplx(), Cplx::new(-1.0, 0.0));
        assert_eq!(Zeta24::new(6).to_cplx(), Cplx::new(0.0, 1.0));
        assert_eq!(Zeta24::new(18).to_cplx(), Cplx::new(0.0, -1.0));
    }

    #[test]
    fn cyclic_group_of_order_24() {
        for e in 0..24 {
            let z = Zeta24::new(e);
            assert_eq!(z.pow(24), Zeta24::ONE);
            assert_eq!(z * z.inv(), Zeta24::ONE);
            let mut acc = Zeta24::ONE;
            for _ in 0..24 {
                acc = acc * z;
            }
            assert_eq!(acc, Zeta24::ONE);
        }
    }

    #[test]
    fn to_cplx_matches_exponential() {
        for e in 0..24 {
            let z = Zeta24::new(e).to_cplx();
            let theta = 2.0 * std::f64::consts::PI * e as f64 / 24.0;
            assert!((z.re - theta.cos()).abs() < 1e-15);
            assert!((z.im - theta.sin()).abs() < 1e-15);
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn display_format() {
        assert_eq!(Zeta24::new(-5).to_string(), "zeta24^19");
    }
}
