//! The Hecke action on period polynomials through Manin matrices.
//!
//! For each `n >= 1` there is a distinguished finite set of determinant-`n`
//! integer matrices
//!
//! ```text
//! Man_n = { [a b; c d] : ad - bc = n, a > |c|, d > |b|, bc <= 0,
//!           b = 0 => -a/2 < c <= a/2,  c = 0 => -d/2 < b <= d/2 }
//! ```
//!
//! and the operator `T~_n P = sum_{M in Man_n} P|M` (plain homogeneous
//! substitution) maps `W_w` to itself and realizes the Hecke operator on
//! period polynomials: on the one-dimensional odd space at `w = 10` its
//! eigenvalues are the Ramanujan tau values.

use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{Mat2Z, Rat};
use crate::polyspace::{basis_w, slash, HomPoly, Parity};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ManinError {
    #[error("eigenspace basis_W({w}, {parity:?}) has dimension {dim}, expected 1")]
    NotALine { w: usize, parity: Parity, dim: usize },
    #[error("image of the basis vector is not proportional to it")]
    NotProportional,
}

/// The Manin matrix set for determinant `n`.
#[derive(Clone, Debug)]
pub struct ManinSet {
    pub n: u64,
    pub mats: Vec<Mat2Z>,
}

/// Exhaustive enumeration of `Man_n`.
pub fn manin_set(n: u64) -> ManinSet {
    assert!(n >= 1);
    let ni = n as i64;
    let mut mats = Vec::new();
    for a in 1..=ni {
        for d in 1..=ni {
            let m = a * d - ni; // = bc <= 0
            if m > 0 {
                continue;
            }
            if m == 0 {
                // b = 0: -a/2 < c <= a/2
                for c in -a..=a {
                    if 2 * c > -a && 2 * c <= a {
                        mats.push(Mat2Z::new(a, 0, c, d));
                    }
                }
                // c = 0, b != 0: -d/2 < b <= d/2
                for b in -d..=d {
                    if b != 0 && 2 * b > -d && 2 * b <= d {
                        mats.push(Mat2Z::new(a, b, 0, d));
                    }
                }
            } else {
                // bc = m < 0: b and c have opposite signs
                let mm = -m; // > 0
                for e in 1..=mm {
                    if mm % e != 0 {
                        continue;
                    }
                    let f = mm / e;
                    // (b, c) = (e, -f) and (-e, f), both need |b| < d, |c| < a
                    if e < d && f < a {
                        mats.push(Mat2Z::new(a, e, -f, d));
                        mats.push(Mat2Z::new(a, -e, f, d));
                    }
                }
            }
        }
    }
    // conditions a > |c| and d > |b| are built into the ranges above for
    // the off-diagonal branch; the diagonal branches satisfy them because
    // |c| <= a/2 < a and |b| <= d/2 < d
    ManinSet { n, mats }
}

/// `T~_n P = sum_{M in Man_n} P | M`.
pub fn tilde_t(n: u64, p: &HomPoly) -> HomPoly {
    let set = manin_set(n);
    let mut acc = HomPoly::zero(p.weight());
    for m in &set.mats {
        acc = acc.add(&slash(p, m));
    }
    acc
}

/// The exact scalar by which `T~_n` acts on a one-dimensional eigenspace
/// `basis_W(w, parity)`.
pub fn eigenvalue_on_line(n: u64, w: usize, parity: Parity) -> Result<Rat, ManinError> {
    let basis = basis_w(w, parity);
    if basis.len() != 1 {
        return Err(ManinError::NotALine {
            w,
            parity,
            dim: basis.len(),
        });
    }
    let v = &basis[0];
    let img = tilde_t(n, v);
    let lead = v
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("basis vector is nonzero");
    let lambda = img.coeff(lead) / v.coeff(lead);
    if img == v.scale(&lambda) {
        Ok(lambda)
    } else {
        Err(ManinError::NotProportional)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eichler::delta_coeffs;
    use crate::exactnum::RatExt;
    use num_bigint::BigInt;

    /// Independent oracle: scan all integer matrices with entries in
    /// `[-(n+1), n+1]` against the raw defining conditions.
    fn manin_brute(n: i64) -> Vec<(i64, i64, i64, i64)> {
        let mut out = Vec::new();
        let bound = n + 1;
        for a in -bound..=bound {
            for b in -bound..=bound {
                for c in -bound..=bound {
                    for d in -bound..=bound {
                        if a * d - b * c != n {
                            continue;
                        }
                        if !(a > c.abs() && d > b.abs() && b * c <= 0) {
                            continue;
                        }
                        if b == 0 && !(2 * c > -a && 2 * c <= a) {
                            continue;
                        }
                        if c == 0 && !(2 * b > -d && 2 * b <= d) {
                            continue;
                        }
                        out.push((a, b, c, d));
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn as_tuples(set: &ManinSet) -> Vec<(i64, i64, i64, i64)> {
        let mut v: Vec<_> = set.mats.iter().map(|m| m.to_i64().unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn manin_1_is_identity() {
        let s = manin_set(1);
        assert_eq!(s.mats.len(), 1);
        assert!(s.mats[0].is_identity());
    }

    #[test]
    fn manin_matches_brute_force_oracle() {
        for n in 1..=12i64 {
            assert_eq!(as_tuples(&manin_set(n as u64)), manin_brute(n), "n={n}");
        }
    }

    #[test]
    fn manin_2_contains_upper_triangulars() {
        let tuples = as_tuples(&manin_set(2));
        assert!(tuples.contains(&(2, 1, 0, 1)) || tuples.contains(&(1, 1, 0, 2)));
        assert_eq!(tuples.len(), 4);
    }

    #[test]
    fn determinants_are_n() {
        for n in 1..=10u64 {
            for m in &manin_set(n).mats {
                assert_eq!(m.det(), BigInt::from(n));
            }
        }
    }

    #[test]
    fn tilde_t_1_is_identity() {
        let p = HomPoly::from_ints(10, &[1, -2, 0, 3, 0, 0, 5, 0, 0, 1, 4]);
        assert_eq!(tilde_t(1, &p), p);
    }

    #[test]
    fn tilde_t_preserves_w_space() {
        for w in [10usize, 12] {
            for v in basis_w(w, Parity::Both) {
                for n in 2..=6u64 {
                    let img = tilde_t(n, &v);
                    assert!(
                        crate::qmf::satisfies_period_relations(&img),
                        "w={w} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn tilde_t_is_linear() {
        let b = basis_w(10, Parity::Both);
        let (p, q) = (&b[0], &b[1]);
        let s = Rat::new(3.into(), 7.into());
        let lhs = tilde_t(3, &p.add(&q.scale(&s)));
        let rhs = tilde_t(3, p).add(&tilde_t(3, q).scale(&s));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eigenvalues_are_tau() {
        // tau from the independent product expansion q prod (1-q^m)^24
        let tau = delta_coeffs(6);
        for n in [2u64, 3, 5, 6] {
            let lambda = eigenvalue_on_line(n, 10, Parity::Odd).unwrap();
            assert_eq!(
                lambda,
                Rat::from_integer(tau.coeff(n).clone()),
                "n={n}"
            );
        }
        // spot values, frozen from the expansion
        assert_eq!(
            eigenvalue_on_line(2, 10, Parity::Odd).unwrap(),
            Rat::from_int(-24)
        );
        assert_eq!(
            eigenvalue_on_line(3, 10, Parity::Odd).unwrap(),
            Rat::from_int(252)
        );
        assert_eq!(
            eigenvalue_on_line(5, 10, Parity::Odd).unwrap(),
            Rat::from_int(4830)
        );
    }

    #[test]
    fn tau_multiplicativity_cross_check() {
        let t2 = eigenvalue_on_line(2, 10, Parity::Odd).unwrap();
        let t3 = eigenvalue_on_line(3, 10, Parity::Odd).unwrap();
        let t6 = eigenvalue_on_line(6, 10, Parity::Odd).unwrap();
        assert_eq!(t6, t2 * t3);
    }

    #[test]
    fn eigenvalue_errors_on_wrong_dimension() {
        assert!(matches!(
            eigenvalue_on_line(2, 2, Parity::Odd),
            Err(ManinError::NotALine { dim: 0, .. })
        ));
        assert!(matches!(
            eigenvalue_on_line(2, 22, Parity::Odd),
            Err(ManinError::NotALine { dim: 2, .. })
        ));
    }
}
