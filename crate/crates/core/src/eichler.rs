//! Numerical bridge to an actual cusp form: the discriminant form of
//! weight 12.
//!
//! The q-expansion `Delta = q prod (1-q^n)^24 = sum tau(n) q^n` is exact
//! (big integers). Everything else here is double precision:
//!
//! - critical L-values through the completed function
//!   `Lambda(s) = (2 pi)^{-s} Gamma(s) L(s)`, evaluated by the
//!   incomplete-gamma series that the functional equation
//!   `Lambda(s) = Lambda(12 - s)` produces (terms decay like `e^{-2 pi n}`);
//! - the period polynomial `r(X, Y) = int_0^{i oo} Delta(z) (Xz - Y)^10 dz`,
//!   whose `z^j` moment is `i^{j+1} Lambda(j+1)`;
//! - the Eichler integral
//!   `Q(x) = 10!/(-2 pi i)^11 sum_n tau(n) n^{-11} e^{2 pi i n x}`, whose
//!   modular defect `Q(x) - x^10 Q(-1/x)` is the one-variable reading
//!   `r(1, x)` of the period polynomial.
//!
//! The exact odd/even bases of `W_10` from [`crate::polyspace`] anchor the
//! numerics: the parity parts of `r` must project onto them with tiny
//! residuals, and the Manin Hecke action on the odd part must scale it by
//! tau(n).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exactnum::{Cplx, Mat2Z, Rat, RatExt};
use crate::maninhecke::manin_set;
use crate::polyspace::{HomPoly, Parity};
use crate::series::euler_product;

/// Exact q-expansion of a cusp form; `coeffs[n-1]` is `a_n`.
#[derive(Clone, Debug)]
pub struct CuspFormQexp {
    pub weight: usize,
    coeffs: Vec<BigInt>,
}

impl CuspFormQexp {
    pub fn coeff(&self, n: u64) -> &BigInt {
        &self.coeffs[(n - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `tau(1..=n_max)` from the product expansion `q prod (1-q^m)^24`.
pub fn delta_coeffs(n_max: usize) -> CuspFormQexp {
    assert!(n_max >= 1);
    let eta = euler_product(n_max - 1);
    let e24 = eta.pow(24);
    CuspFormQexp {
        weight: 12,
        coeffs: e24.coeffs,
    }
}

/// Upper incomplete gamma at integer order: `Gamma(s, x)` with `s >= 1`.
fn incomplete_gamma_int(s: u32, x: f64) -> f64 {
    // Gamma(s, x) = (s-1)! e^{-x} sum_{m=0}^{s-1} x^m / m!
    let mut fact = 1.0;
    for m in 1..s {
        fact *= m as f64;
    }
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut mfact = 1.0;
    for m in 0..s {
        if m > 0 {
            pow *= x;
            mfact *= m as f64;
        }
        sum += pow / mfact;
    }
    fact * (-x).exp() * sum
}

/// Completed L-value `Lambda(s) = int_0^oo Delta(iy) y^{s-1} dy` for
/// integer `1 <= s <= 11`, truncated at `n_terms` expansion coefficients.
pub fn lambda_completed(s: u32, n_terms: usize) -> f64 {
    assert!((1..=11).contains(&s));
    let delta = delta_coeffs(n_terms);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut acc = 0.0;
    for n in 1..=n_terms as u64 {
        let a_n = delta.coeff(n).to_f64().expect("tau fits f64 at this range");
        let x = two_pi * n as f64;
        let term = incomplete_gamma_int(s, x) / x.powi(s as i32)
            + incomplete_gamma_int(12 - s, x) / x.powi(12 - s as i32);
        acc += a_n * term;
    }
    acc
}

/// `L(Delta, s)` for integer `1 <= s <= 11`.
pub fn l_value(s: u32, n_terms: usize) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut fact = 1.0;
    for m in 1..s {
        fact *= m as f64;
    }
    lambda_completed(s, n_terms) * two_pi.powi(s as i32) / fact
}

fn i_pow(n: u32) -> Cplx {
    match n % 4 {
        0 => Cplx::new(1.0, 0.0),
        1 => Cplx::new(0.0, 1.0),
        2 => Cplx::new(-1.0, 0.0),
        _ => Cplx::new(0.0, -1.0),
    }
}

fn binom(n: u64, k: u64) -> f64 {
    let mut out = 1.0;
    for i in 0..k {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// Coefficients of `r_Delta(X, Y)`; entry `j` multiplies `X^j Y^{10-j}`.
///
/// `coeff_j = C(10, j) (-1)^j i^{j+1} Lambda(j+1)`.
pub fn period_poly_delta(n_terms: usize) -> Vec<Cplx> {
    (0..=10u32)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let lam = lambda_completed(j + 1, n_terms);
            i_pow(j + 1) * (binom(10, j as u64) * sign * lam)
        })
        .collect()
}

/// Slash action `P(aX+bY, cX+dY)` on complex coefficient vectors,
/// mirroring the exact version in [`crate::polyspace`].
pub fn slash_cplx(coeffs: &[Cplx], m: &Mat2Z) -> Vec<Cplx> {
    let w = coeffs.len() - 1;
    let (a, b, c, d) = m.to_i64().expect("small matrices here");
    let lin_pows = |u: f64, v: f64| -> Vec<Vec<f64>> {
        let mut pows = vec![vec![1.0]];
        for i in 1..=w {
            let prev = &pows[i - 1];
            let mut next = vec![0.0; i + 1];
            for (j, &x) in prev.iter().enumerate() {
                next[j + 1] += x * u;
                next[j] += x * v;
            }
            pows.push(next);
        }
        pows
    };
    let top = lin_pows(a as f64, b as f64);
    let bot = lin_pows(c as f64, d as f64);
    let mut out = vec![Cplx::new(0.0, 0.0); w + 1];
    for (i, coeff) in coeffs.iter().enumerate() {
        if coeff.norm() == 0.0 {
            continue;
        }
        for (j1, &t) in top[i].iter().enumerate() {
            for (j2, &bv) in bot[w - i].iter().enumerate() {
                out[j1 + j2] += coeff * t * bv;
            }
        }
    }
    out
}

/// Manin Hecke action on complex coefficient vectors.
pub fn tilde_t_cplx(n: u64, coeffs: &[Cplx]) -> Vec<Cplx> {
    let mut acc = vec![Cplx::new(0.0, 0.0); coeffs.len()];
    for m in &manin_set(n).mats {
        for (a, s) in acc.iter_mut().zip(slash_cplx(coeffs, m)) {
            *a += s;
        }
    }
    acc
}

/// Even/odd part under `Y -> -Y` of a complex coefficient vector.
pub fn parity_project_cplx(coeffs: &[Cplx], parity: Parity) -> Vec<Cplx> {
    let w = coeffs.len() - 1;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let keep = match parity {
                Parity::Even => (w - i) % 2 == 0,
                Parity::Odd => (w - i) % 2 == 1,
                Parity::Both => true,
            };
            if keep {
                *c
            } else {
                Cplx::new(0.0, 0.0)
            }
        })
        .collect()
}

fn norm2(v: &[Cplx]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Relative residual of the least-squares projection of `v` onto the span
/// of the exact basis vectors (complex scalars allowed).
pub fn projection_residual(v: &[Cplx], basis: &[HomPoly]) -> f64 {
    assert!(!basis.is_empty());
    let fb: Vec<Vec<f64>> = basis
        .iter()
        .map(|p| p.coeffs().iter().map(|c| c.to_f64_lossy()).collect())
        .collect();
    let k = fb.len();
    // normal equations G lambda = rhs, G real symmetric k x k
    let mut g = vec![vec![0.0f64; k]; k];
    let mut rhs = vec![Cplx::new(0.0, 0.0); k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = fb[i].iter().zip(&fb[j]).map(|(a, b)| a * b).sum();
        }
        rhs[i] = fb[i].iter().zip(v).map(|(a, b)| b * *a).sum();
    }
    // tiny k (1 or 2): solve directly
    let lambda: Vec<Cplx> = match k {
        1 => vec![rhs[0] / g[0][0]],
        2 => {
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            vec![
                (rhs[0] * g[1][1] - rhs[1] * g[0][1]) / det,
                (rhs[1] * g[0][0] - rhs[0] * g[1][0]) / det,
            ]
        }
        _ => panic!("projection onto more than 2 basis vectors not needed"),
    };
    let mut resid = v.to_vec();
    for (l, b) in lambda.iter().zip(&fb) {
        for (r, &bc) in resid.iter_mut().zip(b) {
            *r -= l * bc;
        }
    }
    norm2(&resid) / norm2(v)
}

/// Truncated Eichler integral
/// `Q(x) = 10!/(-2 pi i)^11 sum_{n<=N} tau(n) n^{-11} e^{2 pi i n x}`.
///
/// The phase of each term is reduced exactly (`n k mod h`), so periodicity
/// under `x -> x + 1` holds termwise, bit for bit.
pub fn eichler_integral(x: &Rat, n_terms: usize) -> Cplx {
    let delta = delta_coeffs(n_terms);
    let two_pi = 2.0 * std::f64::consts::PI;
    // 10! / (-2 pi i)^11 = -i 10! / (2 pi)^11 ... times i^2 = -1 twice over:
    // (-2 pi i)^11 = i (2 pi)^11, so the prefactor is -i 10!/(2 pi)^11
    let prefactor = Cplx::new(0.0, -3628800.0 / two_pi.powi(11));
    let h = x.denom();
    let k = x.numer();
    let mut acc = Cplx::new(0.0, 0.0);
    for n in 1..=n_terms as u64 {
        let a_n = delta.coeff(n).to_f64().expect("tau fits f64");
        let phase_num = (BigInt::from(n) * k).mod_floor(h).to_f64().unwrap();
        let theta = two_pi * phase_num / h.to_f64().unwrap();
        let term = Cplx::new(theta.cos(), theta.sin()) * (a_n / (n as f64).powi(11));
        acc += term;
    }
    prefactor * acc
}

/// One-variable reading of a complex period polynomial at `(1, x)`.
pub fn eval_one_var_cplx(coeffs: &[Cplx], x: f64) -> Cplx {
    let w = coeffs.len() - 1;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * x.powi((w - i) as i32))
        .sum()
}

/// Outcome of the Hecke crosscheck on the numerical odd period vector.
#[derive(Clone, Debug)]
pub struct HeckeCrosscheck {
    pub n: u64,
    pub tau: BigInt,
    pub rel_error: f64,
}

/// Verifies `T~_n (r_Delta odd part) = tau(n) (odd part)` numerically.
pub fn hecke_period_crosscheck(n: u64, n_terms: usize) -> HeckeCrosscheck {
    let r = period_poly_delta(n_terms);
    let odd = parity_project_cplx(&r, Parity::Odd);
    let image = tilde_t_cplx(n, &odd);
    let tau = delta_coeffs(n as usize).coeff(n).clone();
    let tau_f = tau.to_f64().unwrap();
    let expected: Vec<Cplx> = odd.iter().map(|c| c * tau_f).collect();
    let diff: Vec<Cplx> = image
        .iter()
        .zip(&expected)
        .map(|(a, b)| a - b)
        .collect();
    HeckeCrosscheck {
        n,
        tau,
        rel_error: norm2(&diff) / norm2(&expected),
    }
}
