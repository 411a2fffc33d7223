//! Homogeneous two-variable polynomial spaces and their exact bases.
//!
//! `V_w` is the space of homogeneous degree-`w` polynomials in `(X, Y)` with
//! rational coefficients. Integer matrices act on the right by homogeneous
//! substitution,
//!
//! ```text
//! (P | M)(X, Y) = P(aX + bY, cX + dY),    M = [a b; c d],
//! ```
//!
//! which for determinant-1 matrices is the weight-`w` slash action. Two
//! subspaces matter here:
//!
//! - the period-polynomial space `W_w = ker(1 + S) cap ker(1 + U + U^2)`,
//! - the reciprocity space `U_w` of polynomials `g` with
//!   `g(h+k, k) + g(h, h+k) = g(h, k)` and `g(1, 1) = 0`,
//!
//! each split into even/odd parts under `Y -> -Y` (equivalently `k -> -k`;
//! the two coordinate systems are identified coordinate-wise). Bases are
//! computed by exact Gaussian elimination and normalized so the first
//! nonzero coefficient is 1, making the output deterministic.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactnum::{bigint_pow, Mat2Z, Rat, RatExt};
use crate::linalg;

/// Homogeneous polynomial of even degree `w`; `coeffs[i]` is the
/// coefficient of `X^i Y^{w-i}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomPoly {
    weight: usize,
    coeffs: Vec<Rat>,
}

/// Parity selector for the `Y -> -Y` splitting.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
    Both,
}

impl std::str::FromStr for Parity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" | "even" => Ok(Parity::Even),
            "-" | "odd" => Ok(Parity::Odd),
            "both" => Ok(Parity::Both),
            other => Err(format!("unknown parity `{other}` (use +, - or both)")),
        }
    }
}

impl HomPoly {
    /// Zero polynomial of degree `w`.
    pub fn zero(weight: usize) -> HomPoly {
        HomPoly {
            weight,
            coeffs: vec![Rat::zero(); weight + 1],
        }
    }

    pub fn new(weight: usize, coeffs: Vec<Rat>) -> HomPoly {
        assert_eq!(coeffs.len(), weight + 1, "need w+1 coefficients");
        HomPoly { weight, coeffs }
    }

    pub fn from_ints(weight: usize, coeffs: &[i64]) -> HomPoly {
        HomPoly::new(weight, coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    /// `X^w - Y^w`, the distinguished element of `W_w^+` (and, read in the
    /// variables `(h, k)`, of `U_w^+`).
    pub fn x_pow_minus_y_pow(weight: usize) -> HomPoly {
        let mut p = HomPoly::zero(weight);
        p.coeffs[weight] = Rat::from_int(1);
        p.coeffs[0] = Rat::from_int(-1);
        p
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &HomPoly) -> HomPoly {
        assert_eq!(self.weight, rhs.weight);
        HomPoly {
            weight: self.weight,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &HomPoly) -> HomPoly {
        assert_eq!(self.weight, rhs.weight);
        HomPoly {
            weight: self.weight,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> HomPoly {
        HomPoly {
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Exact evaluation at an integer point.
    pub fn eval_int(&self, x: &BigInt, y: &BigInt) -> Rat {
        let w = self.weight;
        // powers x^i and y^{w-i}, built incrementally
        let mut xp = vec![BigInt::from(1)];
        for _ in 0..w {
            let last = xp.last().unwrap() * x;
            xp.push(last);
        }
        let mut yp = vec![BigInt::from(1)];
        for _ in 0..w {
            let last = yp.last().unwrap() * y;
            yp.push(last);
        }
        let mut acc = Rat::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * Rat::from_integer(&xp[i] * &yp[w - i]);
            }
        }
        acc
    }

    /// Evaluation at a rational point.
    pub fn eval_rat(&self, x: &Rat, y: &Rat) -> Rat {
        let w = self.weight;
        let mut acc = Rat::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * x.pow_u(i as u32) * y.pow_u((w - i) as u32);
            }
        }
        acc
    }

    /// One-variable reading `P(1, x)`: the coefficient of `x^j` is
    /// `coeffs[w - j]`.
    pub fn eval_one_var(&self, x: &Rat) -> Rat {
        self.eval_rat(&Rat::from_int(1), x)
    }
}

impl std::fmt::Display for HomPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*X^{}*Y^{}", c, i, self.weight - i))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Right action by homogeneous substitution:
/// `slash(P, M) = P(aX + bY, cX + dY)`.
///
/// For `det M = 1` this is a right group action; for determinant `n > 1` it
/// is the plain substitution used by the Manin-matrix Hecke operator (no
/// determinant normalization).
pub fn slash(p: &HomPoly, m: &Mat2Z) -> HomPoly {
    let w = p.weight;
    // (aX + bY)^i for i = 0..w, as coefficient vectors over X^j Y^{i-j}
    let pow_top = linear_powers(&m.a, &m.b, w);
    let pow_bot = linear_powers(&m.c, &m.d, w);
    let mut out = HomPoly::zero(w);
    for (i, coeff) in p.coeffs.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let top = &pow_top[i];
        let bot = &pow_bot[w - i];
        for (j1, t) in top.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            for (j2, b) in bot.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[j1 + j2] += coeff * Rat::from_integer(t * b);
                }
            }
        }
    }
    out
}

/// All powers `(uX + vY)^i`, `i = 0..=w`, as integer coefficient vectors.
fn linear_powers(u: &BigInt, v: &BigInt, w: usize) -> Vec<Vec<BigInt>> {
    let mut pows = Vec::with_capacity(w + 1);
    pows.push(vec![BigInt::from(1)]);
    for i in 1..=w {
        let prev: &Vec<BigInt> = &pows[i - 1];
        let mut next = vec![BigInt::zero(); i + 1];
        for (j, c) in prev.iter().enumerate() {
            if !c.is_zero() {
                next[j + 1] += c * u;
                next[j] += c * v;
            }
        }
        pows.push(next);
    }
    pows
}

/// `(P(X, Y) +- P(X, -Y)) / 2`.
pub fn parity_project(p: &HomPoly, parity: Parity) -> HomPoly {
    let w = p.weight;
    let mut out = p.clone();
    for (i, c) in out.coeffs.iter_mut().enumerate() {
        // Y -> -Y multiplies X^i Y^{w-i} by (-1)^{w-i}
        let keep = match parity {
            Parity::Even => (w - i) % 2 == 0,
            Parity::Odd => (w - i) % 2 == 1,
            Parity::Both => true,
        };
        if !keep {
            *c = Rat::zero();
        }
    }
    out
}

fn parity_constraint_rows(w: usize, parity: Parity) -> Vec<Vec<Rat>> {
    let n = w + 1;
    let mut rows = Vec::new();
    for i in 0..n {
        let kill = match parity {
            Parity::Even => (w - i) % 2 == 1,
            Parity::Odd => (w - i) % 2 == 0,
            Parity::Both => false,
        };
        if kill {
            let mut row = vec![Rat::zero(); n];
            row[i] = Rat::from_int(1);
            rows.push(row);
        }
    }
    rows
}

/// Rows of the linear map `P -> sum_k P | M_k` on the monomial basis.
fn action_rows(w: usize, mats: &[Mat2Z], include_identity: bool) -> Vec<Vec<Rat>> {
    let n = w + 1;
    // column i = image of the i-th monomial
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = HomPoly::zero(w);
        e.coeffs[i] = Rat::from_int(1);
        let mut img = if include_identity {
            e.clone()
        } else {
            HomPoly::zero(w)
        };
        for m in mats {
            img = img.add(&slash(&e, m));
        }
        cols.push(img);
    }
    (0..n)
        .map(|j| (0..n).map(|i| cols[i].coeffs[j].clone()).collect())
        .collect()
}

/// Exact basis of `W_w = { P : P + P|S = 0, P + P|U + P|U^2 = 0 }`,
/// intersected with the chosen parity subspace.
pub fn basis_w(w: usize, parity: Parity) -> Vec<HomPoly> {
    assert!(w >= 2 && w % 2 == 0, "weight must be even and >= 2");
    let s = Mat2Z::s();
    let u = Mat2Z::u();
    let u2 = u.mul(&u);
    let mut rows = action_rows(w, &[s], true);
    rows.extend(action_rows(w, &[u, u2], true));
    rows.extend(parity_constraint_rows(w, parity));
    linalg::kernel_basis(rows, w + 1)
        .into_iter()
        .map(|v| HomPoly::new(w, v))
        .collect()
}

/// Exact basis of `U_w = { g : g(h+k, k) + g(h, h+k) = g(h, k), g(1,1) = 0 }`,
/// intersected with the chosen parity subspace. The polynomials are read in
/// the variables `(h, k)` with the same coefficient convention.
pub fn basis_u(w: usize, parity: Parity) -> Vec<HomPoly> {
    assert!(w >= 2 && w % 2 == 0, "weight must be even and >= 2");
    // g(h+k, k) = g | [1 1; 0 1], g(h, h+k) = g | [1 0; 1 1]
    let m1 = Mat2Z::t();
    let m2 = Mat2Z::new(1, 0, 1, 1);
    let mut rows = Vec::new();
    // g|m1 + g|m2 - g = 0
    let n = w + 1;
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = HomPoly::zero(w);
        e.coeffs[i] = Rat::from_int(1);
        let img = slash(&e, &m1).add(&slash(&e, &m2)).sub(&e);
        cols.push(img);
    }
    for j in 0..n {
        rows.push((0..n).map(|i| cols[i].coeffs[j].clone()).collect());
    }
    // g(1, 1) = 0 is the single functional summing all coefficients
    rows.push(vec![Rat::from_int(1); n]);
    rows.extend(parity_constraint_rows(w, parity));
    linalg::kernel_basis(rows, w + 1)
        .into_iter()
        .map(|v| HomPoly::new(w, v))
        .collect()
}

/// Membership in `W_w`: both period relations hold exactly.
pub fn in_w_space(p: &HomPoly) -> bool {
    let s = Mat2Z::s();
    let u = Mat2Z::u();
    let u2 = u.mul(&u);
    p.add(&slash(p, &s)).is_zero() && p.add(&slash(p, &u)).add(&slash(p, &u2)).is_zero()
}

/// Membership in `U_w`: reciprocity relation and vanishing at `(1, 1)`.
pub fn in_u_space(g: &HomPoly) -> bool {
    let m1 = Mat2Z::t();
    let m2 = Mat2Z::new(1, 0, 1, 1);
    slash(g, &m1).add(&slash(g, &m2)).sub(g).is_zero()
        && g.eval_int(&BigInt::from(1), &BigInt::from(1)).is_zero()
}

/// Dimension of the space of cusp forms of weight `k` on the full modular
/// group, by the classical closed formula.
pub fn dim_cuspforms(k: usize) -> usize {
    assert!(k >= 4 && k % 2 == 0, "weight must be even and >= 4");
    if k % 12 == 2 {
        k / 12 - 1
    } else {
        k / 12
    }
}

/// Exact power `c^w` as a rational, for homogeneity scalings.
pub fn int_pow_rat(c: &BigInt, w: u32) -> Rat {
    Rat::from_integer(bigint_pow(c, w))
}
