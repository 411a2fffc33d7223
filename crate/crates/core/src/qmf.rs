//! Quantum modular forms with polynomial period functions, as evaluable
//! functions on the rationals.
//!
//! The central maps:
//!
//! - `psi` sends a Dedekind symbol `E` to the form
//!   `f_E(k/h) = h^{-w} E(h, k)` (well-defined by homogeneity, periodic by
//!   the symbol axioms);
//! - `hmap` recovers the period polynomial
//!   `H(h, k) = h^w f(k/h) - k^w f(-h/k)` of a periodic form by exact
//!   interpolation, so that `hmap . psi = beta` on symbols;
//! - `hecke` applies `(T_n f)(x) = sum_{ad=n, d>0} d^w sum_{b mod d}
//!   f((ax + b)/d)`, compatibly with the symbol-level Hecke operator.
//!
//! Forms that are periodic with zero period function make up the
//! one-dimensional family `c (gcd(h,k)/h)^w` in the even case and vanish in
//! the odd case; `QForm::gcd_ratio` is that family.
//!
//! Equality of forms is undecidable in general; `qforms_agree` implements
//! the working notion: exact agreement at a deterministic seeded sample of
//! rationals plus a fixed structured set.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dedekind::{divisor_pairs, Symbol};
use crate::exactnum::{bigint_pow, Rat, RatExt};
use crate::linalg;
use crate::polyspace::{basis_u, parity_project, slash, HomPoly, Parity};
use crate::report::{CheckRecord, Report};
use crate::Mat2Z;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QmfError {
    #[error("period function is not a polynomial of degree <= {weight} (mismatch at x = {at})")]
    NonPolynomialPeriod { weight: usize, at: Rat },
}

#[derive(Clone)]
enum QKind {
    /// `f(k/h) = h^{-w} E(h, k)`.
    SymbolBacked(Symbol),
    /// `f(k/h) = c (gcd(h, k)/h)^w`.
    GcdRatio(Rat),
    /// `(T_n f)` evaluated through the divisor sum.
    Hecke { inner: Arc<QForm>, n: u64 },
}

/// A quantum modular form of weight `-w`, evaluable at any rational.
#[derive(Clone)]
pub struct QForm {
    weight: usize,
    kind: QKind,
}

impl QForm {
    /// The form `c (gcd(h,k)/h)^w`: the full kernel of the period map in
    /// the even case, and `psi` of `c * gcd(h,k)^w`.
    pub fn gcd_ratio(c: Rat, weight: usize) -> QForm {
        assert!(weight >= 2 && weight % 2 == 0);
        QForm {
            weight,
            kind: QKind::GcdRatio(c),
        }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Hecke image `T_n f` of this form.
    pub fn hecke(&self, n: u64) -> QForm {
        assert!(n >= 1);
        QForm {
            weight: self.weight,
            kind: QKind::Hecke {
                inner: Arc::new(self.clone()),
                n,
            },
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &Rat) -> Rat {
        match &self.kind {
            QKind::SymbolBacked(e) => {
                let h = x.denom();
                let k = x.numer();
                let scale = Rat::from_integer(bigint_pow(h, self.weight as u32));
                e.eval(h, k).expect("denominators are positive") / scale
            }
            QKind::GcdRatio(c) => {
                // reduced input: gcd(h, k) = 1
                let h = x.denom();
                c / Rat::from_integer(bigint_pow(h, self.weight as u32))
            }
            QKind::Hecke { inner, n } => {
                let mut acc = Rat::zero();
                for (a, d) in divisor_pairs(*n) {
                    let dw = Rat::from_integer(bigint_pow(&BigInt::from(d), self.weight as u32));
                    for b in 0..d {
                        let arg = (Rat::from_integer(BigInt::from(a)) * x
                            + Rat::from_integer(BigInt::from(b)))
                            / Rat::from_integer(BigInt::from(d));
                        acc += &dw * inner.eval(&arg);
                    }
                }
                acc
            }
        }
    }
}

/// `Psi_w`: the quantum modular form `k/h -> h^{-w} E(h, k)` attached to a
/// Dedekind symbol.
pub fn psi(e: &Symbol) -> QForm {
    QForm {
        weight: e.weight(),
        kind: QKind::SymbolBacked(e.clone()),
    }
}

/// `H_w`: period polynomial of a periodic form, by exact interpolation of
/// `g(x) = f(x) - x^w f(-1/x)` at `x = 1..=w+1` with verification at
/// `x = w+2` and `x = -1..=-w`.
pub fn hmap(f: &QForm) -> Result<HomPoly, QmfError> {
    let w = f.weight;
    let g = |x: &Rat| -> Rat {
        let inv = -x.recip();
        f.eval(x) - x.pow_u(w as u32) * f.eval(&inv)
    };
    let nodes: Vec<Rat> = (1..=(w as i64 + 1)).map(Rat::from_int).collect();
    let mat: Vec<Vec<Rat>> = nodes
        .iter()
        .map(|x| (0..=w).map(|j| x.pow_u(j as u32)).collect())
        .collect();
    let rhs: Vec<Rat> = nodes.iter().map(|x| g(x)).collect();
    let one_var = linalg::solve(&mat, &rhs).expect("Vandermonde is invertible");
    // homogenize: coefficient of x^j goes to h^{w-j} k^j
    let mut coeffs = vec![Rat::zero(); w + 1];
    for (j, c) in one_var.iter().enumerate() {
        coeffs[w - j] = c.clone();
    }
    let poly = HomPoly::new(w, coeffs);
    let mut check_nodes: Vec<Rat> = vec![Rat::from_int(w as i64 + 2)];
    check_nodes.extend((1..=(w as i64)).map(|j| Rat::from_int(-j)));
    for x in check_nodes {
        if poly.eval_one_var(&x) != g(&x) {
            return Err(QmfError::NonPolynomialPeriod { weight: w, at: x });
        }
    }
    Ok(poly)
}

/// Deterministic pseudo-random rationals for function-agreement checks.
pub fn seeded_rationals(seed: u64, count: usize, max_h: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let h = rng.gen_range(1..=max_h) as i64;
            let k = rng.gen_range(-4 * h..=4 * h);
            Rat::new(BigInt::from(k), BigInt::from(h))
        })
        .collect()
}

/// The fixed structured sample `{0, +-1, +-1/2, +-1/3}`.
pub fn structured_points() -> Vec<Rat> {
    let mut pts = vec![Rat::zero()];
    for (n, d) in [(1i64, 1i64), (1, 2), (1, 3)] {
        pts.push(Rat::new(n.into(), d.into()));
        pts.push(Rat::new((-n).into(), d.into()));
    }
    pts
}

/// Working equality of forms: exact agreement at `count` seeded rationals
/// with denominator at most `max_h`, plus the structured points.
pub fn qforms_agree(f: &QForm, g: &QForm, seed: u64, count: usize, max_h: u64) -> bool {
    let mut pts = structured_points();
    pts.extend(seeded_rationals(seed, count, max_h));
    pts.iter().all(|x| f.eval(x) == g.eval(x))
}

/// All symbols used as a basis of the weight-`w` symbol space: the `U_w`
/// basis reconstructions (with `c0 = 0`) together with `gcd^w`, which spans
/// the reciprocity kernel.
pub fn symbol_space_basis(w: usize) -> Vec<Symbol> {
    let mut symbols: Vec<Symbol> = basis_u(w, Parity::Both)
        .into_iter()
        .map(|g| Symbol::reconstruct(g, Rat::zero()).expect("basis members are valid"))
        .collect();
    symbols.push(Symbol::gcd_power(w));
    symbols
}

/// Verifies the commuting-diagram identities at weight `w`, exactly:
///
/// 1. `hmap(psi(E)) = beta(E) = g` for every reconstruction of a `U_w`
///    basis element (both parities, `c0` in `{0, 1}` for even parity);
/// 2. parity is preserved: `psi` of an even/odd symbol is an even/odd
///    function and its period polynomial has the same parity;
/// 3. `psi` is injective on a basis of the symbol space (evaluation matrix
///    has full rank);
/// 4. the kernel facts: `hmap(psi(gcd^w)) = 0`, `hmap(psi(h^w)) = h^w - k^w`.
pub fn check_diagram(w: usize, seed: u64) -> Report {
    let mut report = Report::new(format!("diagram[w={w}]"));

    for parity in [Parity::Even, Parity::Odd] {
        let tag = if parity == Parity::Even { "+" } else { "-" };
        let c0s: Vec<Rat> = if parity == Parity::Even {
            vec![Rat::zero(), Rat::from_int(1)]
        } else {
            vec![Rat::zero()]
        };
        let basis = basis_u(w, parity);
        if basis.is_empty() {
            report.push(CheckRecord::skip(
                format!("hmap.psi=beta[{tag}]"),
                format!("U_{w}^{tag} is zero-dimensional"),
            ));
            continue;
        }
        for (idx, g) in basis.iter().enumerate() {
            for c0 in &c0s {
                let name = format!("hmap.psi=beta[{tag},{idx},c0={c0}]");
                let e = match Symbol::reconstruct(g.clone(), c0.clone()) {
                    Ok(e) => e,
                    Err(err) => {
                        report.push(CheckRecord::fail(name, format!("reconstruct: {err}")));
                        continue;
                    }
                };
                let via_beta = e.beta();
                let via_hmap = hmap(&psi(&e));
                match (via_beta, via_hmap) {
                    (Ok(b), Ok(h)) if &b == g && h == b => {
                        report.push(CheckRecord::pass(name, String::new()))
                    }
                    (b, h) => report.push(CheckRecord::fail(
                        name,
                        format!("beta = {b:?}, hmap = {h:?}, expected {g}"),
                    )),
                }
            }
        }
        // parity preservation through psi and hmap
        let sample = seeded_rationals(seed, 40, 500);
        for (idx, g) in basis.iter().enumerate() {
            let name = format!("parity-commutes[{tag},{idx}]");
            let e = Symbol::reconstruct(g.clone(), Rat::zero()).expect("valid basis");
            let f = psi(&e);
            let sign = if parity == Parity::Even {
                Rat::from_int(1)
            } else {
                Rat::from_int(-1)
            };
            let fn_parity_ok = sample.iter().all(|x| f.eval(&(-x)) == &sign * f.eval(x));
            let h = hmap(&f).expect("polynomial period");
            let poly_parity_ok = parity_project(&h, parity) == h;
            if fn_parity_ok && poly_parity_ok {
                report.push(CheckRecord::pass(name, String::new()));
            } else {
                report.push(CheckRecord::fail(
                    name,
                    format!("function parity {fn_parity_ok}, polynomial parity {poly_parity_ok}"),
                ));
            }
        }
    }

    // injectivity of psi on a basis of the symbol space
    {
        let symbols = symbol_space_basis(w);
        let mut pts = structured_points();
        pts.extend(seeded_rationals(seed ^ 0x9e3779b9, 2 * symbols.len() + 4, 200));
        let rows: Vec<Vec<Rat>> = symbols
            .iter()
            .map(|e| {
                let f = psi(e);
                pts.iter().map(|x| f.eval(x)).collect()
            })
            .collect();
        let rank = linalg::rank(&rows);
        if rank == symbols.len() {
            report.push(CheckRecord::pass(
                "psi-injective-on-basis".into(),
                format!("rank {rank} of {}", symbols.len()),
            ));
        } else {
            report.push(CheckRecord::fail(
                "psi-injective-on-basis".into(),
                format!("rank {rank} of {}", symbols.len()),
            ));
        }
    }

    // kernel facts
    {
        let g_img = hmap(&psi(&Symbol::gcd_power(w)));
        let name = "hmap.psi(gcd^w)=0".to_string();
        match g_img {
            Ok(p) if p.is_zero() => report.push(CheckRecord::pass(name, String::new())),
            other => report.push(CheckRecord::fail(name, format!("{other:?}"))),
        }
        let f_img = hmap(&psi(&Symbol::power_h(w)));
        let name = "hmap.psi(h^w)=h^w-k^w".to_string();
        match f_img {
            Ok(p) if p == HomPoly::x_pow_minus_y_pow(w) => {
                report.push(CheckRecord::pass(name, String::new()))
            }
            other => report.push(CheckRecord::fail(name, format!("{other:?}"))),
        }
    }

    report
}

/// Exact check that the period polynomial output satisfies both period
/// relations of `W_w`.
pub fn satisfies_period_relations(p: &HomPoly) -> bool {
    let s = Mat2Z::s();
    let u = Mat2Z::u();
    let u2 = u.mul(&u);
    p.add(&slash(p, &s)).is_zero() && p.add(&slash(p, &u)).add(&slash(p, &u2)).is_zero()
}
