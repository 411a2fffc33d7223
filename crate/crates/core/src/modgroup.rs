//! `Gamma_0(2)` word machinery, the multiplier system `chi`, and coset
//! tables for `Gamma_0(M)`.
//!
//! `Gamma_0(2)` is generated by `T = [1 1; 0 1]` and `R = [1 0; 2 1]`.
//! Every element decomposes as `+- T^{q_1} R^{m_1} T^{q_2} ...` by a
//! Euclidean reduction: stripping `T^q` replaces `a` by `a - qc`, stripping
//! `R^m` replaces `c` by `c - 2ma`, and with nearest-integer quotients the
//! lower-left entry at least halves every round. Elements of `Gamma_0(2)`
//! have odd diagonal entries, so the pivot never vanishes.
//!
//! The multiplier system of interest takes `chi(T) = chi(R) = zeta_24`; its
//! value on a word is `zeta_24` to the sum of all exponents, and
//! `chi(-I) = 1` because `-I = (R T^{-1})^2`. Well-definedness (independence
//! of the chosen word) is not assumed: it is property-tested, both across
//! reduction orders and on random products.
//!
//! For the double-coset Hecke operator at a prime `p`, the standard orbit
//! representatives are `beta_j = [1 j; 0 p]` and `beta_inf = [p 0; 0 1]`;
//! two multiplier systems `chi, chi'` are compatible at `alpha = [1 0; 0 p]`
//! exactly when `chi(gamma) = chi'(alpha^-1 gamma alpha)` on
//! `Gamma_0(2p) = Gamma_0(2) cap alpha Gamma_0(2) alpha^-1`, which is
//! checked on Schreier generators (sufficient, both sides being
//! homomorphisms) plus a randomized spot check on products.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactnum::{Cplx, Mat2Z, Rat, RatExt, Zeta24};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModGroupError {
    #[error("matrix {0} is not in Gamma_0(2) (need det 1 and even lower-left entry)")]
    NotInGamma02(Mat2Z),
    #[error("word exponent does not fit in i64")]
    ExponentOverflow,
    #[error("p = {0} must be a prime >= 5 (coprime to 6)")]
    BadHeckePrime(u64),
    #[error("internal: lower-left entry of {0} is not divisible by {1}")]
    NotDivisible(Mat2Z, u64),
}

/// Generators of `Gamma_0(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    T,
    R,
}

/// A signed product of powers of `T` and `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub sign: i8,
    pub factors: Vec<(Gen, i64)>,
}

impl Word {
    /// Multiplies the word back out; this must reproduce the source matrix
    /// of a decomposition exactly.
    pub fn assemble(&self) -> Mat2Z {
        let mut m = Mat2Z::identity();
        for &(gen, e) in &self.factors {
            let factor = match gen {
                Gen::T => Mat2Z::t_pow(e),
                Gen::R => Mat2Z::r_pow(e),
            };
            m = m.mul(&factor);
        }
        if self.sign < 0 {
            m = m.neg();
        }
        m
    }

    /// Sum of all exponents of the given generator.
    pub fn exponent_sum(&self, gen: Gen) -> i64 {
        self.factors
            .iter()
            .filter(|(g, _)| *g == gen)
            .map(|(_, e)| e)
            .sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(g, e)| format!("{}^{}", if *g == Gen::T { "T" } else { "R" }, e))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Which generator to strip first in each reduction round. Both orders are
/// valid; having two lets well-definedness of multiplier values be tested
/// across genuinely different decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionOrder {
    TFirst,
    RFirst,
}

/// Nearest-integer quotient: `round(a/c)` with `|a - qc| <= |c|/2`.
fn nearest_quotient(a: &BigInt, c: &BigInt) -> BigInt {
    let num: BigInt = a * 2 + c;
    let den: BigInt = c * 2;
    num.div_floor(&den)
}

pub fn decompose_gamma02(gamma: &Mat2Z) -> Result<Word, ModGroupError> {
    decompose_gamma02_with(gamma, ReductionOrder::TFirst)
}

/// Decomposes `gamma` in `Gamma_0(2)` into a word in `T`, `R`.
pub fn decompose_gamma02_with(
    gamma: &Mat2Z,
    order: ReductionOrder,
) -> Result<Word, ModGroupError> {
    if gamma.det() != BigInt::one() || !(&gamma.c % 2u8).is_zero() {
        return Err(ModGroupError::NotInGamma02(gamma.clone()));
    }
    let to_i64 = |x: &BigInt| x.to_i64().ok_or(ModGroupError::ExponentOverflow);

    let (mut a, mut b, mut c, mut d) = (
        gamma.a.clone(),
        gamma.b.clone(),
        gamma.c.clone(),
        gamma.d.clone(),
    );
    let mut factors: Vec<(Gen, i64)> = Vec::new();
    // strip T^q: gamma = T^q gamma', row1 -= q * row2
    // strip R^m: gamma = R^m gamma', row2 -= 2m * row1
    while !c.is_zero() {
        let strip_t = |a: &mut BigInt,
                       b: &mut BigInt,
                       c: &BigInt,
                       d: &BigInt,
                       factors: &mut Vec<(Gen, i64)>|
         -> Result<(), ModGroupError> {
            let q = nearest_quotient(a, c);
            if !q.is_zero() {
                *a -= &q * c;
                *b -= &q * d;
                factors.push((Gen::T, to_i64(&q)?));
            }
            Ok(())
        };
        let strip_r = |a: &BigInt,
                       b: &BigInt,
                       c: &mut BigInt,
                       d: &mut BigInt,
                       factors: &mut Vec<(Gen, i64)>|
         -> Result<(), ModGroupError> {
            let two_a = 2 * a;
            let m = nearest_quotient(c, &two_a);
            if !m.is_zero() {
                *c -= &m * &two_a;
                *d -= &m * &(2 * b);
                factors.push((Gen::R, to_i64(&m)?));
            }
            Ok(())
        };
        match order {
            ReductionOrder::TFirst => {
                strip_t(&mut a, &mut b, &c, &d, &mut factors)?;
                if !c.is_zero() {
                    strip_r(&a, &b, &mut c, &mut d, &mut factors)?;
                }
            }
            ReductionOrder::RFirst => {
                strip_r(&a, &b, &mut c, &mut d, &mut factors)?;
                if !c.is_zero() {
                    strip_t(&mut a, &mut b, &c, &d, &mut factors)?;
                }
            }
        }
    }
    // now the matrix is [a b; 0 d] with ad = 1, i.e. +-T^(b/a)
    let sign = if a.is_one() { 1i8 } else { -1 };
    let tail = if sign > 0 { b.clone() } else { -&b };
    if !tail.is_zero() {
        factors.push((Gen::T, to_i64(&tail)?));
    }
    Ok(Word { sign, factors })
}

/// A multiplier system on `Gamma_0(2)`, determined by its values on the
/// generators `T` and `R` (both 24th roots of unity here).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultSys {
    pub on_t: Zeta24,
    pub on_r: Zeta24,
}

impl MultSys {
    /// The multiplier of Zagier's sigma-form: `chi(T) = chi(R) = zeta_24`.
    pub fn chi() -> MultSys {
        MultSys {
            on_t: Zeta24::GEN,
            on_r: Zeta24::GEN,
        }
    }

    pub fn trivial() -> MultSys {
        MultSys {
            on_t: Zeta24::ONE,
            on_r: Zeta24::ONE,
        }
    }

    /// The power `chi^p` (exponents scale by `p`).
    pub fn pow(&self, p: i64) -> MultSys {
        MultSys {
            on_t: self.on_t.pow(p),
            on_r: self.on_r.pow(p),
        }
    }

    /// Value on `-I`, forced by `-I = (R T^{-1})^2`.
    pub fn minus_identity(&self) -> Zeta24 {
        (self.on_r * self.on_t.inv()).pow(2)
    }

    fn eval_word(&self, w: &Word) -> Zeta24 {
        let t_sum = w.exponent_sum(Gen::T);
        let r_sum = w.exponent_sum(Gen::R);
        let mut v = self.on_t.pow(t_sum) * self.on_r.pow(r_sum);
        if w.sign < 0 {
            v = v * self.minus_identity();
        }
        v
    }
}

/// Evaluates the multiplier system on `gamma` through a word decomposition.
pub fn chi_eval(gamma: &Mat2Z, ms: &MultSys) -> Result<Zeta24, ModGroupError> {
    Ok(ms.eval_word(&decompose_gamma02(gamma)?))
}

/// Same value computed through the other reduction order; used by the
/// well-definedness tests.
pub fn chi_eval_with(
    gamma: &Mat2Z,
    ms: &MultSys,
    order: ReductionOrder,
) -> Result<Zeta24, ModGroupError> {
    Ok(ms.eval_word(&decompose_gamma02_with(gamma, order)?))
}

/// Coset table for `Gamma_0(M) \ SL_2(Z)`, indexed by the projective line
/// over `Z/M`: the coset of `[a b; c d]` corresponds to `(c : d)`.
pub struct CosetTable {
    pub level: u64,
    points: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
    transversal: Vec<Mat2Z>,
}

impl CosetTable {
    /// Canonical representative of `(c : d)` in `P^1(Z/M)`: the
    /// lexicographically least unit multiple.
    fn canonical(c: u64, d: u64, m: u64) -> (u64, u64) {
        if m == 1 {
            return (0, 0);
        }
        let c = c % m;
        let d = d % m;
        let mut best: Option<(u64, u64)> = None;
        for lam in 1..m {
            if gcd_u64(lam, m) != 1 {
                continue;
            }
            let cand = ((lam * c) % m, (lam * d) % m);
            if best.is_none() || cand < best.unwrap() {
                best = Some(cand);
            }
        }
        best.unwrap()
    }

    /// Breadth-first orbit enumeration over right multiplication by `S`
    /// and `T`, starting at the identity coset.
    pub fn build(m: u64) -> CosetTable {
        assert!(m >= 1);
        let gens = [Mat2Z::s(), Mat2Z::t()];
        let start = Self::canonical(0, 1, m);
        let mut points = vec![start];
        let mut index = HashMap::from([(start, 0usize)]);
        let mut transversal = vec![Mat2Z::identity()];
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let rep = transversal[i].mul(g);
                let c = rep.c.mod_floor(&BigInt::from(m)).to_u64().unwrap();
                let d = rep.d.mod_floor(&BigInt::from(m)).to_u64().unwrap();
                let pt = Self::canonical(c, d, m);
                if !index.contains_key(&pt) {
                    index.insert(pt, points.len());
                    points.push(pt);
                    transversal.push(rep);
                    queue.push_back(points.len() - 1);
                }
            }
        }
        CosetTable {
            level: m,
            points,
            index,
            transversal,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn transversal(&self) -> &[Mat2Z] {
        &self.transversal
    }

    fn point_of(&self, mat: &Mat2Z) -> usize {
        let m = BigInt::from(self.level);
        let c = mat.c.mod_floor(&m).to_u64().unwrap();
        let d = mat.d.mod_floor(&m).to_u64().unwrap();
        self.index[&Self::canonical(c, d, self.level)]
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Index of `Gamma_0(M)` in the modular group: `M prod_{q | M} (1 + 1/q)`.
pub fn expected_index(m: u64) -> u64 {
    let mut idx = m;
    let mut rem = m;
    let mut q = 2;
    while q * q <= rem {
        if rem % q == 0 {
            idx = idx / q * (q + 1);
            while rem % q == 0 {
                rem /= q;
            }
        }
        q += 1;
    }
    if rem > 1 {
        idx = idx / rem * (rem + 1);
    }
    idx
}

/// Schreier generators of `Gamma_0(M)`: `rep_i g rep_{i.g}^{-1}` over the
/// coset transversal with `g` in `{S, T}`. The returned set generates
/// `Gamma_0(M)`; the identity is dropped.
pub fn schreier_generators(m: u64) -> Vec<Mat2Z> {
    let table = CosetTable::build(m);
    let gens = [Mat2Z::s(), Mat2Z::t()];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rep in table.transversal() {
        for g in &gens {
            let rg = rep.mul(g);
            let target = &table.transversal()[table.point_of(&rg)];
            let gamma = rg.mul(&target.inverse_unimodular().expect("transversal has det 1"));
            debug_assert!(gamma.c.mod_floor(&BigInt::from(m)).is_zero());
            if !gamma.is_identity() && seen.insert(gamma.clone()) {
                out.push(gamma);
            }
        }
    }
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// One generator's worth of evidence in a compatibility check.
#[derive(Clone, Debug)]
pub struct CompatPair {
    pub gamma: Mat2Z,
    pub lhs: Zeta24,
    pub rhs: Zeta24,
}

/// Result of checking `chi(gamma) = chi(alpha^-1 gamma alpha)^p` on
/// `Gamma_0(2p)`.
#[derive(Clone, Debug)]
pub struct CompatCheck {
    pub p: u64,
    pub generator_pairs: Vec<CompatPair>,
    pub spot_checked: usize,
    pub pass: bool,
}

/// Lemma-style compatibility criterion for `chi` and `chi^p` at
/// `alpha = [1 0; 0 p]`, verified on Schreier generators of `Gamma_0(2p)`
/// plus `spot_products` random products of generators.
pub fn compat_check(p: u64, seed: u64, spot_products: usize) -> Result<CompatCheck, ModGroupError> {
    if p < 5 || !is_prime(p) {
        return Err(ModGroupError::BadHeckePrime(p));
    }
    let chi = MultSys::chi();
    let gens = schreier_generators(2 * p);
    let check_one = |gamma: &Mat2Z| -> Result<CompatPair, ModGroupError> {
        let lhs = chi_eval(gamma, &chi)?;
        let pb = BigInt::from(p);
        if !(&gamma.c % &pb).is_zero() {
            return Err(ModGroupError::NotDivisible(gamma.clone(), p));
        }
        let conj = Mat2Z {
            a: gamma.a.clone(),
            b: &gamma.b * &pb,
            c: &gamma.c / &pb,
            d: gamma.d.clone(),
        };
        let rhs = chi_eval(&conj, &chi)?.pow(p as i64);
        Ok(CompatPair {
            gamma: gamma.clone(),
            lhs,
            rhs,
        })
    };
    let mut pairs = Vec::with_capacity(gens.len());
    for g in &gens {
        pairs.push(check_one(g)?);
    }
    let mut pass = pairs.iter().all(|pr| pr.lhs == pr.rhs);
    // randomized products of generators; the criterion is multiplicative,
    // so generator equality should imply these
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let mut spot_checked = 0;
    if !gens.is_empty() {
        for _ in 0..spot_products {
            let n_factors = rng.gen_range(2..=3);
            let mut gamma = Mat2Z::identity();
            for _ in 0..n_factors {
                gamma = gamma.mul(&gens[rng.gen_range(0..gens.len())]);
            }
            let pr = check_one(&gamma)?;
            if pr.lhs != pr.rhs {
                pass = false;
            }
            spot_checked += 1;
        }
    }
    Ok(CompatCheck {
        p,
        generator_pairs: pairs,
        spot_checked,
        pass,
    })
}

/// Orbit representatives of `Gamma_0(2) \ Gamma_0(2) [1 0; 0 p] Gamma_0(2)`:
/// `beta_j = [1 j; 0 p]` for `0 <= j < p`, then `beta_inf = [p 0; 0 1]`.
pub fn coset_reps(p: u64) -> Result<Vec<Mat2Z>, ModGroupError> {
    if p % 2 == 0 {
        return Err(ModGroupError::BadHeckePrime(p));
    }
    let mut reps: Vec<Mat2Z> = (0..p).map(|j| Mat2Z::new(1, j as i64, 0, p as i64)).collect();
    reps.push(Mat2Z::new(p as i64, 0, 0, 1));
    Ok(reps)
}

/// The two factors of `beta_inf = gamma_1 alpha gamma_2` with
/// `gamma_1 = -T^{(p+1)/2} R^{-1}` and `gamma_2 = T^{(p+1)/2} R^{-1}`.
pub fn beta_inf_factors(p: u64) -> (Mat2Z, Mat2Z) {
    let half = ((p + 1) / 2) as i64;
    let g2 = Mat2Z::t_pow(half).mul(&Mat2Z::r_pow(-1));
    let g1 = g2.neg();
    (g1, g2)
}

/// Closed-formula values `c_{chi, chi^p}` on the coset representatives, in
/// the order of [`coset_reps`]: `c(beta_j) = zeta_24^{pj}` and
/// `c(beta_inf) = (-1)^{(p^2-1)/24}`.
pub fn c_values(p: u64) -> Result<Vec<(Mat2Z, Zeta24)>, ModGroupError> {
    if p < 5 || !is_prime(p) {
        return Err(ModGroupError::BadHeckePrime(p));
    }
    // 24 | p^2 - 1 for every prime p >= 5
    assert_eq!((p * p - 1) % 24, 0);
    let reps = coset_reps(p)?;
    let mut out = Vec::with_capacity(reps.len());
    for (j, rep) in reps.iter().enumerate() {
        let value = if j < p as usize {
            Zeta24::new((p as i64) * (j as i64))
        } else {
            // (-1)^{(p^2-1)/24} = zeta_24^{(p^2-1)/2 mod 24}
            Zeta24::new(((p * p - 1) / 2 % 24) as i64)
        };
        out.push((rep.clone(), value));
    }
    Ok(out)
}

/// The same values computed from the defining factorizations through
/// `chi_eval`, for arbitrary multiplier systems: `c(beta_j) = ms'(T^j)` and
/// `c(beta_inf) = ms(gamma_1) ms'(gamma_2)`.
pub fn c_values_for(
    p: u64,
    ms: &MultSys,
    ms_prime: &MultSys,
) -> Result<Vec<(Mat2Z, Zeta24)>, ModGroupError> {
    let reps = coset_reps(p)?;
    let (g1, g2) = beta_inf_factors(p);
    let mut out = Vec::with_capacity(reps.len());
    for (j, rep) in reps.iter().enumerate() {
        let value = if j < p as usize {
            chi_eval(&Mat2Z::t_pow(j as i64), ms_prime)?
        } else {
            let v1 = chi_eval(&g1, ms)?;
            let v2 = chi_eval(&g2, ms_prime)?;
            v1 * v2
        };
        out.push((rep.clone(), value));
    }
    Ok(out)
}

/// One term `c(beta)^{-1} f|beta` of the double-coset Hecke operator.
#[derive(Clone, Debug)]
pub struct HeckeTerm {
    pub rep: Mat2Z,
    /// `c(beta)^{-1}`.
    pub coeff: Zeta24,
}

/// The symbolic term list of `T^oo_{p, chi, chi^p}`.
pub fn general_hecke_terms(p: u64) -> Result<Vec<HeckeTerm>, ModGroupError> {
    Ok(c_values(p)?
        .into_iter()
        .map(|(rep, c)| HeckeTerm {
            rep,
            coeff: c.inv(),
        })
        .collect())
}

#[derive(Debug, Error)]
pub enum HeckeApplyError<E> {
    #[error("slash hits a pole at x = {0}")]
    Pole(Rat),
    #[error(transparent)]
    Inner(E),
}

/// Applies the weight-1 double-coset Hecke operator
/// `sum_j c(beta_j)^{-1} |c x + d|^{-1} f((a x + b)/(c x + d))`
/// to a numerically evaluable function on the rationals.
pub fn apply_general_hecke<E>(
    f: impl Fn(&Rat) -> Result<Cplx, E>,
    p: u64,
) -> Result<impl Fn(&Rat) -> Result<Cplx, HeckeApplyError<E>>, ModGroupError> {
    let terms = general_hecke_terms(p)?;
    Ok(move |x: &Rat| {
        let mut acc = Cplx::new(0.0, 0.0);
        for t in &terms {
            let den = Rat::from_integer(t.rep.c.clone()) * x + Rat::from_integer(t.rep.d.clone());
            if den.is_zero() {
                return Err(HeckeApplyError::Pole(x.clone()));
            }
            let y = (Rat::from_integer(t.rep.a.clone()) * x + Rat::from_integer(t.rep.b.clone()))
                / &den;
            let v = f(&y).map_err(HeckeApplyError::Inner)?;
            let scale = den.to_f64_lossy().abs().recip();
            acc += t.coeff.to_cplx() * v * scale;
        }
        Ok(acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z::new(a, b, c, d)
    }

    #[test]
    fn decompose_t_power() {
        let w = decompose_gamma02(&Mat2Z::t_pow(3)).unwrap();
        assert_eq!(w.sign, 1);
        assert_eq!(w.factors, vec![(Gen::T, 3)]);
    }

    #[test]
    fn decompose_minus_identity() {
        let mi = Mat2Z::identity().neg();
        let w = decompose_gamma02(&mi).unwrap();
        assert_eq!(w.assemble(), mi);
        assert_eq!(chi_eval(&mi, &MultSys::chi()).unwrap(), Zeta24::ONE);
    }

    #[test]
    fn decompose_rejects_outsiders() {
        assert!(matches!(
            decompose_gamma02(&Mat2Z::s()),
            Err(ModGroupError::NotInGamma02(_))
        ));
        assert!(matches!(
            decompose_gamma02(&m(2, 1, 2, 1)),
            Err(ModGroupError::NotInGamma02(_))
        ));
    }

    fn random_gamma02_word(rng: &mut impl Rng, len: usize) -> (Mat2Z, bool) {
        let mut mat = Mat2Z::identity();
        for _ in 0..len {
            let e = rng.gen_range(-4i64..=4);
            if e == 0 {
                continue;
            }
            if rng.gen_bool(0.5) {
                mat = mat.mul(&Mat2Z::t_pow(e));
            } else {
                mat = mat.mul(&Mat2Z::r_pow(e));
            }
        }
        let negate = rng.gen_bool(0.5);
        if negate {
            mat = mat.neg();
        }
        (mat, negate)
    }

    #[test]
    fn decomposition_round_trips_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let (mat, _) = random_gamma02_word(&mut rng, 12);
            for order in [ReductionOrder::TFirst, ReductionOrder::RFirst] {
                let w = decompose_gamma02_with(&mat, order).unwrap();
                assert_eq!(w.assemble(), mat, "order {order:?}");
            }
        }
    }

    #[test]
    fn chi_is_decomposition_independent() {
        let chi = MultSys::chi();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let (mat, _) = random_gamma02_word(&mut rng, 10);
            let v1 = chi_eval_with(&mat, &chi, ReductionOrder::TFirst).unwrap();
            let v2 = chi_eval_with(&mat, &chi, ReductionOrder::RFirst).unwrap();
            assert_eq!(v1, v2, "gamma = {mat}");
        }
    }

    #[test]
    fn chi_is_a_homomorphism_on_random_pairs() {
        let chi = MultSys::chi();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let (g1, _) = random_gamma02_word(&mut rng, 8);
            let (g2, _) = random_gamma02_word(&mut rng, 8);
            let lhs = chi_eval(&g1.mul(&g2), &chi).unwrap();
            let rhs = chi_eval(&g1, &chi).unwrap() * chi_eval(&g2, &chi).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chi_reference_values() {
        let chi = MultSys::chi();
        assert_eq!(chi_eval(&Mat2Z::t(), &chi).unwrap(), Zeta24::GEN);
        assert_eq!(chi_eval(&Mat2Z::r(), &chi).unwrap(), Zeta24::GEN);
        // second generator of the standard Gamma_0(10) list
        assert_eq!(
            chi_eval(&m(3, -1, 10, -3), &chi).unwrap(),
            Zeta24::ONE
        );
    }

    /// The standard generating set of Gamma_0(10) with known chi values.
    fn gamma0_10_generators() -> Vec<(Mat2Z, u8)> {
        vec![
            (m(1, 1, 0, 1), 1),
            (m(3, -1, 10, -3), 0),
            (m(19, -7, 30, -11), 20),
            (m(11, -5, 20, -9), 19),
            (m(7, -5, 10, -7), 0),
        ]
    }

    #[test]
    fn chi_on_gamma0_10_generators_both_sides() {
        let chi = MultSys::chi();
        for (gamma, expected) in gamma0_10_generators() {
            let lhs = chi_eval(&gamma, &chi).unwrap();
            assert_eq!(lhs, Zeta24::new(expected as i64), "gamma = {gamma}");
            let conj = Mat2Z {
                a: gamma.a.clone(),
                b: &gamma.b * 5,
                c: &gamma.c / 5,
                d: gamma.d.clone(),
            };
            let rhs = chi_eval(&conj, &chi).unwrap().pow(5);
            assert_eq!(rhs, lhs, "gamma = {gamma}");
        }
    }

    #[test]
    fn coset_counts_match_index_formula() {
        for m in [1u64, 2, 6, 10, 12, 35] {
            let table = CosetTable::build(m);
            assert_eq!(table.len() as u64, expected_index(m), "M={m}");
        }
        assert_eq!(expected_index(10), 18);
    }

    #[test]
    fn schreier_of_level_one_contains_s_and_t() {
        let gens = schreier_generators(1);
        assert!(gens.contains(&Mat2Z::s()));
        assert!(gens.contains(&Mat2Z::t()));
    }

    #[test]
    fn schreier_generators_are_members() {
        for level in [10u64, 14, 22] {
            for g in schreier_generators(level) {
                assert_eq!(g.det(), BigInt::one());
                assert!(g.c.mod_floor(&BigInt::from(level)).is_zero());
            }
        }
    }

    #[test]
    fn compat_small_primes_pass() {
        for p in [5u64, 7, 11, 13, 53] {
            let check = compat_check(p, 0, 20).unwrap();
            assert!(check.pass, "p = {p}");
        }
    }

    #[test]
    fn compat_rejects_bad_primes() {
        assert!(compat_check(4, 0, 0).is_err());
        assert!(compat_check(3, 0, 0).is_err());
    }

    #[test]
    fn coset_reps_shape() {
        let reps = coset_reps(5).unwrap();
        assert_eq!(reps.len(), 6);
        // beta_j = beta_0 T^j
        let beta0 = &reps[0];
        for j in 0..5usize {
            assert_eq!(beta0.mul(&Mat2Z::t_pow(j as i64)), reps[j]);
        }
        assert_eq!(reps[5], m(5, 0, 0, 1));
    }

    #[test]
    fn beta_inf_factorization_multiplies_out() {
        for p in [5u64, 7, 11, 13] {
            let (g1, g2) = beta_inf_factors(p);
            let alpha = m(1, 0, 0, p as i64);
            let prod = g1.mul(&alpha).mul(&g2);
            assert_eq!(prod, m(p as i64, 0, 0, 1), "p={p}");
        }
    }

    #[test]
    fn c_values_closed_formulas() {
        let c5 = c_values(5).unwrap();
        // c(beta_inf) = (-1)^1 = -1
        assert_eq!(c5[5].1, Zeta24::MINUS_ONE);
        // c(beta_2) = zeta^10
        assert_eq!(c5[2].1, Zeta24::new(10));
        let c7 = c_values(7).unwrap();
        // c(beta_inf) = (-1)^2 = 1
        assert_eq!(c7[7].1, Zeta24::ONE);
    }

    #[test]
    fn c_values_match_factorization_route() {
        let chi = MultSys::chi();
        for p in [5u64, 7, 11, 13] {
            let closed = c_values(p).unwrap();
            let via_chi = c_values_for(p, &chi, &chi.pow(p as i64)).unwrap();
            assert_eq!(closed.len(), via_chi.len());
            for ((r1, v1), (r2, v2)) in closed.iter().zip(&via_chi) {
                assert_eq!(r1, r2);
                assert_eq!(v1, v2, "p={p}, rep={r1}");
            }
        }
    }

    #[test]
    fn general_hecke_terms_match_displayed_formula() {
        // the operator is (-1)^{(p^2-1)/24} f(px) + (1/p) sum_j zeta^{-pj} f((x+j)/p)
        for p in [5u64, 7] {
            let terms = general_hecke_terms(p).unwrap();
            assert_eq!(terms.len(), p as usize + 1);
            for (j, t) in terms.iter().take(p as usize).enumerate() {
                assert_eq!(t.rep, m(1, j as i64, 0, p as i64));
                assert_eq!(t.coeff, Zeta24::new(-(p as i64) * (j as i64)), "j={j}");
            }
            let inf = &terms[p as usize];
            assert_eq!(inf.rep, m(p as i64, 0, 0, 1));
            let mu = (p * p - 1) / 24;
            let expected = if mu % 2 == 0 {
                Zeta24::ONE
            } else {
                Zeta24::MINUS_ONE
            };
            assert_eq!(inf.coeff, expected);
        }
    }

    #[test]
    fn trivial_multiplier_degenerates_to_plain_divisor_sum() {
        let chi = MultSys::trivial();
        let values = c_values_for(5, &chi, &chi).unwrap();
        assert!(values.iter().all(|(_, v)| v.is_one()));
    }

    #[test]
    fn apply_general_hecke_coset_structure() {
        // with f = 1 the operator evaluates sum of |cx+d|^{-1} c^{-1} terms
        let f = |_: &Rat| -> Result<Cplx, std::convert::Infallible> { Ok(Cplx::new(1.0, 0.0)) };
        let op = apply_general_hecke(f, 5).unwrap();
        let x = Rat::from_int(0);
        let got = op(&x).unwrap();
        // beta_inf contributes (-1); beta_j contribute (1/5) zeta^{-5j}
        let mut expected = Cplx::new(-1.0, 0.0);
        for j in 0..5i64 {
            expected += Zeta24::new(-5 * j).to_cplx() * 0.2;
        }
        assert!((got - expected).norm() < 1e-14);
    }
}
