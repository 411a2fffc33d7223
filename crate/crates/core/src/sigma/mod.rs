//! Ramanujan's sigma(q) at roots of unity and Zagier's quantum modular
//! form built from it.
//!
//! The q-hypergeometric series
//! `sigma(q) = sum_n q^{n(n+1)/2} / ((1+q)...(1+q^n))` has the finite form
//! `sigma(q) = 1 + sum_n (-1)^n q^{n+1} (1-q)(1-q^2)...(1-q^n)` whenever
//! `q^h = 1`: the factor `(1 - q^{ord q})` kills every term past the order
//! of `q`. That makes
//!
//! ```text
//! f(x) = q^{1/24} sigma(q),   q = e^{2 pi i x},  x rational
//! ```
//!
//! a well-defined function on the rationals; it is a weight-1 quantum
//! modular form on `Gamma_0(2)` for the multiplier system `chi` of
//! [`crate::modgroup`], with `f(x+1) = zeta_24 f(x)` and a cocycle
//! `h(x) = |2x+1|^{-1} f(x/(2x+1)) - zeta_24 f(x)` that extends smoothly
//! off `x = -1/2`.
//!
//! Evaluation is `O(h)` per rational `k/h` and capped at `h <= 10^6`.
//! Ordinary evaluations run in double precision with a scaled running
//! product. The smoothness probe is the exception: its sample chains sit
//! next to low-denominator rationals where the partial products spike to
//! thousands of bits and double precision loses everything to
//! cancellation, so those evaluations go through the fixed-point path in
//! [`hiprec`] at a per-point precision chosen from a prepass.

mod hiprec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::{Cplx, Rat, RatExt, Zeta24};
use crate::series::IntSeries;

/// Evaluation cap: the Andrews sum is `O(h)` work per point.
pub const EVAL_DENOM_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SigmaError {
    #[error("denominator {0} exceeds the evaluation cap {EVAL_DENOM_CAP}")]
    DenominatorTooLarge(BigInt),
    #[error("p = {0} must be a prime >= 5")]
    BadHeckePrime(u64),
}

/// Peak term size (in bits) beyond which the double-precision sum can no
/// longer cancel down to full accuracy and the evaluation reruns in fixed
/// point. Final values are O(h), but the partial products spike far higher
/// near low-denominator rationals.
const UPGRADE_PEAK_BITS: f64 = 12.0;

/// `sigma(e^{2 pi i k/h})` by the finite Andrews sum. Depends only on
/// `k mod h`. Runs in double precision with a scaled running product, and
/// transparently reruns in fixed point when the partial products spike
/// high enough to threaten the final accuracy.
pub fn sigma_at_root(k: i64, h: u64) -> Result<Cplx, SigmaError> {
    if h == 0 || h > EVAL_DENOM_CAP {
        return Err(SigmaError::DenominatorTooLarge(BigInt::from(h)));
    }
    let k_mod = k.rem_euclid(h as i64) as u64;
    Ok(sigma_at_root_reduced(k_mod, h))
}

fn sigma_at_root_reduced(k_mod: u64, h: u64) -> Cplx {
    let (value, peak_bits) = sigma_f64_pass(k_mod, h);
    if peak_bits <= UPGRADE_PEAK_BITS {
        value
    } else {
        hiprec::sigma_at_root_fix(k_mod, h, 96)
    }
}

/// Double-precision Andrews sum; also returns the peak bit size reached by
/// the running product, which bounds the cancellation error.
fn sigma_f64_pass(k_mod: u64, h: u64) -> (Cplx, f64) {
    let mut sum = Cplx::new(1.0, 0.0);
    // running product as mantissa * 2^exp, renormalized in exact powers
    // of two so the scaling is lossless
    let mut prod = Cplx::new(1.0, 0.0);
    let mut prod_e: i64 = 0;
    let mut m = 0u64;
    let mut sign = 1.0f64;
    let mut peak_bits = 0.0f64;
    for _ in 0..hiprec::live_terms(k_mod, h) {
        m = (m + k_mod) % h;
        let theta = 2.0 * std::f64::consts::PI * (m as f64) / (h as f64);
        let rot = Cplx::new(theta.cos(), theta.sin());
        if (-1060..=900).contains(&prod_e) {
            sum += sign * rot * prod * 2f64.powi(prod_e as i32);
        }
        prod *= Cplx::new(1.0, 0.0) - rot;
        let nrm = prod.norm();
        if nrm == 0.0 {
            break;
        }
        peak_bits = peak_bits.max(prod_e as f64 + nrm.log2());
        while prod.norm() > 1.8e19 {
            prod *= 2f64.powi(-64);
            prod_e += 64;
        }
        while prod.norm() < 5.4e-20 && prod.norm() > 0.0 {
            prod *= 2f64.powi(64);
            prod_e -= 64;
        }
        sign = -sign;
    }
    (sum, peak_bits)
}

/// Splits a rational into the pieces both evaluation paths need: the
/// denominator, `k mod h` for `sigma`, and `k mod 24h` for the `q^{1/24}`
/// prefactor (whose branch is fixed by the exact rational exponent
/// `x/24`, never by a complex 24th root).
fn split_rational(x: &Rat) -> Result<(u64, u64, u64), SigmaError> {
    let h_big = x.denom();
    let h = h_big
        .to_u64()
        .filter(|&h| h <= EVAL_DENOM_CAP)
        .ok_or_else(|| SigmaError::DenominatorTooLarge(h_big.clone()))?;
    let k = x.numer();
    let k_mod = k.mod_floor(h_big).to_u64().expect("bounded by h");
    let pre_mod = k
        .mod_floor(&BigInt::from(24 * h))
        .to_u64()
        .expect("bounded by 24h");
    Ok((h, k_mod, pre_mod))
}

fn prefactor(pre_mod: u64, h: u64) -> Cplx {
    let theta = 2.0 * std::f64::consts::PI * (pre_mod as f64) / (24.0 * h as f64);
    Cplx::new(theta.cos(), theta.sin())
}

/// `f(x) = q^{1/24} sigma(q)` at a rational `x`.
pub fn f_eval(x: &Rat) -> Result<Cplx, SigmaError> {
    let (h, k_mod, pre_mod) = split_rational(x)?;
    Ok(prefactor(pre_mod, h) * sigma_at_root_reduced(k_mod, h))
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

/// The Hecke image
/// `(T_p f)(x) = (-1)^{(p^2-1)/24} f(px) + (1/p) sum_j zeta_24^{-pj} f((x+j)/p)`
/// by the closed formula. Assumes the multiplier compatibility check for
/// `p` has passed (see `modgroup::compat_check`).
pub fn hecke_sigma(p: u64, x: &Rat) -> Result<Cplx, SigmaError> {
    if p < 5 || !is_prime(p) {
        return Err(SigmaError::BadHeckePrime(p));
    }
    let mu = (p * p - 1) / 24;
    let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
    let p_rat = Rat::from_int(p as i64);
    let mut acc = sign * f_eval(&(Rat::from_int(p as i64) * x))?;
    for j in 0..p {
        let arg = (x + Rat::from_int(j as i64)) / &p_rat;
        let coeff = Zeta24::new(-((p * j) as i64)).to_cplx();
        acc += coeff * f_eval(&arg)? / (p as f64);
    }
    Ok(acc)
}

/// Outcome of comparing the two series for `sigma(q)` as formal integer
/// power series.
#[derive(Clone, Debug)]
pub struct SeriesCheck {
    pub order: usize,
    /// First exponent where the coefficients differ, if any.
    pub first_mismatch: Option<usize>,
    /// Coefficients of the Andrews form up to `order`.
    pub coeffs: Vec<BigInt>,
}

impl SeriesCheck {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Expands both displayed series for `sigma(q)` to the given order and
/// compares coefficients: the q-hypergeometric sum
/// `sum_n q^{n(n+1)/2} / prod_{j<=n} (1+q^j)` against the Andrews form.
pub fn series_identity_check(order: usize) -> SeriesCheck {
    assert!(order >= 1);
    // Andrews: 1 + sum_n (-1)^n q^{n+1} prod_{j=1}^n (1 - q^j)
    let mut andrews = IntSeries::one(order);
    let mut prod = IntSeries::one(order);
    let mut n = 0usize;
    while n + 1 <= order {
        let mut term = IntSeries::zero(order);
        for (i, c) in prod.coeffs.iter().enumerate() {
            if !c.is_zero() && i + n + 1 <= order {
                term.coeffs[i + n + 1] = if n % 2 == 0 { c.clone() } else { -c };
            }
        }
        andrews.add_assign(&term);
        prod = prod.mul_one_plus_qk(n + 1, -1);
        n += 1;
    }
    // hypergeometric: sum_n q^{n(n+1)/2} * prod_{j<=n} (1+q^j)^{-1}
    let mut hyp = IntSeries::zero(order);
    let mut inv_prod = IntSeries::one(order);
    let mut n = 0usize;
    while n * (n + 1) / 2 <= order {
        let shift = n * (n + 1) / 2;
        let mut term = IntSeries::zero(order);
        for (i, c) in inv_prod.coeffs.iter().enumerate() {
            if !c.is_zero() && i + shift <= order {
                term.coeffs[i + shift] = c.clone();
            }
        }
        hyp.add_assign(&term);
        inv_prod = inv_prod.mul_inv_one_plus_qk(n + 1);
        n += 1;
    }
    let first_mismatch = andrews
        .coeffs
        .iter()
        .zip(&hyp.coeffs)
        .position(|(a, b)| a != b);
    SeriesCheck {
        order,
        first_mismatch,
        coeffs: andrews.coeffs,
    }
}

/// One sample chain of the smoothness probe.
#[derive(Clone, Debug)]
pub struct ProbeChain {
    pub base: Rat,
    /// Base point inside the exclusion zone around `-1/2`.
    pub near_singular: bool,
    /// Chain truncated to respect the evaluation cap (Hecke probes only).
    pub clamped_at: Option<u32>,
    /// `(m, x_m, h(x_m))` along the chain.
    pub samples: Vec<(u32, Rat, Cplx)>,
    /// `|h(x_m) - h(x_{m-1})|` for consecutive samples.
    pub diffs: Vec<f64>,
    /// Whether the difference sequence strictly decreases.
    pub decreasing: bool,
}

/// Smoothness evidence for the cocycle of `f` (or of `T_p f` when `p` is
/// given). Heuristic by construction: decreasing difference sequences are
/// consistent with a smooth limit, nothing is proven.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub p: Option<u64>,
    pub chains: Vec<ProbeChain>,
    /// All non-excluded chains have decreasing differences.
    pub pass: bool,
}

/// Ten base points in `(-1, 0)` with denominators in `{3, 7, 9}`, all at
/// distance `>= 0.07` from the singular point `-1/2`, plus one deliberate
/// near-singular point that the probe must flag and exclude.
pub fn default_probe_bases() -> Vec<Rat> {
    let mut pts: Vec<Rat> = [
        (-1i64, 3i64),
        (-2, 3),
        (-1, 7),
        (-2, 7),
        (-3, 7),
        (-5, 7),
        (-6, 7),
        (-1, 9),
        (-2, 9),
        (-7, 9),
    ]
    .iter()
    .map(|&(n, d)| Rat::new(n.into(), d.into()))
    .collect();
    pts.push(Rat::new((-4999).into(), 10000.into()));
    pts
}

const EXCLUSION_RADIUS: f64 = 0.04;

fn near_minus_half(x: &Rat) -> bool {
    (x.to_f64_lossy() + 0.5).abs() < EXCLUSION_RADIUS
}

/// Cocycle of `f` under `R`: `h(x) = |2x+1|^{-1} f(x/(2x+1)) - zeta_24 f(x)`,
/// with the absolute value on `2x+1`. High-precision evaluations.
fn cocycle_value(p: Option<u64>, x: &Rat) -> Result<Cplx, SigmaError> {
    let den = Rat::from_int(2) * x + Rat::from_int(1);
    let y = x / &den;
    let scale = den.to_f64_lossy().abs().recip();
    match p {
        None => {
            let fx = f_eval(x)?;
            let fy = f_eval(&y)?;
            Ok(scale * fy - Zeta24::GEN.to_cplx() * fx)
        }
        Some(p) => {
            let gx = hecke_sigma(p, x)?;
            let gy = hecke_sigma(p, &y)?;
            Ok(scale * gy - Zeta24::new(p as i64).to_cplx() * gx)
        }
    }
}

/// Runs the probe at the default base points with chains `m = 2..=5`.
pub fn cocycle_probe(p: Option<u64>) -> Result<ProbeReport, SigmaError> {
    cocycle_probe_with(p, &default_probe_bases(), 5)
}

/// Probe with caller-chosen base points and chain depth. Sample chains are
/// `x_m = x_0 + 10^{-m}`, `m = 2..=max_m`; for Hecke probes the chain is
/// clamped where the inner denominators would exceed the evaluation cap.
pub fn cocycle_probe_with(
    p: Option<u64>,
    bases: &[Rat],
    max_m: u32,
) -> Result<ProbeReport, SigmaError> {
    let chains: Result<Vec<ProbeChain>, SigmaError> = bases
        .par_iter()
        .map(|base| {
            if near_minus_half(base) {
                return Ok(ProbeChain {
                    base: base.clone(),
                    near_singular: true,
                    clamped_at: None,
                    samples: Vec::new(),
                    diffs: Vec::new(),
                    decreasing: false,
                });
            }
            // walk the chain, stopping where an evaluation (x_m itself,
            // the inner point x_m/(2x_m+1), or a Hecke layer on top of
            // either) would exceed the denominator cap
            let p_factor = BigInt::from(p.unwrap_or(1));
            let cap = BigInt::from(EVAL_DENOM_CAP);
            let mut samples = Vec::new();
            let mut clamped_at = None;
            for m in 2..=max_m.min(5) {
                let xm = base + Rat::new(1.into(), BigInt::from(10u64.pow(m)));
                let den = Rat::from_int(2) * &xm + Rat::from_int(1);
                let inner = &xm / &den;
                let worst = xm.denom().max(inner.denom()) * &p_factor;
                if worst > cap {
                    clamped_at = Some(m - 1);
                    break;
                }
                let value = cocycle_value(p, &xm)?;
                samples.push((m, xm, value));
            }
            let diffs: Vec<f64> = samples
                .windows(2)
                .map(|w| (w[1].2 - w[0].2).norm())
                .collect();
            let decreasing = !diffs.is_empty() && diffs.windows(2).all(|d| d[1] < d[0]);
            Ok(ProbeChain {
                base: base.clone(),
                near_singular: false,
                clamped_at,
                samples,
                diffs,
                decreasing,
            })
        })
        .collect();
    let chains = chains?;
    let pass = chains
        .iter()
        .filter(|c| !c.near_singular)
        .all(|c| c.decreasing);
    Ok(ProbeReport { p, chains, pass })
}

/// Report-only eigenform probe: ratios `(T_p f)(x) / f(x)` at seeded
/// rationals. No assertion is attached to the output.
pub fn eigenform_ratio_probe(
    p: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<(Rat, Cplx)>, SigmaError> {
    let pts = crate::qmf::seeded_rationals(seed, count, 150);
    let mut out = Vec::new();
    for x in pts {
        let fx = f_eval(&x)?;
        if fx.norm() < 1e-9 {
            continue;
        }
        let gx = hecke_sigma(p, &x)?;
        out.push((x, gx / fx));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmf::seeded_rationals;

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn sigma_at_one_is_two() {
        let v = sigma_at_root(0, 1).unwrap();
        assert!((v - Cplx::new(2.0, 0.0)).norm() < 1e-15);
        // independent oracle: the q-hypergeometric series at q -> 1^-
        let q = 0.9995f64;
        let mut sum = 0.0;
        let mut denom = 1.0;
        let mut n = 0u32;
        loop {
            let term = q.powi((n * (n + 1) / 2) as i32) / denom;
            sum += term;
            if term < 1e-12 {
                break;
            }
            n += 1;
            denom *= 1.0 + q.powi(n as i32);
        }
        assert!((sum - 2.0).abs() < 0.01, "hypergeometric limit {sum}");
    }

    #[test]
    fn sigma_at_minus_one() {
        let v = sigma_at_root(1, 2).unwrap();
        assert!((v - Cplx::new(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sigma_depends_only_on_k_mod_h() {
        for (k, h) in [(3i64, 7u64), (-2, 9), (11, 12)] {
            let a = sigma_at_root(k, h).unwrap();
            let b = sigma_at_root(k + h as i64, h).unwrap();
            let c = sigma_at_root(k - 3 * h as i64, h).unwrap();
            assert!((a - b).norm() < 1e-14);
            assert!((a - c).norm() < 1e-14);
        }
    }

    #[test]
    fn truncation_beyond_the_order_adds_nothing() {
        // plain direct sum to 2h terms as a small oracle
        for (k, h) in [(1i64, 5u64), (2, 9), (5, 16)] {
            let mut sum = Cplx::new(1.0, 0.0);
            let mut prod = Cplx::new(1.0, 0.0);
            for n in 0..(2 * h) {
                let theta =
                    2.0 * std::f64::consts::PI * ((k.rem_euclid(h as i64) as u64 * (n + 1) % h) as f64)
                        / h as f64;
                let rot = Cplx::new(theta.cos(), theta.sin());
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * rot * prod;
                prod *= Cplx::new(1.0, 0.0) - rot;
            }
            let fast = sigma_at_root(k, h).unwrap();
            assert!((sum - fast).norm() < 1e-12, "k={k} h={h}");
        }
    }

    #[test]
    fn series_check_short() {
        let check = series_identity_check(7);
        assert!(check.agrees());
        let want = [1i64, 1, -1, 2, -2, 1, 0, 1];
        for (c, w) in check.coeffs.iter().zip(want) {
            assert_eq!(c, &BigInt::from(w));
        }
        assert!(check.coeffs[6].is_zero());
    }

    #[test]
    fn series_check_to_order_50() {
        assert!(series_identity_check(50).agrees());
    }

    #[test]
    fn f_at_zero_is_two() {
        let v = f_eval(&Rat::zero()).unwrap();
        assert!((v - Cplx::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn f_shifts_by_zeta24() {
        let z = Zeta24::GEN.to_cplx();
        for x in seeded_rationals(5, 50, 200) {
            let lhs = f_eval(&(&x + Rat::from_int(1))).unwrap();
            let rhs = z * f_eval(&x).unwrap();
            let denom = rhs.norm().max(1.0);
            assert!((lhs - rhs).norm() / denom < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn f_modulus_is_sigma_modulus() {
        for x in seeded_rationals(9, 20, 100) {
            let (h, k_mod, _) = split_rational(&x).unwrap();
            let s = sigma_at_root_reduced(k_mod, h);
            let f = f_eval(&x).unwrap();
            assert!((f.norm() - s.norm()).abs() < 1e-12 * (1.0 + s.norm()));
        }
    }

    #[test]
    fn f_has_exact_period_24() {
        for x in seeded_rationals(13, 20, 50) {
            let lhs = f_eval(&(&x + Rat::from_int(24))).unwrap();
            let rhs = f_eval(&x).unwrap();
            assert_eq!(lhs, rhs, "x = {x}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let x = Rat::new(1.into(), BigInt::from(EVAL_DENOM_CAP * 2 + 1));
        assert!(matches!(
            f_eval(&x),
            Err(SigmaError::DenominatorTooLarge(_))
        ));
    }

    #[test]
    fn hecke_rejects_bad_primes() {
        assert!(hecke_sigma(4, &Rat::zero()).is_err());
        assert!(hecke_sigma(3, &Rat::zero()).is_err());
    }

    #[test]
    fn hecke_image_shifts_by_zeta24_pow_p() {
        for p in [5u64, 7] {
            let zp = Zeta24::new(p as i64).to_cplx();
            for x in seeded_rationals(p, 10, 100) {
                let lhs = hecke_sigma(p, &(&x + Rat::from_int(1))).unwrap();
                let rhs = zp * hecke_sigma(p, &x).unwrap();
                let scale = lhs.norm().max(rhs.norm()).max(1.0);
                assert!((lhs - rhs).norm() / scale < 1e-10, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn hecke_closed_formula_matches_general_operator() {
        let op = crate::modgroup::apply_general_hecke(f_eval, 5).unwrap();
        for x in seeded_rationals(99, 10, 80) {
            let closed = hecke_sigma(5, &x).unwrap();
            let general = op(&x).unwrap();
            let scale = closed.norm().max(general.norm()).max(1.0);
            assert!((closed - general).norm() / scale < 1e-12, "x={x}");
        }
    }

    #[test]
    fn probe_flags_near_singular_base() {
        let report =
            cocycle_probe_with(None, &[rq(-4999, 10000), rq(-1, 3)], 3).unwrap();
        assert!(report.chains[0].near_singular);
        assert!(!report.chains[1].near_singular);
        assert!(report.chains[1].decreasing, "{:?}", report.chains[1].diffs);
    }

    #[test]
    fn probe_short_chains_decrease() {
        // cheap version of the acceptance probe: m <= 4
        let bases: Vec<Rat> = vec![rq(-1, 7), rq(-2, 9)];
        let report = cocycle_probe_with(None, &bases, 4).unwrap();
        assert!(report.pass, "{:?}", report.chains);
    }

    #[test]
    fn hecke_probe_clamps_to_cap() {
        let report = cocycle_probe_with(Some(13), &[rq(-1, 7)], 5).unwrap();
        let chain = &report.chains[0];
        // m = 5 would put the inner evaluations at denominator 7e5 * 13
        assert_eq!(chain.clamped_at, Some(4));
        for (_, x, _) in &chain.samples {
            let h = x.denom().to_u64().unwrap();
            assert!(h * 13 <= EVAL_DENOM_CAP);
        }
    }

    #[test]
    fn eigenform_probe_reports_finite_ratios() {
        // p = 73 is 1 mod 24; ratios are reported, nothing asserted about
        // their value
        let ratios = eigenform_ratio_probe(73, 5, 3).unwrap();
        assert!(!ratios.is_empty());
        for (x, r) in ratios {
            assert!(r.re.is_finite() && r.im.is_finite(), "x = {x}");
        }
    }
}
