//! The numen `X_H`: on `N_0`, on truncations, and at rational `p`-adic integers.
//!
//! `X_H` is the unique solution of `X_H(pn + j) = r_j X_H(n) + c_j` with
//! `X_H(0) = c_0 / (1 - r_0)`. On a truncation `[z]_{p^N}` with digits
//! `d_0 .. d_{N-1}` it equals
//!
//! ```text
//! sum_{m < N} (r_{d_0} .. r_{d_{m-1}}) c_{d_m}  +  (r_{d_0} .. r_{d_{N-1}}) X_H(0)
//! ```
//!
//! and at an eventually periodic `z` whose period string `P` contracts at some
//! place, the limit is `H_pre(X_H(P) / (1 - M_H(P)))`.

use num_bigint::{BigInt, BigUint};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::arith::{abs_at_place, reduce_mod_u64, small_prime_factors, AbsValue, Place};
use crate::map::HydraMap;
use crate::strings::{compose_string, DigitString};
use crate::{Error, PAdicTrunc, Rational, RationalDigitExpansion, Result};

/// Default cap on `p^N` enumerations.
pub const MAX_POINTS: u128 = 1 << 24;

pub fn xh_nat(h: &HydraMap, n: &BigUint) -> Result<Rational> {
    let digits = DigitString::digits_of(n, h.p())?;
    let mut x = h.base_value()?;
    for &d in digits.entries().iter().rev() {
        x = h.apply_branch(d as usize, &x);
    }
    Ok(x)
}

pub fn xh_nat_u64(h: &HydraMap, n: u64) -> Result<Rational> {
    xh_nat(h, &BigUint::from(n))
}

/// `X_H([z]_{p^N})` by the partial-product series, linear in the depth.
pub fn xh_trunc(h: &HydraMap, z: &PAdicTrunc) -> Result<Rational> {
    if z.base() != h.p() {
        return Err(Error::BaseMismatch { expected: h.p(), found: z.base() });
    }
    let x0 = h.base_value()?;
    let mut prefix = Rational::one();
    let mut sum = Rational::zero();
    for &d in z.digits() {
        let b = h.branch(d as usize);
        sum = sum + &prefix * &b.c;
        prefix = prefix * &b.r;
    }
    Ok(sum + prefix * x0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    UniformContinuous,
    AlmostEverywhere,
    NoGuarantee,
}

impl std::fmt::Display for Guarantee {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Guarantee::UniformContinuous => "uniform-continuous",
            Guarantee::AlmostEverywhere => "almost-everywhere",
            Guarantee::NoGuarantee => "no-guarantee",
        })
    }
}

/// What the extension lemma guarantees for `X_H` at one place. Only the
/// guarantee is reported: `NoGuarantee` is not a divergence claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub place: Place,
    /// Product of the branch multiplier norms.
    pub rho: AbsValue,
    pub max_branch_norm: AbsValue,
    pub guarantee: Guarantee,
    /// `max_j |c_j|_l` at finite places.
    pub ell_bound: Option<AbsValue>,
}

pub fn branch_norms(h: &HydraMap, place: Place) -> Vec<AbsValue> {
    h.branches().iter().map(|b| abs_at_place(&b.r, place)).collect()
}

pub fn convergence_report(h: &HydraMap, place: Place) -> ConvergenceReport {
    let norms = branch_norms(h, place);
    let rho = norms.iter().fold(AbsValue::one(), |acc, n| &acc * n);
    let max_branch_norm = norms.iter().max().cloned().expect("p >= 2 branches");
    let guarantee = if rho.cmp_one().is_lt() {
        if max_branch_norm.cmp_one().is_lt() {
            Guarantee::UniformContinuous
        } else {
            Guarantee::AlmostEverywhere
        }
    } else {
        Guarantee::NoGuarantee
    };
    let ell_bound = place.prime().map(|_| offset_bound(h, place));
    ConvergenceReport { place, rho, max_branch_norm, guarantee, ell_bound }
}

fn offset_bound(h: &HydraMap, place: Place) -> AbsValue {
    h.branches()
        .iter()
        .map(|b| abs_at_place(&b.c, place))
        .max()
        .expect("p >= 2 branches")
}

/// Exact digit frequencies over the period of an eventually periodic expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    pub densities: Vec<Rational>,
}

impl DensityProfile {
    pub fn of(z: &RationalDigitExpansion) -> Self {
        let p = z.base() as usize;
        let mut counts = vec![0i64; p];
        for &d in z.period() {
            counts[d as usize] += 1;
        }
        let len = z.period().len() as i64;
        DensityProfile { densities: counts.into_iter().map(|c| Rational::frac(c, len)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityVerdict {
    /// `sum_j d_j ln ||r_j||_l`.
    pub value: f64,
    pub converges: bool,
    pub profile: DensityProfile,
}

pub fn density_criterion(
    h: &HydraMap,
    place: Place,
    z: &RationalDigitExpansion,
) -> Result<DensityVerdict> {
    if z.base() != h.p() {
        return Err(Error::BaseMismatch { expected: h.p(), found: z.base() });
    }
    let profile = DensityProfile::of(z);
    let norms = branch_norms(h, place);
    let value = profile
        .densities
        .iter()
        .zip(&norms)
        .filter(|(d, n)| !d.is_zero() && !n.is_one())
        .map(|(d, n)| d.to_f64() * n.ln())
        .sum();
    // The sign is decided exactly: prod_j ||r_j||^{count_j} < 1 over one period.
    let mut product = AbsValue::one();
    for &d in z.period() {
        product = &product * &norms[d as usize];
    }
    let converges = product.cmp_one().is_lt();
    Ok(DensityVerdict { value, converges, profile })
}

/// `X_H(z)` as an exact rational, for `z` whose period contracts at `place`.
///
/// The result is checked against the series at depth at least 64 before it
/// is returned.
pub fn xh_rational_exact(h: &HydraMap, z: &RationalDigitExpansion, place: Place) -> Result<Rational> {
    if z.base() != h.p() {
        return Err(Error::BaseMismatch { expected: h.p(), found: z.base() });
    }
    let period = DigitString::new(h.p(), z.period().to_vec())?;
    let pre = DigitString::new(h.p(), z.preperiod().to_vec())?;
    let per_map = compose_string(h, &period)?;
    let norm = abs_at_place(&per_map.m, place);
    if !norm.cmp_one().is_lt() {
        return Err(Error::Precondition(format!(
            "|M_H(period)|_{place} = {norm} is not < 1, so the series does not contract there"
        )));
    }
    let x_cycle = per_map.fixed_point().ok_or(Error::DegenerateCycle)?;
    let pre_map = compose_string(h, &pre)?;
    let value = pre_map.apply(&x_cycle);

    let x0 = h.base_value()?;
    let reps = 64usize.saturating_sub(pre.len()).div_ceil(period.len()).max(1);
    let depth = pre.len() + reps * period.len();
    let trunc = xh_trunc(h, &z.truncate(depth))?;
    let m_depth = &pre_map.m * &per_map.m.pow(reps as i32);
    if &trunc - &value != m_depth * (x0 - &x_cycle) {
        return Err(Error::SelfCheck(format!("truncation at depth {depth} disagrees with {value}")));
    }
    Ok(value)
}

/// First place among the primes dividing `m`'s numerator or denominator, then
/// the archimedean place, at which `|m| < 1`. A preferred place is tried first.
pub fn find_contracting_place(m: &Rational, preferred: Option<Place>) -> Option<Place> {
    let mut candidates: Vec<Place> = preferred.into_iter().collect();
    if !m.is_zero() {
        let mut primes = small_prime_factors(m.numer(), 1 << 20);
        primes.extend(small_prime_factors(m.denom(), 1 << 20));
        primes.sort_unstable();
        primes.dedup();
        candidates.extend(primes.into_iter().map(Place::Finite));
    }
    candidates.push(Place::Archimedean);
    candidates.into_iter().find(|&pl| abs_at_place(m, pl).cmp_one().is_lt())
}

/// `B_p(n) = n / (1 - p^λ)` with `λ` the number of base-`p` digits of `n`.
pub fn b_p(n: &BigUint, p: u64) -> Result<(Rational, u32)> {
    if n == &BigUint::from(0u32) {
        return Err(Error::ZeroInput);
    }
    let lambda = DigitString::digits_of(n, p)?.len() as u32;
    let z = Rational::from_integer(BigInt::from(n.clone()))
        / (Rational::one() - Rational::from_integer(BigInt::from(p).pow(lambda)));
    Ok((z, lambda))
}

fn check_norms_at_most_one(h: &HydraMap, place: Place) -> Result<()> {
    if branch_norms(h, place).iter().any(|n| n.cmp_one().is_gt()) {
        return Err(Error::Precondition(format!("max_j |r_j|_{place} exceeds 1")));
    }
    Ok(())
}

/// Counts sampled truncations with `|X_H(z)|_l` above `max_j |c_j|_l`
/// (or `|X_H(0)|_l` when that is larger, for non-centered maps).
pub fn ell_bound_violations(
    h: &HydraMap,
    place: Place,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<usize> {
    if place.prime().is_none() {
        return Err(Error::Precondition("the ultrametric bound needs a finite place".into()));
    }
    check_norms_at_most_one(h, place)?;
    let bound = offset_bound(h, place).max(abs_at_place(&h.base_value()?, place));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let digits = (0..depth).map(|_| rng.random_range(0..h.p() as u32)).collect();
        let z = PAdicTrunc::from_digits(h.p(), digits)?;
        if abs_at_place(&xh_trunc(h, &z)?, place) > bound {
            violations += 1;
        }
    }
    Ok(violations)
}

pub fn ell_bound_check(h: &HydraMap, place: Place, samples: usize, depth: usize) -> Result<bool> {
    ell_bound_violations(h, place, samples, depth, 0x5eed).map(|v| v == 0)
}

pub(crate) fn guard_points(p: u64, depth: u32, allow_large: bool) -> Result<u128> {
    let points = (p as u128).checked_pow(depth).unwrap_or(u128::MAX);
    if points > MAX_POINTS && !allow_large {
        return Err(Error::ResourceGuard { points, limit: MAX_POINTS });
    }
    Ok(points)
}

/// Histogram of `X_H([z]_{p^N}) mod modulus` over all `p^N` truncations.
///
/// Every `r_j`, `c_j` and `X_H(0)` must be invertible-denominator rationals
/// mod `modulus`; the walk then runs in machine integers.
pub(crate) fn leaf_residue_histogram(
    h: &HydraMap,
    modulus: u64,
    depth: u32,
    allow_large: bool,
) -> Result<Vec<u64>> {
    guard_points(h.p(), depth, allow_large)?;
    let reduce = |r: &Rational| {
        reduce_mod_u64(r, modulus).ok_or_else(|| Error::NotIntegral {
            value: r.to_string(),
            base: modulus,
        })
    };
    let coeffs = h
        .branches()
        .iter()
        .map(|b| Ok((reduce(&b.r)? as u128, reduce(&b.c)? as u128)))
        .collect::<Result<Vec<_>>>()?;
    let x0 = reduce(&h.base_value()?)?;
    let mut hist = vec![0u64; modulus as usize];
    let m = modulus as u128;
    // Applying branches root-to-leaf enumerates every string once, so the
    // multiset of leaf values is that of the truncations.
    fn walk(x: u64, left: u32, coeffs: &[(u128, u128)], m: u128, hist: &mut [u64]) {
        if left == 0 {
            hist[x as usize] += 1;
            return;
        }
        for &(r, c) in coeffs {
            walk(((r * x as u128 + c) % m) as u64, left - 1, coeffs, m, hist);
        }
    }
    walk(x0, depth, &coeffs, m, &mut hist);
    Ok(hist)
}

/// Calls `f` with the real value of `X_H` on every truncation of depth `depth`.
pub(crate) fn for_each_leaf_f64(
    h: &HydraMap,
    depth: u32,
    allow_large: bool,
    mut f: impl FnMut(f64),
) -> Result<()> {
    guard_points(h.p(), depth, allow_large)?;
    let coeffs: Vec<(f64, f64)> =
        h.branches().iter().map(|b| (b.r.to_f64(), b.c.to_f64())).collect();
    fn walk(x: f64, left: u32, coeffs: &[(f64, f64)], f: &mut dyn FnMut(f64)) {
        if left == 0 {
            f(x);
            return;
        }
        for &(r, c) in coeffs {
            walk(r * x + c, left - 1, coeffs, f);
        }
    }
    walk(h.base_value()?.to_f64(), depth, &coeffs, &mut f);
    Ok(())
}

/// Calls `f` with the exact value of `X_H` on every truncation of depth `depth`.
pub(crate) fn for_each_leaf_exact(
    h: &HydraMap,
    depth: u32,
    allow_large: bool,
    mut f: impl FnMut(&Rational),
) -> Result<()> {
    guard_points(h.p(), depth, allow_large)?;
    fn walk(x: &Rational, left: u32, h: &HydraMap, f: &mut dyn FnMut(&Rational)) {
        if left == 0 {
            f(x);
            return;
        }
        for b in h.branches() {
            walk(&b.apply(x), left - 1, h, f);
        }
    }
    walk(&h.base_value()?, depth, h, &mut f);
    Ok(())
}
