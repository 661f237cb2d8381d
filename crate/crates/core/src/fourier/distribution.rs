//! `P(X_H = w mod q^n)` by Fourier inversion of `mu^`, and its exhaustive
//! empirical counterpart.

use std::collections::BTreeMap;


use crate::arith::checked_pow;
use crate::map::HydraMap;
use crate::numen::{guard_points, leaf_residue_histogram};
use crate::{character_eval, vp_val, Error, Frequency, Rational, Result, Valuation};

use super::charfn::charfn_solve;

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub q: u64,
    pub n: u32,
    pub b: i64,
    /// `(w, P(X_H = w mod q^n))`, ordered by `w`.
    pub probabilities: Vec<(Rational, f64)>,
    /// Largest imaginary part discarded by the inversion sum.
    pub max_imag: f64,
}

impl Distribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().map(|(_, p)| p).sum()
    }

    pub fn get(&self, w: &Rational) -> Option<f64> {
        self.probabilities.iter().find(|(v, _)| v == w).map(|(_, p)| *p)
    }
}

/// `max log_q |c|_q` over the nonzero offsets; zero when all vanish.
pub fn b_constant_of(offsets: &[Rational], q: u64) -> Result<i64> {
    let mut best: Option<i64> = None;
    for c in offsets {
        if let Valuation::Finite(v) = vp_val(c, q)? {
            best = Some(best.map_or(-v, |b| b.max(-v)));
        }
    }
    Ok(best.unwrap_or(0))
}

pub fn b_constant(h: &HydraMap, q: u64) -> Result<i64> {
    let offsets: Vec<Rational> = h.branches().iter().map(|b| b.c.clone()).collect();
    b_constant_of(&offsets, q)
}

/// Residues `w` of the lattice `q^{-B} Z_q` modulo `q^n`. With `B <= 0` these
/// are the multiples of `q^{-B}` below `q^n` (only `0` once `-B >= n`).
fn lattice(q: u64, n: u32, b: i64) -> Result<Vec<u64>> {
    let modulus = checked_pow(q, n)?;
    let shift = (-b).clamp(0, n as i64) as u32;
    let step = checked_pow(q, shift)?;
    Ok((0..modulus).step_by(step as usize).collect())
}

/// `P(X_H = w mod q^n) = q^-n sum_{|t|_q <= q^n} mu^(t) e_q(t w)`.
///
/// Needs `rho < 1` at `q` and every `|r_j|_q <= 1`. Integrality then forces
/// each `c_j` to be `q`-integral, so `B <= 0`.
pub fn prob_inversion(h: &HydraMap, q: u64, n: u32) -> Result<Distribution> {
    let table = charfn_solve(h, q, n)?;
    let b = b_constant(h, q)?;
    if b > 0 {
        return Err(Error::Precondition(format!(
            "offsets with negative {q}-adic valuation (B = {b}) cannot occur with |r_j|_{q} <= 1"
        )));
    }
    let ts = Frequency::enumerate(q, n)?;
    let scale = 1.0 / checked_pow(q, n)? as f64;
    let mut max_imag = 0.0f64;
    let mut probabilities = Vec::new();
    for w in lattice(q, n, b)? {
        let wr = Rational::from(w as i64);
        let mut total = num_complex::Complex64::new(0.0, 0.0);
        for t in &ts {
            total += table.values[t] * character_eval(t, &wr)?.to_complex();
        }
        let p = total * scale;
        max_imag = max_imag.max(p.im.abs());
        probabilities.push((wr, p.re));
    }
    Ok(Distribution { q, n, b, probabilities, max_imag })
}

/// Exhaustive histogram of `X_H([z]_{p^N}) mod q^n` over all `p^N` truncations.
pub fn prob_empirical(
    h: &HydraMap,
    q: u64,
    n: u32,
    depth: u32,
    allow_large: bool,
) -> Result<Distribution> {
    let b = b_constant(h, q)?;
    if n == 0 {
        guard_points(h.p(), depth, allow_large)?;
        return Ok(Distribution { q, n, b, probabilities: vec![(Rational::zero(), 1.0)], max_imag: 0.0 });
    }
    let modulus = checked_pow(q, n)?;
    let hist = leaf_residue_histogram(h, modulus, depth, allow_large)?;
    let leaves: u64 = hist.iter().sum();
    let mut bins: BTreeMap<u64, f64> = lattice(q, n, b)?.into_iter().map(|w| (w, 0.0)).collect();
    for (w, &count) in hist.iter().enumerate() {
        if count > 0 {
            *bins.entry(w as u64).or_default() += count as f64 / leaves as f64;
        }
    }
    let probabilities = bins.into_iter().map(|(w, p)| (Rational::from(w as i64), p)).collect();
    Ok(Distribution { q, n, b, probabilities, max_imag: 0.0 })
}

/// `(1/2) sum_w |P(w) - Q(w)|` over the union of supports.
pub fn total_variation(a: &Distribution, b: &Distribution) -> f64 {
    let mut diff: BTreeMap<&Rational, f64> = BTreeMap::new();
    for (w, p) in &a.probabilities {
        *diff.entry(w).or_default() += p;
    }
    for (w, p) in &b.probabilities {
        *diff.entry(w).or_default() -= p;
    }
    diff.values().map(|d| d.abs()).sum::<f64>() / 2.0
}
