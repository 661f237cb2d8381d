//! The characteristic function `mu^(t) = int e_l(-t X_H(z)) dz`: a Riemann-sum
//! estimator at any place and an exact level-by-level solver at finite places.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::arith::{checked_pow, reduce_mod_u64, unit};
use crate::map::HydraMap;
use crate::numen::{convergence_report, for_each_leaf_exact, for_each_leaf_f64, leaf_residue_histogram, Guarantee};
use crate::{frac_part, Error, Frequency, Place, Rational, Result, RootOfUnity};

/// Where to evaluate `mu^`: a frequency at a finite place, or a real `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharArg {
    Finite(Frequency),
    Real(f64),
}

/// Tabulated `mu^`. Finite places key values by frequency; the archimedean
/// place keeps `(t, value)` samples on a caller-chosen grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFnTable {
    pub place: Place,
    /// Largest frequency level (finite places).
    pub level: Option<u32>,
    /// Truncation depth for estimated tables; `None` when solved.
    pub depth: Option<u32>,
    pub values: BTreeMap<Frequency, Complex64>,
    pub samples: Vec<(f64, Complex64)>,
}

impl CharFnTable {
    pub fn get(&self, t: &Frequency) -> Option<Complex64> {
        self.values.get(t).copied()
    }
}

/// `e_q(x) = e^{2 pi i {x}_q}`.
pub fn e_q(x: &Rational, q: u64) -> Result<RootOfUnity> {
    Ok(RootOfUnity::from_turns(&frac_part(x, q)?))
}

fn require_guarantee(h: &HydraMap, place: Place, force: bool) -> Result<()> {
    let report = convergence_report(h, place);
    if report.guarantee == Guarantee::NoGuarantee && !force {
        return Err(Error::Precondition(format!(
            "rho at {place} is {} >= 1: the extension lemma gives no guarantee (use force)",
            report.rho
        )));
    }
    Ok(())
}

/// Modulus `q^level` when every coefficient and `X_H(0)` is `q`-integral.
fn integral_modulus(h: &HydraMap, q: u64, level: u32) -> Result<Option<u64>> {
    let m = checked_pow(q, level)?;
    let x0 = h.base_value()?;
    let ok = h
        .branches()
        .iter()
        .flat_map(|b| [&b.r, &b.c])
        .chain(std::iter::once(&x0))
        .all(|r| reduce_mod_u64(r, m).is_some());
    Ok(ok.then_some(m))
}

/// Estimates at several frequencies from one pass over the `p^N` truncations.
fn estimate_finite(
    h: &HydraMap,
    q: u64,
    ts: &[Frequency],
    depth: u32,
    allow_large: bool,
) -> Result<Vec<Complex64>> {
    let level = ts.iter().map(Frequency::level).max().unwrap_or(0);
    if let Some(t) = ts.iter().find(|t| t.prime() != q) {
        return Err(Error::BaseMismatch { expected: q, found: t.prime() });
    }
    let leaves = (h.p() as f64).powi(depth as i32);
    if let Some(m) = integral_modulus(h, q, level)? {
        let hist = leaf_residue_histogram(h, m, depth, allow_large)?;
        return Ok(ts
            .iter()
            .map(|t| {
                let a = t.numer() * (m / t.modulus());
                let total: Complex64 = hist
                    .iter()
                    .enumerate()
                    .filter(|(_, &n)| n > 0)
                    .map(|(w, &n)| n as f64 * unit(m - ((a as u128 * w as u128) % m as u128) as u64, m))
                    .sum();
                total / leaves
            })
            .collect());
    }
    let mut totals = vec![Complex64::new(0.0, 0.0); ts.len()];
    let mut failure = None;
    for_each_leaf_exact(h, depth, allow_large, |x| {
        for (t, acc) in ts.iter().zip(totals.iter_mut()) {
            match e_q(&-(&t.to_rational() * x), q) {
                Ok(e) => *acc += e.to_complex(),
                Err(e) => failure = Some(e),
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(totals.into_iter().map(|v| v / leaves).collect())
}

fn estimate_real(h: &HydraMap, ts: &[f64], depth: u32, allow_large: bool) -> Result<Vec<Complex64>> {
    let mut totals = vec![Complex64::new(0.0, 0.0); ts.len()];
    for_each_leaf_f64(h, depth, allow_large, |x| {
        for (t, acc) in ts.iter().zip(totals.iter_mut()) {
            *acc += Complex64::from_polar(1.0, -std::f64::consts::TAU * t * x);
        }
    })?;
    let leaves = (h.p() as f64).powi(depth as i32);
    Ok(totals.into_iter().map(|v| v / leaves).collect())
}

/// `p^-N sum_{n < p^N} e_l(-t X_H([n]))`.
pub fn charfn_estimate(
    h: &HydraMap,
    place: Place,
    t: CharArg,
    depth: u32,
    force: bool,
    allow_large: bool,
) -> Result<Complex64> {
    require_guarantee(h, place, force)?;
    match (place, t) {
        (Place::Finite(q), CharArg::Finite(t)) => {
            Ok(estimate_finite(h, q, &[t], depth, allow_large)?[0])
        }
        (Place::Archimedean, CharArg::Real(t)) => Ok(estimate_real(h, &[t], depth, allow_large)?[0]),
        _ => Err(Error::InvalidArgument(format!("argument {t:?} does not match place {place}"))),
    }
}

/// Estimated table over every `|t|_q <= q^level`.
pub fn charfn_estimate_table(
    h: &HydraMap,
    q: u64,
    level: u32,
    depth: u32,
    force: bool,
    allow_large: bool,
) -> Result<CharFnTable> {
    let place = Place::finite(q)?;
    require_guarantee(h, place, force)?;
    let ts = Frequency::enumerate(q, level)?;
    let est = estimate_finite(h, q, &ts, depth, allow_large)?;
    Ok(CharFnTable {
        place,
        level: Some(level),
        depth: Some(depth),
        values: ts.into_iter().zip(est).collect(),
        samples: Vec::new(),
    })
}

/// Archimedean samples of `mu^` on `grid`.
pub fn charfn_estimate_grid(
    h: &HydraMap,
    grid: &[f64],
    depth: u32,
    force: bool,
    allow_large: bool,
) -> Result<CharFnTable> {
    require_guarantee(h, Place::Archimedean, force)?;
    let est = estimate_real(h, grid, depth, allow_large)?;
    Ok(CharFnTable {
        place: Place::Archimedean,
        level: None,
        depth: Some(depth),
        values: BTreeMap::new(),
        samples: grid.iter().copied().zip(est).collect(),
    })
}

/// Per branch: `(e_q(-c_j t), {r_j t}_q)`.
fn equation_terms(h: &HydraMap, t: &Frequency) -> Result<Vec<(Complex64, Frequency)>> {
    let q = t.prime();
    let tr = t.to_rational();
    h.branches()
        .iter()
        .map(|b| Ok((e_q(&-(&b.c * &tr), q)?.to_complex(), t.scale(&b.r)?)))
        .collect()
}

/// Solves `mu^(t) = (1/p) sum_j e_q(-c_j t) mu^({r_j t}_q)` for every
/// `|t|_q <= q^level`, with `mu^(0) = 1`.
///
/// Multipliers of norm one keep `t` on its level and couple the unknowns of
/// that level; the rest drop to lower levels, which are already solved.
pub fn charfn_solve(h: &HydraMap, q: u64, level: u32) -> Result<CharFnTable> {
    let place = Place::finite(q)?;
    let report = convergence_report(h, place);
    if !report.rho.cmp_one().is_lt() {
        return Err(Error::Precondition(format!(
            "the solver needs rho < 1 at {place}, got {}",
            report.rho
        )));
    }
    if report.max_branch_norm.cmp_one().is_gt() {
        return Err(Error::Precondition(format!(
            "the solver needs every |r_j|_{q} <= 1, got max {}",
            report.max_branch_norm
        )));
    }
    if !h.is_proper() {
        return Err(Error::NotProper);
    }
    let inv_p = 1.0 / h.p() as f64;
    let mut values = BTreeMap::from([(Frequency::zero(q)?, Complex64::new(1.0, 0.0))]);
    for m in 1..=level {
        let ts = Frequency::at_level(q, m)?;
        let index: BTreeMap<Frequency, usize> = ts.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let n = ts.len();
        let mut a = DMatrix::<Complex64>::identity(n, n);
        let mut rhs = DVector::<Complex64>::zeros(n);
        for (i, t) in ts.iter().enumerate() {
            for (e, s) in equation_terms(h, t)? {
                match index.get(&s) {
                    Some(&k) => a[(i, k)] -= e * inv_p,
                    None => {
                        let known = values.get(&s).copied().ok_or(Error::SingularSystem { level: m })?;
                        rhs[i] += e * known * inv_p;
                    }
                }
            }
        }
        let x = a.lu().solve(&rhs).ok_or(Error::SingularSystem { level: m })?;
        values.extend(ts.into_iter().zip(x.iter().copied()));
    }
    let table = CharFnTable { place, level: Some(level), depth: None, values, samples: Vec::new() };
    let residual = selfsim_residual(h, &table)?;
    if residual >= 1e-12 {
        return Err(Error::SelfCheck(format!("functional-equation residual {residual:e}")));
    }
    Ok(table)
}

/// `max_t |mu^(t) - (1/p) sum_j e_l(-c_j t) mu^(r_j t)|` over tabulated `t`
/// whose images are tabulated too.
pub fn selfsim_residual(h: &HydraMap, table: &CharFnTable) -> Result<f64> {
    let inv_p = 1.0 / h.p() as f64;
    let mut worst = 0.0f64;
    match table.place {
        Place::Finite(_) => {
            for (t, &v) in &table.values {
                let terms = equation_terms(h, t)?;
                let rhs: Option<Complex64> = terms
                    .iter()
                    .map(|(e, s)| table.values.get(s).map(|mu| e * mu * inv_p))
                    .sum();
                if let Some(rhs) = rhs {
                    worst = worst.max((v - rhs).norm());
                }
            }
        }
        Place::Archimedean => {
            let lookup = |x: f64| table.samples.iter().find(|(s, _)| (s - x).abs() < 1e-12).map(|p| p.1);
            for &(t, v) in &table.samples {
                let rhs: Option<Complex64> = h
                    .branches()
                    .iter()
                    .map(|b| {
                        lookup(b.r.to_f64() * t).map(|mu| {
                            Complex64::from_polar(inv_p, -std::f64::consts::TAU * b.c.to_f64() * t) * mu
                        })
                    })
                    .sum();
                if let Some(rhs) = rhs {
                    worst = worst.max((v - rhs).norm());
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::tests::{t3, t5};

    fn f(k: u64, q: u64, n: u32) -> Frequency {
        Frequency::new(k, q, n).unwrap()
    }

    #[test]
    fn solver_hand_values() {
        let table = charfn_solve(&t3(), 3, 1).unwrap();
        let s = 3f64.sqrt();
        assert!((table.get(&f(1, 3, 1)).unwrap() - Complex64::new(-0.5, s / 6.0)).norm() < 1e-12);
        assert!((table.get(&f(2, 3, 1)).unwrap() - Complex64::new(-0.5, -s / 6.0)).norm() < 1e-12);
        let zero = charfn_solve(&t3(), 3, 0).unwrap();
        assert_eq!(zero.values.len(), 1);
        assert_eq!(zero.get(&Frequency::zero(3).unwrap()), Some(Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn solver_preconditions() {
        assert!(matches!(charfn_solve(&t3(), 2, 1), Err(Error::Precondition(_))));
        assert!(matches!(charfn_solve(&t3(), 4, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn estimator_matches_solver() {
        let est = charfn_estimate(&t3(), Place::Finite(3), CharArg::Finite(f(1, 3, 1)), 18, false, false)
            .unwrap();
        assert!((est - Complex64::new(-0.5, 3f64.sqrt() / 6.0)).norm() < 1e-2);
        let zero = charfn_estimate(&t3(), Place::Finite(3), CharArg::Finite(Frequency::zero(3).unwrap()), 6, false, false)
            .unwrap();
        assert!((zero - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let solved = charfn_solve(&t5(), 5, 1).unwrap();
        let est = charfn_estimate_table(&t5(), 5, 1, 18, false, false).unwrap();
        for (t, v) in &solved.values {
            assert!((v - est.values[t]).norm() < 1e-2, "t = {t}");
        }
    }

    #[test]
    fn archimedean_hermitian() {
        let h = t3();
        let a = charfn_estimate(&h, Place::Archimedean, CharArg::Real(0.3), 14, false, false).unwrap();
        let b = charfn_estimate(&h, Place::Archimedean, CharArg::Real(-0.3), 14, false, false).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn refuses_no_guarantee_places() {
        let r = charfn_estimate(&t3(), Place::Finite(2), CharArg::Finite(f(1, 2, 1)), 4, false, false);
        assert!(matches!(r, Err(Error::Precondition(_))));
        assert!(charfn_estimate(&t3(), Place::Finite(2), CharArg::Finite(f(1, 2, 1)), 4, true, false).is_ok());
    }

    #[test]
    fn residuals() {
        let h = t3();
        assert!(selfsim_residual(&h, &charfn_solve(&h, 3, 2).unwrap()).unwrap() < 1e-12);
        let est = charfn_estimate_table(&h, 3, 2, 18, false, false).unwrap();
        assert!(selfsim_residual(&h, &est).unwrap() < 2e-2);
        let trivial = CharFnTable {
            place: Place::Finite(3),
            level: Some(0),
            depth: None,
            values: BTreeMap::from([(Frequency::zero(3).unwrap(), Complex64::new(1.0, 0.0))]),
            samples: Vec::new(),
        };
        assert_eq!(selfsim_residual(&h, &trivial).unwrap(), 0.0);
    }
}
