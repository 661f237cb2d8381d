//! Schwartz–Bruhat functions on `Z_p`, Haar integrals, and their Fourier
//! transforms.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::arith::{checked_pow, unit};
use crate::{is_prime, Error, Frequency, PAdicTrunc, Rational, Result};

/// A finite combination of ball indicators, stored densely at one level:
/// `values[k]` is the value on `k + p^level Z_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SBFunction {
    base: u64,
    level: u32,
    values: Vec<Complex64>,
}

impl SBFunction {
    /// `sum coeff * [z = k mod p^n]` over `(k, n, coeff)` terms, refined to the
    /// largest level present.
    pub fn from_terms(base: u64, terms: &[(u64, u32, Complex64)]) -> Result<Self> {
        let level = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut f = SBFunction::zero(base, level)?;
        for &(k, n, coeff) in terms {
            let step = checked_pow(base, n)?;
            let mut r = k % step;
            while (r as usize) < f.values.len() {
                f.values[r as usize] += coeff;
                r += step;
            }
        }
        Ok(f)
    }

    pub fn zero(base: u64, level: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base must be at least 2, got {base}")));
        }
        let size = checked_pow(base, level)?;
        Ok(SBFunction { base, level, values: vec![Complex64::new(0.0, 0.0); size as usize] })
    }

    pub fn constant(base: u64, c: Complex64) -> Result<Self> {
        SBFunction::from_terms(base, &[(0, 0, c)])
    }

    /// `[z = k mod p^n]`.
    pub fn indicator(base: u64, k: u64, n: u32) -> Result<Self> {
        SBFunction::from_terms(base, &[(k, n, Complex64::new(1.0, 0.0))])
    }

    /// Dense values at `level`, one per residue class.
    pub fn from_values(base: u64, level: u32, values: Vec<Complex64>) -> Result<Self> {
        let size = checked_pow(base, level)?;
        if values.len() as u64 != size {
            return Err(Error::InvalidArgument(format!(
                "expected {size} values at level {level}, got {}",
                values.len()
            )));
        }
        Ok(SBFunction { base, level, values })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Canonical terms `(k, level, coeff)`, zero coefficients omitted.
    pub fn terms(&self) -> Vec<(u64, u32, Complex64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(k, &v)| (k as u64, self.level, v))
            .collect()
    }

    /// The same function at a finer level.
    pub fn refine(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::InvalidArgument(format!(
                "cannot refine level {} down to {level}",
                self.level
            )));
        }
        let size = checked_pow(self.base, level)? as usize;
        let m = self.values.len();
        Ok(SBFunction {
            base: self.base,
            level,
            values: (0..size).map(|k| self.values[k % m]).collect(),
        })
    }

    /// Value at a residue (any integer congruent to the point mod `p^level`).
    pub fn at_residue(&self, k: u64) -> Complex64 {
        self.values[(k % self.values.len() as u64) as usize]
    }

    pub fn evaluate(&self, z: &Rational) -> Result<Complex64> {
        let r = crate::residue_mod(z, self.base, self.level)?;
        Ok(self.at_residue(u64::try_from(r).expect("residue below modulus")))
    }

    pub fn evaluate_trunc(&self, z: &PAdicTrunc) -> Result<Complex64> {
        if z.base() != self.base {
            return Err(Error::BaseMismatch { expected: self.base, found: z.base() });
        }
        if z.depth() < self.level as usize {
            return Err(Error::TooShallow { depth: z.depth(), level: self.level });
        }
        let m = num_bigint::BigInt::from(self.values.len());
        let r = num_integer::Integer::mod_floor(&z.value(), &m);
        Ok(self.at_residue(u64::try_from(r).expect("residue below modulus")))
    }

    fn common(&self, other: &SBFunction) -> Result<(SBFunction, SBFunction)> {
        if self.base != other.base {
            return Err(Error::BaseMismatch { expected: self.base, found: other.base });
        }
        let level = self.level.max(other.level);
        Ok((self.refine(level)?, other.refine(level)?))
    }

    pub fn product(&self, other: &SBFunction) -> Result<SBFunction> {
        let (mut a, b) = self.common(other)?;
        a.values.iter_mut().zip(&b.values).for_each(|(x, y)| *x *= y);
        Ok(a)
    }

    pub fn sum(&self, other: &SBFunction) -> Result<SBFunction> {
        let (mut a, b) = self.common(other)?;
        a.values.iter_mut().zip(&b.values).for_each(|(x, y)| *x += y);
        Ok(a)
    }

    pub fn scale(&self, c: Complex64) -> SBFunction {
        SBFunction { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    /// `z -> f(a z + b)` for integers `a >= 1`, `b >= 0`; the level grows by
    /// `v_p(a)`.
    pub fn pullback_affine(&self, a: u64, b: u64) -> Result<SBFunction> {
        let mut extra = 0;
        let mut rest = a;
        while rest % self.base == 0 {
            rest /= self.base;
            extra += 1;
        }
        let level = self.level + extra;
        let size = checked_pow(self.base, level)?;
        let m = self.values.len() as u128;
        let values = (0..size)
            .map(|k| self.values[((a as u128 * k as u128 + b as u128) % m) as usize])
            .collect();
        SBFunction::from_values(self.base, level, values)
    }

    /// Agreement value by value at a common level.
    pub fn approx_eq(&self, other: &SBFunction, tol: f64) -> bool {
        match self.common(other) {
            Ok((a, b)) => a.values.iter().zip(&b.values).all(|(x, y)| (x - y).norm() <= tol),
            Err(_) => false,
        }
    }
}

/// `sum coeff / p^level`.
pub fn haar_integral_sb(f: &SBFunction) -> Complex64 {
    let total: Complex64 = f.values.iter().sum();
    total / f.values.len() as f64
}

/// `p^-N sum_{n < p^N} g(n)`, summed in residue order.
pub fn haar_integral_riemann(
    p: u64,
    depth: u32,
    mut g: impl FnMut(u64) -> Complex64,
) -> Result<Complex64> {
    let size = checked_pow(p, depth)?;
    let total: Complex64 = (0..size).map(&mut g).sum();
    Ok(total / size as f64)
}

/// `f^(t)` for every `|t|_p <= p^level`, keyed by frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    pub base: u64,
    pub level: u32,
    pub values: BTreeMap<Frequency, Complex64>,
}

impl FourierTable {
    pub fn get(&self, t: &Frequency) -> Complex64 {
        self.values.get(t).copied().unwrap_or_default()
    }
}

/// `f^(t) = int f(z) e^{-2 pi i {t z}_p} dz`. Supported on `|t|_p <= p^level`.
pub fn fourier_sb(f: &SBFunction) -> Result<FourierTable> {
    if !is_prime(f.base) {
        return Err(Error::NotPrime(f.base));
    }
    let size = f.values.len() as u64;
    let values = Frequency::enumerate(f.base, f.level)?
        .into_iter()
        .map(|t| {
            // e^{-2 pi i t k} with t = a / p^m refined to a p^{level-m} / p^level
            let a = t.numer() * (size / t.modulus());
            let total: Complex64 = f
                .values
                .iter()
                .enumerate()
                .map(|(k, v)| v * unit(size - ((a as u128 * k as u128) % size as u128) as u64, size))
                .sum();
            (t, total / size as f64)
        })
        .collect();
    Ok(FourierTable { base: f.base, level: f.level, values })
}

/// `f(z) = sum_t f^(t) e^{2 pi i {t z}_p}` as a level-`level` function.
pub fn inverse_fourier_sb(table: &FourierTable, level: u32) -> Result<SBFunction> {
    if let Some(t) = table.values.keys().find(|t| t.level() > level) {
        return Err(Error::InvalidArgument(format!(
            "frequency {t} is finer than level {level}"
        )));
    }
    let size = checked_pow(table.base, level)?;
    let values = (0..size)
        .map(|k| {
            table
                .values
                .iter()
                .map(|(t, v)| {
                    let a = t.numer() * (size / t.modulus());
                    v * unit(((a as u128 * k as u128) % size as u128) as u64, size)
                })
                .sum()
        })
        .collect();
    SBFunction::from_values(table.base, level, values)
}

/// `sum_{|t|_q <= q^n} e^{2 pi i {t (y - x)}_q}`.
pub fn orthogonality_sum(q: u64, n: u32, x: &Rational, y: &Rational) -> Result<Complex64> {
    let d = y - x;
    Frequency::enumerate(q, n)?
        .iter()
        .map(|t| crate::character_eval(t, &d).map(|e| e.to_complex()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn integrals() {
        let ind = SBFunction::indicator(3, 3, 2).unwrap();
        assert!(close(haar_integral_sb(&ind), c(1.0 / 9.0)));
        assert!(close(haar_integral_sb(&SBFunction::constant(5, c(1.0)).unwrap()), c(1.0)));
        let f = SBFunction::from_terms(2, &[(0, 1, c(2.0)), (1, 1, c(-1.0))]).unwrap();
        assert!(close(haar_integral_sb(&f), c(0.5)));

        let riemann = haar_integral_riemann(3, 2, |n| ind.at_residue(n)).unwrap();
        assert_eq!(riemann, c(1.0 / 9.0));
        assert_eq!(haar_integral_riemann(2, 5, |_| c(1.0)).unwrap(), c(1.0));
        let t = Frequency::new(4, 3, 2).unwrap();
        let chi = haar_integral_riemann(3, 3, |n| {
            crate::character_eval(&t, &Rational::from(n as i64)).unwrap().to_complex()
        })
        .unwrap();
        assert!(chi.norm() < 1e-12);
    }

    #[test]
    fn transforms() {
        let one = fourier_sb(&SBFunction::constant(2, c(1.0)).unwrap()).unwrap();
        assert_eq!(one.values.len(), 1);
        assert!(close(one.get(&Frequency::zero(2).unwrap()), c(1.0)));

        let odd = fourier_sb(&SBFunction::indicator(2, 1, 1).unwrap()).unwrap();
        assert!(close(odd.get(&Frequency::zero(2).unwrap()), c(0.5)));
        assert!(close(odd.get(&Frequency::new(1, 2, 1).unwrap()), c(-0.5)));

        let ind = SBFunction::indicator(3, 3, 2).unwrap();
        let back = inverse_fourier_sb(&fourier_sb(&ind).unwrap(), 2).unwrap();
        assert!(back.approx_eq(&ind, 1e-12));

        assert!(matches!(fourier_sb(&SBFunction::constant(6, c(1.0)).unwrap()), Err(Error::NotPrime(6))));
    }

    #[test]
    fn orthogonality() {
        let o = |x: i64, y: i64| orthogonality_sum(3, 2, &Rational::from(x), &Rational::from(y)).unwrap();
        assert!(close(o(5, 5), c(9.0)));
        assert!(close(o(5, 14), c(9.0)));
        assert!(close(o(5, 6), c(0.0)));
    }
}
