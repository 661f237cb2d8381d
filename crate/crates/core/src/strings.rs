//! Digit strings, their digit sums, and the affine maps they compose to.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::map::HydraMap;
use crate::{Error, PAdicTrunc, Rational, Result};

/// A finite string over `{0, .., p - 1}`. Index 0 is the first (least
/// significant) entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitString {
    base: u64,
    entries: Vec<u32>,
}

impl DigitString {
    pub fn new(base: u64, entries: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base must be at least 2, got {base}")));
        }
        if let Some(d) = entries.iter().find(|&&d| u64::from(d) >= base) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for base {base}")));
        }
        Ok(DigitString { base, entries })
    }

    pub fn empty(base: u64) -> Self {
        DigitString { base, entries: Vec::new() }
    }

    /// Shortest string with digit sum `n`; zero gives the empty string.
    pub fn digits_of(n: &BigUint, base: u64) -> Result<Self> {
        let mut s = DigitString::empty(base);
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base must be at least 2, got {base}")));
        }
        let b = BigUint::from(base);
        let mut n = n.clone();
        while !n.is_zero() {
            let (q, r) = n.div_rem(&b);
            s.entries.push(r.to_u32().expect("digit below base"));
            n = q;
        }
        Ok(s)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum_n j_n p^(n-1)`.
    pub fn digsum(&self) -> BigUint {
        let b = BigUint::from(self.base);
        self.entries
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &b + BigUint::from(d))
    }

    pub fn concat(&self, other: &DigitString) -> Result<DigitString> {
        if self.base != other.base {
            return Err(Error::BaseMismatch { expected: self.base, found: other.base });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(DigitString { base: self.base, entries })
    }

    /// `self` repeated `times` times.
    pub fn repeat(&self, times: usize) -> DigitString {
        DigitString { base: self.base, entries: self.entries.repeat(times) }
    }
}

impl From<&PAdicTrunc> for DigitString {
    fn from(t: &PAdicTrunc) -> Self {
        DigitString { base: t.base(), entries: t.digits().to_vec() }
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

pub fn digsum(j: &DigitString) -> BigUint {
    j.digsum()
}

pub fn digits_of(n: u64, base: u64) -> Result<DigitString> {
    DigitString::digits_of(&BigUint::from(n), base)
}

pub fn concat(i: &DigitString, j: &DigitString) -> Result<DigitString> {
    i.concat(j)
}

/// `z -> m z + x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub m: Rational,
    pub x: Rational,
}

impl AffineMap {
    pub fn new(m: Rational, x: Rational) -> Self {
        AffineMap { m, x }
    }

    pub fn identity() -> Self {
        AffineMap { m: Rational::one(), x: Rational::zero() }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap { m: &self.m * &inner.m, x: &self.m * &inner.x + &self.x }
    }

    pub fn apply(&self, z: &Rational) -> Rational {
        &self.m * z + &self.x
    }

    /// The fixed point `x / (1 - m)`, if `m != 1`.
    pub fn fixed_point(&self) -> Option<Rational> {
        let d = Rational::one() - &self.m;
        self.x.checked_div(&d).ok()
    }
}

/// `H_j = H_{j_1} ∘ .. ∘ H_{j_n}` as `z -> M_H(j) z + X_H(j)`.
pub fn compose_string(h: &HydraMap, j: &DigitString) -> Result<AffineMap> {
    if j.base != h.p() {
        return Err(Error::BaseMismatch { expected: h.p(), found: j.base });
    }
    Ok(j.entries.iter().fold(AffineMap::identity(), |acc, &d| {
        let b = h.branch(d as usize);
        AffineMap { x: &acc.m * &b.c + &acc.x, m: acc.m * &b.r }
    }))
}

/// Rational `p`-adic integer whose digits repeat `j` forever:
/// `digsum(j) / (1 - p^|j|)`.
pub fn periodic_preimage(j: &DigitString) -> Result<Rational> {
    if j.is_empty() {
        return Err(Error::InvalidArgument("empty string has no periodic preimage".into()));
    }
    let n = Rational::from_integer(BigInt::from(j.digsum()));
    let denom = Rational::one() - Rational::from_integer(BigInt::from(j.base).pow(j.len() as u32));
    n.checked_div(&denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::tests::t3;

    fn s(base: u64, e: &[u32]) -> DigitString {
        DigitString::new(base, e.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn digit_sums() {
        assert_eq!(s(3, &[1, 2, 0, 1]).digsum(), BigUint::from(34u32));
        assert_eq!(DigitString::empty(3).digsum(), BigUint::zero());
        assert_eq!(digits_of(6, 2).unwrap().entries(), &[0, 1, 1]);
        assert!(digits_of(0, 5).unwrap().is_empty());
    }

    #[test]
    fn concatenation() {
        assert_eq!(concat(&s(2, &[1]), &s(2, &[0])).unwrap(), s(2, &[1, 0]));
        assert_eq!(concat(&s(2, &[]), &s(2, &[1, 1])).unwrap(), s(2, &[1, 1]));
        assert_eq!(concat(&s(2, &[1, 0]), &s(2, &[1, 0])).unwrap(), s(2, &[1, 0, 1, 0]));
        assert!(matches!(concat(&s(2, &[1]), &s(3, &[1])), Err(Error::BaseMismatch { .. })));
    }

    #[test]
    fn string_maps() {
        let h = t3();
        assert_eq!(compose_string(&h, &s(2, &[1])).unwrap(), AffineMap::new(q(3, 2), q(1, 2)));
        assert_eq!(compose_string(&h, &s(2, &[1, 0])).unwrap(), AffineMap::new(q(3, 4), q(1, 2)));
        assert_eq!(compose_string(&h, &DigitString::empty(2)).unwrap(), AffineMap::identity());
        assert!(compose_string(&h, &s(3, &[1])).is_err());
    }

    #[test]
    fn preimages() {
        assert_eq!(periodic_preimage(&s(2, &[1, 1, 0])).unwrap(), q(-3, 7));
        assert_eq!(periodic_preimage(&s(2, &[0, 1])).unwrap(), q(-2, 3));
    }
}
