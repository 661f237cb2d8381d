//! Hydra maps: `H(z) = r_j z + c_j` where `j = z mod p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::{Error, Rational, Result};

/// One affine branch `z -> r z + c`, with `r != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    pub r: Rational,
    pub c: Rational,
}

impl Branch {
    pub fn new(r: Rational, c: Rational) -> Self {
        Branch { r, c }
    }

    pub fn apply(&self, z: &Rational) -> Rational {
        &self.r * z + &self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub integral: bool,
    pub proper: bool,
    pub centered: bool,
}

/// A validated Hydra map on `Z` with `p` branches.
///
/// Branch `j` serves the residue class `j + pZ`; every branch sends its own
/// class into `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HydraMap {
    p: u64,
    branches: Vec<Branch>,
    initial_condition: Option<Rational>,
}

/// Residues `z mod L` (with `L = lcm(p, den r)`) for which `r z + c` is an
/// integer. Integrality of `r z + c` only depends on `z mod den r`.
fn integral_residues(b: &Branch, p: u64) -> Result<(u64, Vec<u64>)> {
    let den = b.r.denom().to_u64().ok_or_else(|| {
        Error::Overflow(format!("multiplier denominator {} is too large", b.r.denom()))
    })?;
    let l = p.lcm(&den);
    let hits = (0..l)
        .filter(|&z| b.apply(&Rational::from_integer(BigInt::from(z))).is_integer())
        .collect();
    Ok((l, hits))
}

impl HydraMap {
    pub fn new(p: u64, branches: Vec<Branch>) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!("p must be at least 2, got {p}")));
        }
        if branches.len() as u64 != p {
            return Err(Error::BranchCount { expected: p as usize, found: branches.len() });
        }
        for (j, b) in branches.iter().enumerate() {
            if b.r.is_zero() {
                return Err(Error::ZeroMultiplier { branch: j });
            }
            let (l, hits) = integral_residues(b, p)?;
            if let Some(w) = (j as u64..l).step_by(p as usize).find(|z| !hits.contains(z)) {
                return Err(Error::NonIntegralImage { branch: j, witness: w as i64 });
            }
        }
        Ok(HydraMap { p, branches, initial_condition: None })
    }

    /// Builds from `(r, c)` pairs.
    pub fn build(p: u64, specs: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(p, specs.iter().map(|(r, c)| Branch::new(r.clone(), c.clone())).collect())
    }

    /// Attaches `X_H(0) = z`; requires `(1 - r_0) z = c_0`.
    pub fn with_initial_condition(mut self, z: Rational) -> Result<Self> {
        let b0 = &self.branches[0];
        if (Rational::one() - &b0.r) * &z != b0.c {
            return Err(Error::InvalidInitialCondition(z.to_string()));
        }
        self.initial_condition = Some(z);
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, j: usize) -> &Branch {
        &self.branches[j]
    }

    pub fn initial_condition(&self) -> Option<&Rational> {
        self.initial_condition.as_ref()
    }

    pub fn is_proper(&self) -> bool {
        !self.branches[0].r.is_one()
    }

    pub fn is_centered(&self) -> bool {
        self.branches[0].c.is_zero()
    }

    /// Each branch hits `Z` on exactly its own residue class.
    pub fn is_integral(&self) -> bool {
        self.branches.iter().enumerate().all(|(j, b)| match integral_residues(b, self.p) {
            Ok((_, hits)) => hits.iter().all(|z| z % self.p == j as u64),
            Err(_) => false,
        })
    }

    pub fn classify(&self) -> Classification {
        Classification {
            integral: self.is_integral(),
            proper: self.is_proper(),
            centered: self.is_centered(),
        }
    }

    /// `X_H(0)`: `(1 - r_0)^{-1} c_0` for proper maps, else the initial condition.
    pub fn base_value(&self) -> Result<Rational> {
        if let Some(z) = &self.initial_condition {
            return Ok(z.clone());
        }
        let b0 = &self.branches[0];
        b0.c.checked_div(&(Rational::one() - &b0.r)).map_err(|_| Error::NotProper)
    }

    pub fn residue(&self, z: &BigInt) -> usize {
        z.mod_floor(&BigInt::from(self.p)).to_usize().expect("residue below p")
    }

    pub fn apply(&self, z: &BigInt) -> BigInt {
        let j = self.residue(z);
        self.branches[j]
            .apply(&Rational::from_integer(z.clone()))
            .to_integer()
            .expect("validated branch maps its class into Z")
    }

    pub fn apply_branch(&self, j: usize, z: &Rational) -> Rational {
        self.branches[j].apply(z)
    }

    /// `G(z) = H(z + a) - a`; branch `k` of `G` is branch `(k + a) mod p` of `H`
    /// with offset `r a + c - a`.
    pub fn conjugate_by_shift(&self, a: i64) -> HydraMap {
        let a_r = Rational::from(a);
        let branches = (0..self.p)
            .map(|k| {
                let j = (k as i128 + a as i128).rem_euclid(self.p as i128) as usize;
                let b = &self.branches[j];
                Branch::new(b.r.clone(), &b.r * &a_r + &b.c - &a_r)
            })
            .collect();
        HydraMap { p: self.p, branches, initial_condition: None }
    }

    /// Searches integer shifts `a` in `[-bound, bound]` (smallest `|a|` first,
    /// positive before negative) making `H(z + a) - a` centered.
    pub fn center_map(&self, bound: u64) -> Option<(HydraMap, i64)> {
        let bound = bound as i64;
        std::iter::once(0)
            .chain((1..=bound).flat_map(|a| [a, -a]))
            .map(|a| (self.conjugate_by_shift(a), a))
            .find(|(g, _)| g.is_centered())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    pub(crate) fn t3() -> HydraMap {
        HydraMap::build(2, &[(q(1, 2), q(0, 1)), (q(3, 2), q(1, 2))]).unwrap()
    }

    pub(crate) fn t5() -> HydraMap {
        HydraMap::build(2, &[(q(1, 2), q(0, 1)), (q(5, 2), q(1, 2))]).unwrap()
    }

    #[test]
    fn builds_collatz_variants() {
        assert_eq!(t3().p(), 2);
        assert_eq!(t5().branch(1).r, q(5, 2));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(
            HydraMap::build(2, &[(q(1, 3), q(0, 1)), (q(3, 1), q(1, 1))]),
            Err(Error::NonIntegralImage { branch: 0, witness: 2 })
        );
        assert_eq!(
            HydraMap::build(2, &[(q(1, 2), q(0, 1))]),
            Err(Error::BranchCount { expected: 2, found: 1 })
        );
        assert_eq!(
            HydraMap::build(2, &[(q(1, 2), q(0, 1)), (q(0, 1), q(1, 1))]),
            Err(Error::ZeroMultiplier { branch: 1 })
        );
    }

    #[test]
    fn classification() {
        let c = t3().classify();
        assert_eq!(c, Classification { integral: true, proper: true, centered: true });
        let collatz = HydraMap::build(2, &[(q(1, 2), q(0, 1)), (q(3, 1), q(1, 1))]).unwrap();
        assert!(!collatz.classify().integral);
        let improper = HydraMap::build(2, &[(q(1, 1), q(5, 1)), (q(3, 2), q(1, 2))]).unwrap();
        assert!(!improper.classify().proper);
        assert!(!improper.classify().centered);
    }

    #[test]
    fn application() {
        let h = t3();
        assert_eq!(h.apply(&BigInt::from(7)), BigInt::from(11));
        assert_eq!(h.apply(&BigInt::from(6)), BigInt::from(3));
        assert_eq!(h.apply(&BigInt::from(-5)), BigInt::from(-7));
        assert_eq!(t5().apply(&BigInt::from(13)), BigInt::from(33));
        assert_eq!(h.apply_branch(0, &q(3, 1)), q(3, 2));
    }

    #[test]
    fn centering() {
        let (g, a) = t3().center_map(10).unwrap();
        assert_eq!((g, a), (t3(), 0));

        // T3 conjugated by z -> z - 2: H(z) = T3(z - 2) + 2
        let shifted = HydraMap::build(2, &[(q(1, 2), q(1, 1)), (q(3, 2), q(-1, 2))]).unwrap();
        assert_eq!(shifted.conjugate_by_shift(2), t3());
        // a = 1 already centers it, landing on a branch-swapped conjugate
        let (g, a) = shifted.center_map(10).unwrap();
        assert_eq!(a, 1);
        assert_eq!(g.branch(0), &Branch::new(q(3, 2), q(0, 1)));

        // r_0 = 1 with c_0 != 0, and the odd branch is a pure translation too
        let stuck = HydraMap::build(2, &[(q(1, 1), q(2, 1)), (q(1, 1), q(1, 1))]).unwrap();
        assert!(stuck.center_map(5).is_none());

        // r_0 = 1 is still centerable through the other branch: a = -1 uses branch 1
        let via_odd = HydraMap::build(2, &[(q(1, 1), q(3, 1)), (q(3, 2), q(1, 2))]).unwrap();
        let (g, a) = via_odd.center_map(5).unwrap();
        assert_eq!(a, -1);
        assert!(g.is_centered());
        // G(z) = H(z - 1) + 1 agrees with the conjugated branches
        for z in -20i64..20 {
            let lhs = g.apply(&BigInt::from(z));
            let rhs = via_odd.apply(&BigInt::from(z - 1)) + 1;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn initial_conditions() {
        let improper = HydraMap::build(2, &[(q(1, 1), q(0, 1)), (q(3, 2), q(1, 2))]).unwrap();
        assert_eq!(improper.base_value(), Err(Error::NotProper));
        let with = improper.clone().with_initial_condition(q(4, 1)).unwrap();
        assert_eq!(with.base_value().unwrap(), q(4, 1));
        let bad = HydraMap::build(2, &[(q(1, 1), q(1, 1)), (q(3, 2), q(1, 2))]).unwrap();
        assert!(bad.with_initial_condition(q(4, 1)).is_err());
    }
}
