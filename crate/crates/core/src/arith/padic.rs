//! Residues, truncations and digit expansions of rational `p`-adic integers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::place::{is_prime, prime_factors};
use super::Rational;
use crate::{Error, Result};

fn check_base(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("base must be at least 2, got {p}")));
    }
    Ok(())
}

fn not_integral(r: &Rational, p: u64) -> Error {
    Error::NotIntegral { value: r.to_string(), base: p }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// `r` reduced modulo an arbitrary modulus `m`, if its denominator is invertible mod `m`.
pub(crate) fn reduce_mod(r: &Rational, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let inv = mod_inverse(r.denom(), m)?;
    Some((r.numer() * inv).mod_floor(m))
}

pub(crate) fn reduce_mod_u64(r: &Rational, m: u64) -> Option<u64> {
    reduce_mod(r, &BigInt::from(m)).map(|x| x.to_u64().expect("residue below modulus"))
}

/// `[r]_{p^n}`: the unique integer in `{0, .., p^n - 1}` congruent to `r`.
pub fn residue_mod(r: &Rational, p: u64, n: u32) -> Result<BigInt> {
    check_base(p)?;
    let m = BigInt::from(p).pow(n);
    // Integrality at p does not depend on n, so check it even when n = 0.
    if !r.denom().gcd(&BigInt::from(p)).is_one() {
        return Err(not_integral(r, p));
    }
    reduce_mod(r, &m).ok_or_else(|| not_integral(r, p))
}

/// `[z]_{p^N}` as its `N` base-`p` digits, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicTrunc {
    base: u64,
    digits: Vec<u32>,
}

impl PAdicTrunc {
    pub fn from_digits(base: u64, digits: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        if let Some(d) = digits.iter().find(|&&d| u64::from(d) >= base) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for base {base}")));
        }
        Ok(PAdicTrunc { base, digits })
    }

    /// Truncation of an integer (negative values are read `p`-adically).
    pub fn from_integer(n: &BigInt, base: u64, depth: usize) -> Result<Self> {
        check_base(base)?;
        let m = BigInt::from(base).pow(depth as u32);
        let mut v = n.mod_floor(&m);
        let b = BigInt::from(base);
        let mut digits = Vec::with_capacity(depth);
        for _ in 0..depth {
            let (q, r) = v.div_rem(&b);
            digits.push(r.to_u32().expect("digit below base"));
            v = q;
        }
        Ok(PAdicTrunc { base, digits })
    }

    pub fn from_u64(n: u64, base: u64, depth: usize) -> Result<Self> {
        Self::from_integer(&BigInt::from(n), base, depth)
    }

    pub fn from_rational(r: &Rational, base: u64, depth: usize) -> Result<Self> {
        let v = residue_mod(r, base, depth as u32)?;
        Self::from_integer(&v, base, depth)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Integer value in `{0, .., p^N - 1}`.
    pub fn value(&self) -> BigInt {
        let b = BigInt::from(self.base);
        self.digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &b + BigInt::from(d))
    }
}

/// A rational `p`-adic integer as a preperiod followed by a repeating period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalDigitExpansion {
    base: u64,
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl RationalDigitExpansion {
    /// Builds an expansion from raw parts and brings it to canonical form
    /// (shortest period, then shortest preperiod).
    pub fn new(base: u64, preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must be nonempty".into()));
        }
        if let Some(d) = preperiod.iter().chain(&period).find(|&&d| u64::from(d) >= base) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for base {base}")));
        }
        let raw = RationalDigitExpansion { base, preperiod, period };
        digit_expansion(&raw.to_rational(), base)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// The `k`-th digit (coefficient of `p^k`).
    pub fn digit(&self, k: usize) -> u32 {
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn digits(&self) -> impl Iterator<Item = u32> + '_ {
        (0..).map(move |k| self.digit(k))
    }

    pub fn truncate(&self, depth: usize) -> PAdicTrunc {
        PAdicTrunc { base: self.base, digits: self.digits().take(depth).collect() }
    }

    /// The encoded rational: `pre + p^|pre| * per / (1 - p^|per|)`.
    pub fn to_rational(&self) -> Rational {
        let b = BigInt::from(self.base);
        let value = |ds: &[u32]| {
            ds.iter().rev().fold(BigInt::zero(), |acc, &d| acc * &b + BigInt::from(d))
        };
        let pre = Rational::from_integer(value(&self.preperiod));
        let per = Rational::from_integer(value(&self.period));
        let scale = Rational::from_integer(b.pow(self.preperiod.len() as u32));
        let denom = Rational::one() - Rational::from_integer(b.pow(self.period.len() as u32));
        pre + scale * per / denom
    }

    /// The purely periodic tail (the expansion after the preperiod).
    pub fn periodic_part(&self) -> RationalDigitExpansion {
        RationalDigitExpansion { base: self.base, preperiod: Vec::new(), period: self.period.clone() }
    }
}

/// The eventually periodic digit expansion of a rational `p`-adic integer.
pub fn digit_expansion(r: &Rational, p: u64) -> Result<RationalDigitExpansion> {
    check_base(p)?;
    if !r.denom().gcd(&BigInt::from(p)).is_one() {
        return Err(not_integral(r, p));
    }
    // The orbit of r under the shift is eventually periodic; since the
    // remaining digits determine the state, the first repeated state gives
    // the minimal preperiod and period at once.
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut z = r.clone();
    let start = loop {
        if let Some(&i) = seen.get(&z) {
            break i;
        }
        seen.insert(z.clone(), digits.len());
        let (d, next) = shift_rational(&z, p)?;
        digits.push(d);
        z = next;
    };
    let period = digits.split_off(start);
    Ok(RationalDigitExpansion { base: p, preperiod: digits, period })
}

/// Lowest digit and the shifted value `(r - [r]_p) / p`.
fn shift_rational(r: &Rational, p: u64) -> Result<(u32, Rational)> {
    let d = residue_mod(r, p, 1)?;
    let next = (r - &Rational::from_integer(d.clone())) / Rational::from_integer(BigInt::from(p));
    Ok((d.to_u32().expect("digit below base"), next))
}

pub fn shift_theta_rational(r: &Rational, p: u64) -> Result<Rational> {
    shift_rational(r, p).map(|(_, next)| next)
}

/// The `p`-adic shift map, dropping the lowest digit.
pub trait ShiftTheta: Sized {
    fn shift_theta(&self) -> Result<Self>;
}

impl ShiftTheta for PAdicTrunc {
    fn shift_theta(&self) -> Result<Self> {
        if self.digits.is_empty() {
            return Err(Error::ZeroDepth);
        }
        Ok(PAdicTrunc { base: self.base, digits: self.digits[1..].to_vec() })
    }
}

impl ShiftTheta for RationalDigitExpansion {
    fn shift_theta(&self) -> Result<Self> {
        let mut out = self.clone();
        if out.preperiod.is_empty() {
            out.period.rotate_left(1);
        } else {
            out.preperiod.remove(0);
        }
        Ok(out)
    }
}

pub fn shift_theta<T: ShiftTheta>(x: &T) -> Result<T> {
    x.shift_theta()
}

/// Component of a base-`p` truncation in `Z_{l^v}` where `v = v_l(p)`,
/// under `Z_p = prod_{l | p} Z_{l^{v_l(p)}}`.
pub fn crt_split(x: &PAdicTrunc, ell: u64) -> Result<PAdicTrunc> {
    let p = x.base;
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if p % ell != 0 {
        return Err(Error::NotDivisor { ell, p });
    }
    let mut v = 0;
    let mut rest = p;
    while rest % ell == 0 {
        rest /= ell;
        v += 1;
    }
    let sub = ell.pow(v);
    PAdicTrunc::from_integer(&x.value(), sub, x.depth())
}

/// Reassembles a base-`p` truncation from its prime-power components.
pub fn crt_join(components: &[PAdicTrunc], p: u64) -> Result<PAdicTrunc> {
    check_base(p)?;
    let primes = prime_factors(p);
    if components.len() != primes.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} components, found {}",
            primes.len(),
            components.len()
        )));
    }
    let depth = components.first().map_or(0, PAdicTrunc::depth);
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for c in components {
        if c.depth() != depth {
            return Err(Error::InvalidArgument("components differ in depth".into()));
        }
        let m = BigInt::from(c.base).pow(depth as u32);
        if !modulus.gcd(&m).is_one() || p % c.base != 0 {
            return Err(Error::InvalidArgument(format!("component base {} does not fit {p}", c.base)));
        }
        // acc + modulus * k ≡ c (mod m)
        let inv = mod_inverse(&modulus, &m).expect("coprime moduli");
        let k = ((c.value() - &acc) * inv).mod_floor(&m);
        acc += &modulus * k;
        modulus *= m;
    }
    PAdicTrunc::from_integer(&acc, p, depth)
}
