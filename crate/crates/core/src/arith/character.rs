//! Fractional parts, the dual group `Q_q / Z_q`, and its characters.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::padic::{reduce_mod, residue_mod};
use super::place::{is_prime, prime_factors, valuation_unchecked, Valuation};
use super::{PAdicTrunc, Rational};
use crate::{Error, Result};

pub(crate) fn checked_pow(q: u64, n: u32) -> Result<u64> {
    q.checked_pow(n).ok_or_else(|| Error::Overflow(format!("{q}^{n} does not fit in 64 bits")))
}

fn prime_frac_part(x: &Rational, q: u64) -> Rational {
    match valuation_unchecked(x, q) {
        Valuation::Finite(v) if v < 0 => {
            let m = (-v) as u32;
            let qm = BigInt::from(q).pow(m);
            // x = a / (q^m b) with gcd(b, q) = 1
            let scaled = x * &Rational::from_integer(qm.clone());
            let k = reduce_mod(&scaled, &qm).expect("unit denominator");
            Rational::new(k, qm).expect("nonzero modulus")
        }
        _ => Rational::zero(),
    }
}

/// `{x}_q`, the `q`-adic fractional part as a rational in `[0, 1)`.
///
/// For composite `q` this is the sum of the prime-component parts, mod 1.
pub fn frac_part(x: &Rational, q: u64) -> Result<Rational> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("base must be at least 2, got {q}")));
    }
    if is_prime(q) {
        return Ok(prime_frac_part(x, q));
    }
    let sum: Rational = prime_factors(q).into_iter().map(|l| prime_frac_part(x, l)).sum();
    Ok(sum.fract_real())
}

/// An element `k / q^n` of `Q_q / Z_q`, reduced so that `q` does not divide
/// `k` (or `k = 0` at level 0). Its absolute value is `q^level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frequency {
    q: u64,
    k: u64,
    level: u32,
}

impl Frequency {
    /// `k / q^n` reduced mod 1.
    pub fn new(k: u64, q: u64, n: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let modulus = checked_pow(q, n)?;
        let mut k = k % modulus;
        let mut level = n;
        if k == 0 {
            return Ok(Frequency { q, k: 0, level: 0 });
        }
        while k % q == 0 {
            k /= q;
            level -= 1;
        }
        Ok(Frequency { q, k, level })
    }

    pub fn zero(q: u64) -> Result<Self> {
        Frequency::new(0, q, 0)
    }

    /// `{x}_q` as a frequency.
    pub fn from_rational(x: &Rational, q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let f = prime_frac_part(x, q);
        let den = f.denom();
        let mut level = 0u32;
        let mut d = den.clone();
        let bq = BigInt::from(q);
        while !d.is_one() {
            d /= &bq;
            level += 1;
        }
        let k = f.numer().to_u64().expect("numerator below denominator");
        Frequency::new(k, q, level)
    }

    /// Every frequency with `|t|_q <= q^n`, ordered by level then numerator.
    /// There are exactly `q^n` of them.
    pub fn enumerate(q: u64, n: u32) -> Result<Vec<Frequency>> {
        let modulus = checked_pow(q, n)?;
        let mut out: Vec<Frequency> =
            (0..modulus).map(|k| Frequency::new(k, q, n)).collect::<Result<_>>()?;
        out.sort();
        Ok(out)
    }

    /// Frequencies of exact level `m`.
    pub fn at_level(q: u64, m: u32) -> Result<Vec<Frequency>> {
        if m == 0 {
            return Ok(vec![Frequency::zero(q)?]);
        }
        let modulus = checked_pow(q, m)?;
        Ok((1..modulus).filter(|k| k % q != 0).map(|k| Frequency { q, k, level: m }).collect())
    }

    pub fn prime(&self) -> u64 {
        self.q
    }

    pub fn numer(&self) -> u64 {
        self.k
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `q^level`, the denominator.
    pub fn modulus(&self) -> u64 {
        self.q.pow(self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.k == 0
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.k, self.modulus()).expect("nonzero modulus")
    }

    pub fn to_f64(&self) -> f64 {
        self.k as f64 / self.modulus() as f64
    }

    /// Sum mod 1.
    pub fn add(&self, other: &Frequency) -> Result<Frequency> {
        if self.q != other.q {
            return Err(Error::BaseMismatch { expected: self.q, found: other.q });
        }
        let level = self.level.max(other.level);
        let m = checked_pow(self.q, level)?;
        let a = self.k * (m / self.modulus());
        let b = other.k * (m / other.modulus());
        Frequency::new((a % m + b % m) % m, self.q, level)
    }

    pub fn neg(&self) -> Frequency {
        if self.k == 0 {
            return *self;
        }
        Frequency { q: self.q, k: self.modulus() - self.k, level: self.level }
    }

    /// `{c t}_q` for a rational `c`.
    pub fn scale(&self, c: &Rational) -> Result<Frequency> {
        Frequency::from_rational(&(c * &self.to_rational()), self.q)
    }

    pub fn parse(s: &str, q: u64) -> Result<Frequency> {
        let r: Rational = s.parse()?;
        if !r.is_zero() {
            let mut d = r.denom().clone();
            let bq = BigInt::from(q);
            while (&d % &bq).is_zero() {
                d /= &bq;
            }
            if !d.is_one() {
                return Err(Error::Parse(format!("{s} is not a {q}-power fraction")));
            }
        }
        Frequency::from_rational(&r, q)
    }
}

impl PartialOrd for Frequency {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frequency {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.level, self.k).cmp(&(other.q, other.level, other.k))
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.k, self.modulus())
        }
    }
}

/// `e^{2 pi i num / den}` held exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero order");
        let num = num % den;
        let g = num.gcd(&den);
        RootOfUnity { num: num / g, den: den / g }
    }

    pub fn one() -> Self {
        RootOfUnity { num: 0, den: 1 }
    }

    /// `e^{2 pi i x}` for a rational `x` (only `x mod 1` matters).
    pub fn from_turns(x: &Rational) -> Self {
        let f = x.fract_real();
        let den = f.denom().to_u64().expect("root of unity order fits in u64");
        let num = f.numer().to_u64().expect("numerator below order");
        RootOfUnity::new(num, den)
    }

    /// Angle as a fraction of a full turn, `num / den`.
    pub fn turns(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let den = self.den.lcm(&other.den);
        let a = (self.num as u128) * (den / self.den) as u128;
        let b = (other.num as u128) * (den / other.den) as u128;
        RootOfUnity::new(((a + b) % den as u128) as u64, den)
    }

    pub fn conj(&self) -> RootOfUnity {
        RootOfUnity::new(self.den - self.num, self.den)
    }

    pub fn to_complex(&self) -> Complex64 {
        unit(self.num, self.den)
    }
}

/// `e^{2 pi i num / den}` in floating point, with the angle reduced first.
pub(crate) fn unit(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    let theta = std::f64::consts::TAU * (num as f64 / den as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// The character `z -> e^{2 pi i t [z]_{|t|_q}}` at a `q`-integral rational.
pub fn character_eval(t: &Frequency, z: &Rational) -> Result<RootOfUnity> {
    if t.is_zero() {
        return Ok(RootOfUnity::one());
    }
    let residue = residue_mod(z, t.q, t.level)?;
    Ok(character_from_residue(t, &residue))
}

/// The same character evaluated on a base-`q` truncation deep enough for `t`.
pub fn character_eval_trunc(t: &Frequency, z: &PAdicTrunc) -> Result<RootOfUnity> {
    if z.base() != t.q {
        return Err(Error::BaseMismatch { expected: t.q, found: z.base() });
    }
    if t.is_zero() {
        return Ok(RootOfUnity::one());
    }
    if z.depth() < t.level as usize {
        return Err(Error::TooShallow { depth: z.depth(), level: t.level });
    }
    let residue = z.value().mod_floor(&BigInt::from(t.modulus()));
    Ok(character_from_residue(t, &residue))
}

fn character_from_residue(t: &Frequency, residue: &BigInt) -> RootOfUnity {
    let m = t.modulus();
    let r = residue.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus");
    RootOfUnity::new(((t.k as u128 * r as u128) % m as u128) as u64, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn fractional_parts() {
        let f = frac_part(&q(27, 4), 2).unwrap();
        assert_eq!(f, q(3, 4));
        // 27/4 - 3/4 = 6 is 2-integral
        assert!(valuation_unchecked(&(q(27, 4) - f), 2) >= Valuation::Finite(0));
        assert_eq!(frac_part(&q(1, 3), 2).unwrap(), Rational::zero());
        assert_eq!(frac_part(&q(1, 6), 2).unwrap(), q(1, 2));
        assert_eq!(frac_part(&q(1, 6), 3).unwrap(), q(2, 3));
        assert_eq!(frac_part(&q(1, 6), 6).unwrap(), q(1, 6));
    }

    #[test]
    fn frequencies_reduce() {
        let t = Frequency::new(3, 3, 2).unwrap();
        assert_eq!((t.numer(), t.level()), (1, 1));
        assert_eq!(t.to_string(), "1/3");
        assert_eq!(Frequency::new(9, 3, 2).unwrap(), Frequency::zero(3).unwrap());
        assert_eq!(Frequency::enumerate(3, 2).unwrap().len(), 9);
        assert_eq!(Frequency::enumerate(2, 3).unwrap().len(), 8);
        assert_eq!(Frequency::at_level(3, 2).unwrap().len(), 6);
        let a = Frequency::new(1, 3, 1).unwrap();
        let b = Frequency::new(2, 3, 1).unwrap();
        assert!(a.add(&b).unwrap().is_zero());
        assert_eq!(a.neg(), b);
        assert_eq!(Frequency::parse("2/9", 3).unwrap(), Frequency::new(2, 3, 2).unwrap());
        assert!(Frequency::parse("1/6", 3).is_err());
    }

    #[test]
    fn characters() {
        let half = Frequency::new(1, 2, 1).unwrap();
        assert!(close(character_eval(&half, &q(3, 1)).unwrap().to_complex(), Complex64::new(-1.0, 0.0)));
        let zero = Frequency::zero(5).unwrap();
        assert_eq!(character_eval(&zero, &q(17, 3)).unwrap(), RootOfUnity::one());
        let third = Frequency::new(1, 3, 1).unwrap();
        let w = character_eval(&third, &q(1, 2)).unwrap();
        assert_eq!(w.turns(), (2, 3));
        assert!(close(w.to_complex(), unit(4, 6)));
    }

    #[test]
    fn trunc_character_needs_depth() {
        let t = Frequency::new(1, 3, 2).unwrap();
        let z = PAdicTrunc::from_u64(5, 3, 1).unwrap();
        assert_eq!(character_eval_trunc(&t, &z), Err(Error::TooShallow { depth: 1, level: 2 }));
        let z = PAdicTrunc::from_u64(5, 3, 3).unwrap();
        assert_eq!(character_eval_trunc(&t, &z).unwrap(), character_eval(&t, &q(5, 1)).unwrap());
    }
}
