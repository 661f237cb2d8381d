//! Valuations and absolute values at the places of `Q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;
use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct primes dividing a nonzero big integer, up to `limit` (trial division).
pub(crate) fn small_prime_factors(n: &BigInt, limit: u64) -> Vec<u64> {
    let mut n = num_traits::Signed::abs(n);
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = 2u64;
    while d <= limit && !n.is_one() {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
    }
    out
}

/// A `p`-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn vp_val(r: &Rational, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(valuation_unchecked(r, p))
}

pub(crate) fn valuation_unchecked(r: &Rational, p: u64) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_valuation(r.numer(), p) - int_valuation(r.denom(), p))
}

/// A place of `Q`: a prime or the archimedean absolute value.
///
/// Over `Q` every finite place has ramification index 1, local degree 1 and
/// uniformizer `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Archimedean,
}

impl Place {
    pub fn finite(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Place::Finite(q))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Finite(q) => Some(*q),
            Place::Archimedean => None,
        }
    }

    pub fn ramification_index(&self) -> u32 {
        1
    }

    pub fn local_degree(&self) -> u32 {
        1
    }

    pub fn uniformizer(&self) -> Option<u64> {
        self.prime()
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(q) => write!(f, "{q}"),
            Place::Archimedean => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Place::Archimedean),
            other => {
                let q: u64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad place {other:?}")))?;
                Place::finite(q)
            }
        }
    }
}

/// A nonnegative absolute value, kept exact.
///
/// At a finite place the value is an integer power of the prime, stored as
/// `(q, exponent)`; at the archimedean place it is a rational magnitude.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AbsValue {
    Zero,
    PrimePower { q: u64, exp: i64 },
    Magnitude(Rational),
}

impl AbsValue {
    pub fn to_rational(&self) -> Rational {
        match self {
            AbsValue::Zero => Rational::zero(),
            AbsValue::PrimePower { q, exp } => {
                Rational::from_integer(BigInt::from(*q)).pow(*exp as i32)
            }
            AbsValue::Magnitude(m) => m.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            AbsValue::Zero => 0.0,
            AbsValue::PrimePower { q, exp } => (*q as f64).powi(*exp as i32),
            AbsValue::Magnitude(m) => m.to_f64(),
        }
    }

    /// Natural log; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        match self {
            AbsValue::Zero => f64::NEG_INFINITY,
            AbsValue::PrimePower { q, exp } => *exp as f64 * (*q as f64).ln(),
            AbsValue::Magnitude(m) => m.to_f64().ln(),
        }
    }

    pub fn one() -> Self {
        AbsValue::Magnitude(Rational::one())
    }

    pub fn is_one(&self) -> bool {
        match self {
            AbsValue::Zero => false,
            AbsValue::PrimePower { exp, .. } => *exp == 0,
            AbsValue::Magnitude(m) => m.is_one(),
        }
    }

    pub fn cmp_one(&self) -> Ordering {
        self.cmp(&AbsValue::one())
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AbsValue::PrimePower { q: a, exp: x }, AbsValue::PrimePower { q: b, exp: y })
                if a == b =>
            {
                x.cmp(y)
            }
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl Mul for &AbsValue {
    type Output = AbsValue;

    fn mul(self, rhs: &AbsValue) -> AbsValue {
        match (self, rhs) {
            (AbsValue::Zero, _) | (_, AbsValue::Zero) => AbsValue::Zero,
            (AbsValue::PrimePower { q: a, exp: x }, AbsValue::PrimePower { q: b, exp: y })
                if a == b =>
            {
                AbsValue::PrimePower { q: *a, exp: x + y }
            }
            _ => AbsValue::Magnitude(self.to_rational() * rhs.to_rational()),
        }
    }
}

impl Mul for AbsValue {
    type Output = AbsValue;

    fn mul(self, rhs: AbsValue) -> AbsValue {
        &self * &rhs
    }
}

pub fn abs_at_place(r: &Rational, place: Place) -> AbsValue {
    match place {
        Place::Archimedean => AbsValue::Magnitude(r.abs()),
        Place::Finite(q) => match valuation_unchecked(r, q) {
            Valuation::Infinite => AbsValue::Zero,
            Valuation::Finite(v) => AbsValue::PrimePower { q, exp: -v },
        },
    }
}

/// `y |y|_p`: the unit part of `y` at `p`; zero maps to zero.
pub fn u_p_part(y: &Rational, p: u64) -> Result<Rational> {
    match vp_val(y, p)? {
        Valuation::Infinite => Ok(Rational::zero()),
        Valuation::Finite(v) => Ok(y * &Rational::from_integer(BigInt::from(p)).pow(-v as i32)),
    }
}

/// Splits `r = mu * u` with `mu` a product of powers of the primes in `primes`
/// and `u` a unit at each of them.
pub fn mu_u_factor(r: &Rational, primes: &[u64]) -> Result<(Rational, Rational)> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut mu = Rational::one();
    let mut seen = Vec::new();
    for &q in primes {
        if seen.contains(&q) {
            continue;
        }
        seen.push(q);
        if let Valuation::Finite(v) = vp_val(r, q)? {
            mu = mu * Rational::from_integer(BigInt::from(q)).pow(v as i32);
        }
    }
    let u = r.checked_div(&mu)?;
    Ok((mu, u))
}
