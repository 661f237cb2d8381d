//! Orbits, cycle censuses, orbit classes, and the correspondence between
//! periodic points and values of `X_H` at rational `p`-adic integers.
//!
//! Divergence cannot be decided by finite search, so an orbit that leaves the
//! escape bound (or runs out of steps) is reported as `Escaped`, never as
//! divergent.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::{FromPrimitive, Signed, Zero};
use petgraph::unionfind::UnionFind;

use crate::arith::Place;
use crate::map::HydraMap;
use crate::numen::{find_contracting_place, xh_rational_exact};
use crate::strings::{compose_string, periodic_preimage, DigitString};
use crate::{digit_expansion, Error, Rational, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitStatus {
    /// The start lies on its cycle.
    Periodic,
    Preperiodic,
    /// Left `|x| <= bound` or used up the step budget after `steps` steps.
    Escaped { bound: f64, steps: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitReport {
    pub start: BigInt,
    /// Iterates before the first cycle element (all iterates, when escaped).
    pub tail: Vec<BigInt>,
    /// The cycle rotated to begin at its minimum; empty when escaped.
    pub cycle: Vec<BigInt>,
    /// First cycle element the orbit reaches, so `tail` followed by the cycle
    /// rotated to start here is the literal iterate sequence.
    pub entry: Option<BigInt>,
    pub status: OrbitStatus,
}

/// Rotates a cycle to start at its minimum.
pub fn canonical_cycle(cycle: &[BigInt]) -> Vec<BigInt> {
    let Some(min_at) = cycle.iter().enumerate().min_by_key(|(_, v)| *v).map(|(i, _)| i) else {
        return Vec::new();
    };
    let mut out = cycle.to_vec();
    out.rotate_left(min_at);
    out
}

fn escape_limit(bound: f64) -> Option<BigInt> {
    if bound.is_finite() {
        BigInt::from_f64(bound.floor())
    } else {
        None
    }
}

pub fn orbit(h: &HydraMap, x: &BigInt, max_steps: usize, escape_bound: f64) -> OrbitReport {
    let limit = escape_limit(escape_bound);
    let outside = |v: &BigInt| limit.as_ref().is_some_and(|l| &v.abs() > l);
    let escaped = |seq: Vec<BigInt>, steps| OrbitReport {
        start: x.clone(),
        tail: seq,
        cycle: Vec::new(),
        entry: None,
        status: OrbitStatus::Escaped { bound: escape_bound, steps },
    };
    if outside(x) {
        return escaped(vec![x.clone()], 0);
    }
    let mut seq = vec![x.clone()];
    let mut index: HashMap<BigInt, usize> = HashMap::from([(x.clone(), 0)]);
    for step in 1..=max_steps {
        let next = h.apply(seq.last().expect("nonempty"));
        if let Some(&i) = index.get(&next) {
            let raw = seq.split_off(i);
            return OrbitReport {
                start: x.clone(),
                entry: Some(raw[0].clone()),
                cycle: canonical_cycle(&raw),
                tail: seq,
                status: if i == 0 { OrbitStatus::Periodic } else { OrbitStatus::Preperiodic },
            };
        }
        if outside(&next) {
            return escaped(seq, step);
        }
        index.insert(next.clone(), seq.len());
        seq.push(next);
    }
    escaped(seq, max_steps)
}

fn is_cycle_of(h: &HydraMap, cycle: &[BigInt]) -> bool {
    !cycle.is_empty()
        && cycle.iter().enumerate().all(|(i, c)| h.apply(c) == cycle[(i + 1) % cycle.len()])
        && cycle.iter().collect::<HashSet<_>>().len() == cycle.len()
}

/// Every cycle reached from starts in `range`, canonicalized and sorted.
pub fn find_cycles(
    h: &HydraMap,
    range: RangeInclusive<i64>,
    max_steps: usize,
    escape_bound: f64,
) -> Vec<Vec<BigInt>> {
    let limit = escape_limit(escape_bound);
    let mut cycles: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    // Values whose fate is already known: they reach a recorded cycle or escape.
    let mut settled: HashSet<BigInt> = HashSet::new();
    for start in range {
        let mut seq: Vec<BigInt> = Vec::new();
        let mut index: HashMap<BigInt, usize> = HashMap::new();
        let mut cur = BigInt::from(start);
        for _ in 0..=max_steps {
            if settled.contains(&cur) || limit.as_ref().is_some_and(|l| &cur.abs() > l) {
                break;
            }
            if let Some(&i) = index.get(&cur) {
                cycles.insert(canonical_cycle(&seq[i..]));
                break;
            }
            index.insert(cur.clone(), seq.len());
            let next = h.apply(&cur);
            seq.push(std::mem::replace(&mut cur, next));
        }
        settled.extend(seq);
    }
    cycles.into_iter().filter(|c| is_cycle_of(h, c)).collect()
}

/// Branch labels around a cycle, read from `cycle[0]`: the string `j` with
/// `H_j(cycle[0]) = cycle[0]`, whose innermost (last) entry is `cycle[0] mod p`.
pub fn cycle_string(h: &HydraMap, cycle: &[BigInt]) -> Result<DigitString> {
    if !is_cycle_of(h, cycle) {
        let shown: Vec<String> = cycle.iter().map(BigInt::to_string).collect();
        return Err(Error::NotACycle(shown.join(",")));
    }
    let entries = cycle.iter().rev().map(|c| h.residue(c) as u32).collect();
    DigitString::new(h.p(), entries)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceCertificate {
    pub cycle: Vec<BigInt>,
    pub string: DigitString,
    /// `digsum(string)`.
    pub n: BigUint,
    /// Length of `string`; `z` repeats it forever.
    pub lambda: usize,
    /// `n / (1 - p^lambda)`.
    pub z: Rational,
    pub place: Option<Place>,
    pub x_value: Option<Rational>,
    pub verified: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReverseScan {
    pub max_len: usize,
    pub strings_scanned: usize,
    /// Strings whose `M_H` contracts at no place.
    pub skipped: usize,
    /// Strings with an integral value, with that value.
    pub hits: Vec<(DigitString, BigInt)>,
    pub integer_values: BTreeSet<BigInt>,
    /// Integral values that are not on any discovered cycle.
    pub unmatched: BTreeSet<BigInt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub cycles: Vec<Vec<BigInt>>,
    pub certificates: Vec<CorrespondenceCertificate>,
    /// Cycles exempt from certification (the fixed point `{0}` of a centered map).
    pub special: Vec<Vec<BigInt>>,
    pub reverse: ReverseScan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceOptions {
    pub range: RangeInclusive<i64>,
    pub max_steps: usize,
    pub escape_bound: f64,
    /// Longest string in the reverse scan.
    pub max_len: usize,
}

impl Default for CorrespondenceOptions {
    fn default() -> Self {
        CorrespondenceOptions { range: -100..=100, max_steps: 10_000, escape_bound: 1e18, max_len: 12 }
    }
}

/// Value of `X_H` at the rational whose digits repeat `j`, at the first
/// contracting place (trying `preferred` first).
fn periodic_value(
    h: &HydraMap,
    j: &DigitString,
    preferred: Option<Place>,
) -> Result<(Rational, Place, Rational)> {
    let a = compose_string(h, j)?;
    let place = find_contracting_place(&a.m, preferred).ok_or(Error::NoContractingPlace)?;
    let z = periodic_preimage(j)?;
    let expansion = digit_expansion(&z, h.p())?;
    let x = xh_rational_exact(h, &expansion, place)?;
    Ok((z, place, x))
}

pub fn certify_cycle(
    h: &HydraMap,
    cycle: &[BigInt],
    preferred: Option<Place>,
) -> Result<CorrespondenceCertificate> {
    let string = cycle_string(h, cycle)?;
    let n = string.digsum();
    let lambda = string.len();
    let mut cert = CorrespondenceCertificate {
        cycle: cycle.to_vec(),
        n,
        lambda,
        z: periodic_preimage(&string)?,
        string,
        place: None,
        x_value: None,
        verified: false,
        failure: None,
    };
    match periodic_value(h, &cert.string, preferred) {
        Ok((_, place, x)) => {
            let a = compose_string(h, &cert.string)?;
            let closed_form = a.fixed_point();
            let in_cycle = x.to_integer().is_some_and(|v| cycle.contains(&v));
            let outside_n0 = !(cert.z.is_integer() && !cert.z.is_negative());
            cert.verified = in_cycle && outside_n0 && closed_form.as_ref() == Some(&x);
            if !cert.verified {
                cert.failure = Some(format!("X_H(z) = {x} is not a verified member of the cycle"));
            }
            cert.place = Some(place);
            cert.x_value = Some(x);
        }
        Err(e) => cert.failure = Some(e.to_string()),
    }
    Ok(cert)
}

fn scan_strings(
    h: &HydraMap,
    preferred: Option<Place>,
    max_len: usize,
    known: &HashSet<BigInt>,
) -> Result<ReverseScan> {
    let p = h.p();
    let mut scan = ReverseScan {
        max_len,
        strings_scanned: 0,
        skipped: 0,
        hits: Vec::new(),
        integer_values: BTreeSet::new(),
        unmatched: BTreeSet::new(),
    };
    for len in 1..=max_len {
        let mut entries = vec![0u32; len];
        loop {
            let j = DigitString::new(p, entries.clone())?;
            scan.strings_scanned += 1;
            match periodic_value(h, &j, preferred) {
                Ok((_, _, x)) => {
                    if let Some(v) = x.to_integer() {
                        if !known.contains(&v) {
                            scan.unmatched.insert(v.clone());
                        }
                        scan.integer_values.insert(v.clone());
                        scan.hits.push((j, v));
                    }
                }
                Err(Error::NoContractingPlace) | Err(Error::DegenerateCycle) => scan.skipped += 1,
                Err(e) => return Err(e),
            }
            // odometer increment
            let mut k = 0;
            while k < len && u64::from(entries[k]) + 1 == p {
                entries[k] = 0;
                k += 1;
            }
            if k == len {
                break;
            }
            entries[k] += 1;
        }
    }
    Ok(scan)
}

/// Certifies every discovered cycle through `X_H`, then scans all strings up
/// to `max_len` for integral values of `X_H` at their periodic preimages.
///
/// Requires an integral, proper, centered map.
pub fn correspondence_roundtrip(
    h: &HydraMap,
    preferred: Option<Place>,
    opts: &CorrespondenceOptions,
) -> Result<CorrespondenceReport> {
    let class = h.classify();
    if !(class.integral && class.proper && class.centered) {
        return Err(Error::Precondition(format!(
            "correspondence needs an integral, proper, centered map (integral={}, proper={}, centered={})",
            class.integral, class.proper, class.centered
        )));
    }
    let cycles = find_cycles(h, opts.range.clone(), opts.max_steps, opts.escape_bound);
    let zero_cycle = vec![BigInt::zero()];
    let mut certificates = Vec::new();
    let mut special = Vec::new();
    for c in &cycles {
        if c == &zero_cycle {
            special.push(c.clone());
        } else {
            certificates.push(certify_cycle(h, c, preferred)?);
        }
    }
    let known: HashSet<BigInt> = cycles.iter().flatten().cloned().collect();
    let reverse = scan_strings(h, preferred, opts.max_len, &known)?;
    Ok(CorrespondenceReport { cycles, certificates, special, reverse })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassLabel {
    Cycle(Vec<BigInt>),
    Escaped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitClass {
    pub label: ClassLabel,
    pub members: Vec<i64>,
}

/// Partitions `window` by intersection of bounded forward orbits.
pub fn orbit_class_partition(
    h: &HydraMap,
    window: RangeInclusive<i64>,
    max_steps: usize,
    escape_bound: f64,
) -> Vec<OrbitClass> {
    let starts: Vec<i64> = window.collect();
    let mut uf = UnionFind::<usize>::new(starts.len());
    let mut owner: HashMap<BigInt, usize> = HashMap::new();
    let mut cycle_of: Vec<Option<Vec<BigInt>>> = Vec::with_capacity(starts.len());
    for (i, &x) in starts.iter().enumerate() {
        let rep = orbit(h, &BigInt::from(x), max_steps, escape_bound);
        for v in rep.tail.iter().chain(&rep.cycle) {
            match owner.get(v) {
                Some(&o) => {
                    uf.union(i, o);
                }
                None => {
                    owner.insert(v.clone(), i);
                }
            }
        }
        cycle_of.push((!rep.cycle.is_empty()).then_some(rep.cycle));
    }
    let mut groups: HashMap<usize, OrbitClass> = HashMap::new();
    for (i, &x) in starts.iter().enumerate() {
        let class = groups
            .entry(uf.find(i))
            .or_insert(OrbitClass { label: ClassLabel::Escaped, members: Vec::new() });
        class.members.push(x);
        if let Some(c) = &cycle_of[i] {
            class.label = ClassLabel::Cycle(c.clone());
        }
    }
    let mut out: Vec<OrbitClass> = groups.into_values().collect();
    out.sort_by_key(|c| c.members[0]);
    out
}
