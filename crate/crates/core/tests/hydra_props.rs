use hydra_numen::dynamics::{cycle_string, find_cycles, orbit, orbit_class_partition, OrbitStatus};
use hydra_numen::numen::{b_p, convergence_report, xh_nat_u64, xh_rational_exact, xh_trunc, Guarantee};
use hydra_numen::arith::shift_theta_rational;
use hydra_numen::strings::compose_string;
use hydra_numen::{
    digit_expansion, vp_val, DigitString, HydraMap, PAdicTrunc, Place, Rational,
    RationalDigitExpansion, Valuation,
};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;

fn t3() -> HydraMap {
    HydraMap::build(
        2,
        &[(Rational::frac(1, 2), Rational::zero()), (Rational::frac(3, 2), Rational::frac(1, 2))],
    )
    .unwrap()
}

fn t5() -> HydraMap {
    HydraMap::build(
        2,
        &[(Rational::frac(1, 2), Rational::zero()), (Rational::frac(5, 2), Rational::frac(1, 2))],
    )
    .unwrap()
}

/// Integral maps `r_j = a_j / p`, `c_j = m_j - a_j j / p` with `gcd(a_j, p) = 1`.
fn integral_map() -> impl Strategy<Value = HydraMap> {
    prop::sample::select(vec![2u64, 3, 5])
        .prop_flat_map(|p| {
            let a = (-9i64..=9).prop_filter("unit", move |a| a.gcd(&(p as i64)) == 1);
            (Just(p), prop::collection::vec((a, -3i64..=3), p as usize), any::<bool>())
        })
        .prop_map(|(p, coeffs, centered)| {
            let specs: Vec<(Rational, Rational)> = coeffs
                .iter()
                .enumerate()
                .map(|(j, &(a, m))| {
                    let m = if j == 0 && centered { 0 } else { m };
                    (Rational::frac(a, p as i64), Rational::frac(m * p as i64 - a * j as i64, p as i64))
                })
                .collect();
            HydraMap::build(p, &specs).unwrap()
        })
}

fn string(p: u64, max_len: usize) -> impl Strategy<Value = DigitString> {
    prop::collection::vec(0..p as u32, 0..=max_len)
        .prop_map(move |d| DigitString::new(p, d).unwrap())
}

fn map_with_strings() -> impl Strategy<Value = (HydraMap, DigitString, DigitString)> {
    integral_map().prop_flat_map(|h| {
        let p = h.p();
        (Just(h), string(p, 10), string(p, 10))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn composition_is_a_homomorphism((h, i, j) in map_with_strings()) {
        let ij = i.concat(&j).unwrap();
        let (hi, hj, hij) = (compose_string(&h, &i).unwrap(), compose_string(&h, &j).unwrap(), compose_string(&h, &ij).unwrap());
        prop_assert_eq!(&hij.m, &(&hi.m * &hj.m));
        prop_assert_eq!(&hij.x, &hi.apply(&hj.x));
        prop_assert_eq!(hij, hi.compose(&hj));
    }
}

proptest! {
    #[test]
    fn trailing_zeros_do_not_move_x((h, j, _) in map_with_strings(), k in 0usize..6) {
        prop_assume!(h.is_centered());
        let padded = j.concat(&DigitString::new(h.p(), vec![0; k]).unwrap()).unwrap();
        prop_assert_eq!(compose_string(&h, &padded).unwrap().x, compose_string(&h, &j).unwrap().x);
    }

    #[test]
    fn generated_maps_are_integral(h in integral_map()) {
        prop_assert!(h.is_integral());
        for z in -60i64..=60 {
            let zr = Rational::from(z);
            for j in 0..h.p() as usize {
                let image = h.apply_branch(j, &zr);
                prop_assert_eq!(image.is_integer(), z.mod_floor(&(h.p() as i64)) == j as i64);
            }
        }
    }

    #[test]
    fn convergence_guarantee_matches_norms(h in integral_map(), q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        for place in [Place::Finite(q), Place::Archimedean] {
            let rep = convergence_report(&h, place);
            let expected = match (rep.rho.cmp_one().is_lt(), rep.max_branch_norm.cmp_one().is_lt()) {
                (true, true) => Guarantee::UniformContinuous,
                (true, false) => Guarantee::AlmostEverywhere,
                (false, _) => Guarantee::NoGuarantee,
            };
            prop_assert_eq!(rep.guarantee, expected);
        }
    }

    #[test]
    fn shift_identity_at_periodic_points(pre in prop::collection::vec(0u32..2, 0..5), per in prop::collection::vec(0u32..2, 1..6)) {
        prop_assume!(per.contains(&1));
        let h = t3();
        let z = RationalDigitExpansion::new(2, pre, per).unwrap();
        let place = Place::Finite(3);
        let x = xh_rational_exact(&h, &z, place).unwrap();
        let d0 = z.digit(0) as usize;
        let shifted = digit_expansion(&shift_theta_rational(&z.to_rational(), 2).unwrap(), 2).unwrap();
        prop_assert_eq!(x, h.apply_branch(d0, &xh_rational_exact(&h, &shifted, place).unwrap()));
    }

    #[test]
    fn orbits_split_into_tail_and_cycle(h in integral_map(), start in -200i64..=200) {
        let rep = orbit(&h, &BigInt::from(start), 400, 1e12);
        let mut seq = rep.tail.clone();
        match &rep.status {
            OrbitStatus::Escaped { .. } => prop_assert!(rep.cycle.is_empty()),
            status => {
                let entry = rep.entry.clone().unwrap();
                let at = rep.cycle.iter().position(|c| *c == entry).unwrap();
                let mut rotated = rep.cycle.clone();
                rotated.rotate_left(at);
                prop_assert_eq!(rep.cycle.iter().min(), rep.cycle.first());
                prop_assert_eq!(*status == OrbitStatus::Periodic, rep.tail.is_empty());
                seq.extend(rotated);
                seq.push(entry);
            }
        }
        prop_assert_eq!(&seq[0], &BigInt::from(start));
        for w in seq.windows(2) {
            prop_assert_eq!(h.apply(&w[0]), w[1].clone());
        }
    }

    #[test]
    fn census_cycles_close(h in integral_map()) {
        for c in find_cycles(&h, -40..=40, 300, 1e9) {
            for (i, v) in c.iter().enumerate() {
                prop_assert_eq!(h.apply(v), c[(i + 1) % c.len()].clone());
            }
            let j = cycle_string(&h, &c).unwrap();
            let hj = compose_string(&h, &j).unwrap();
            prop_assert_eq!(hj.apply(&Rational::from(c[0].clone())), Rational::from(c[0].clone()));
        }
    }

    #[test]
    fn orbit_classes_partition_the_window(h in integral_map(), lo in -50i64..0, width in 1i64..60) {
        let window = lo..=lo + width;
        let classes = orbit_class_partition(&h, window.clone(), 300, 1e9);
        let mut all: Vec<i64> = classes.iter().flat_map(|c| c.members.iter().copied()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, window.collect::<Vec<_>>());
    }
}

#[test]
fn truncation_agrees_with_digit_recursion() {
    for h in [t3(), t5()] {
        for depth in 1..=12usize {
            for n in 0..1u64 << depth {
                let z = PAdicTrunc::from_u64(n, 2, depth).unwrap();
                assert_eq!(xh_trunc(&h, &z).unwrap(), xh_nat_u64(&h, n).unwrap(), "n = {n}, N = {depth}");
            }
        }
    }
}

#[test]
fn t3_and_t5_branches_fire_on_their_own_class() {
    for h in [t3(), t5()] {
        for z in -500i64..=500 {
            let zr = Rational::from(z);
            for j in 0..2 {
                assert_eq!(h.apply_branch(j, &zr).is_integer(), z.rem_euclid(2) == j as i64, "z = {z}, j = {j}");
            }
        }
    }
}

#[test]
fn b_p_digits_repeat_forever() {
    for p in [2u64, 3] {
        for n in 1..729u64 {
            let (z, lambda) = b_p(&BigUint::from(n), p).unwrap();
            let e = digit_expansion(&z, p).unwrap();
            let digits = DigitString::digits_of(&BigUint::from(n), p).unwrap();
            assert!(e.preperiod().is_empty(), "B_{p}({n})");
            assert_eq!(lambda as usize % e.period().len(), 0);
            let unrolled: Vec<u32> = e.digits().take(lambda as usize).collect();
            assert_eq!(unrolled, digits.entries(), "B_{p}({n})");
        }
    }
}

#[test]
fn minus_one_third_is_three_adically_cauchy() {
    let h = t3();
    let z = Rational::frac(-1, 3);
    let e = digit_expansion(&z, 2).unwrap();
    let exact = xh_rational_exact(&h, &e, Place::Finite(3)).unwrap();
    let mut ones = 0i64;
    let mut last = Valuation::Finite(i64::MIN);
    for depth in 1..=60usize {
        ones += e.digit(depth - 1) as i64;
        let v = vp_val(&(xh_trunc(&h, &e.truncate(depth)).unwrap() - &exact), 3).unwrap();
        assert!(v >= Valuation::Finite(ones), "depth {depth}: v = {v}, ones = {ones}");
        assert!(v >= last);
        last = v;
    }
}

#[test]
fn reverse_scan_hits_only_discovered_cycles() {
    use hydra_numen::dynamics::{correspondence_roundtrip, CorrespondenceOptions};
    for h in [t3(), t5()] {
        let opts = CorrespondenceOptions { range: -200..=200, max_len: 10, ..Default::default() };
        let rep = correspondence_roundtrip(&h, None, &opts).unwrap();
        assert!(rep.certificates.iter().all(|c| c.verified), "{:?}", rep.certificates);
        assert!(rep.reverse.unmatched.is_empty(), "{:?}", rep.reverse.unmatched);
        let members: std::collections::BTreeSet<BigInt> =
            rep.cycles.iter().chain(&rep.special).flatten().cloned().collect();
        assert!(rep.reverse.integer_values.is_subset(&members));
    }
}
