use hydra_numen::{
    abs_at_place, character_eval, digit_expansion, frac_part, residue_mod, vp_val, Frequency,
    Place, Rational, Valuation,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| Rational::frac(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// `n / d` with `gcd(d, p) = 1`.
fn p_integral(p: u64) -> impl Strategy<Value = Rational> {
    (-5_000i64..5_000, 1i64..2_000)
        .prop_filter("denominator prime to p", move |(_, d)| d.gcd(&(p as i64)) == 1)
        .prop_map(|(n, d)| Rational::frac(n, d))
}

fn place() -> impl Strategy<Value = Place> {
    prop_oneof![
        Just(Place::Finite(2)),
        Just(Place::Finite(3)),
        Just(Place::Finite(5)),
        Just(Place::Finite(7)),
        Just(Place::Archimedean),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn absolute_value_is_multiplicative(r in rational(), s in rational(), pl in place()) {
        prop_assert_eq!(abs_at_place(&(&r * &s), pl), &abs_at_place(&r, pl) * &abs_at_place(&s, pl));
    }

    #[test]
    fn ultrametric(r in rational(), s in rational(), q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let pl = Place::Finite(q);
        let (a, b) = (abs_at_place(&r, pl), abs_at_place(&s, pl));
        let sum = abs_at_place(&(&r + &s), pl);
        prop_assert!(sum <= a.clone().max(b.clone()));
        if a != b {
            prop_assert_eq!(sum, a.max(b));
        }
    }
}

proptest! {
    #[test]
    fn residues_are_compatible(r in p_integral(3), n in 0u32..12, m in 0u32..12) {
        let (m, n) = (m.min(n), m.max(n));
        let fine = residue_mod(&r, 3, n).unwrap();
        let coarse = residue_mod(&r, 3, m).unwrap();
        prop_assert_eq!(fine.mod_floor(&BigInt::from(3u64.pow(m))), coarse);
    }

    #[test]
    fn fractional_part_leaves_an_integer(x in nonzero_rational(), q in prop::sample::select(vec![2u64, 3, 5, 6, 10])) {
        let f = frac_part(&x, q).unwrap();
        prop_assert!(!f.is_negative() && f < Rational::one());
        for l in hydra_numen::arith::prime_factors(q) {
            let v = vp_val(&(&x - &f), l).unwrap();
            prop_assert!(v >= Valuation::Finite(0), "v_{}({} - {}) = {}", l, x, f, v);
        }
    }

    #[test]
    fn characters_are_homomorphisms(
        q in prop::sample::select(vec![2u64, 3, 5]),
        k in 0u64..1000,
        n in 0u32..=3,
        z1 in p_integral(5),
        z2 in p_integral(5),
    ) {
        // z1, z2 are only 5-integral; shift them to q-integral rationals by clearing q
        let clear = |z: &Rational| {
            let mut d = z.denom().clone();
            let bq = BigInt::from(q);
            while (&d % &bq).is_zero() {
                d /= &bq;
            }
            Rational::new(z.numer().clone(), d).unwrap()
        };
        let (a, b) = (clear(&z1), clear(&z2));
        let t = Frequency::new(k, q, n).unwrap();
        let lhs = character_eval(&t, &(&a + &b)).unwrap();
        let rhs = character_eval(&t, &a).unwrap().mul(&character_eval(&t, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn digit_expansions_round_trip(p in prop::sample::select(vec![2u64, 3, 5]), seed in (-5_000i64..5_000, 1i64..2_000)) {
        let (n, mut d) = seed;
        while d % p as i64 == 0 {
            d /= p as i64;
        }
        let r = Rational::frac(n, d);
        let e = digit_expansion(&r, p).unwrap();
        prop_assert_eq!(e.to_rational(), r.clone());
        for depth in [0usize, 1, 7, 20] {
            let t = e.truncate(depth);
            prop_assert_eq!(t.value(), residue_mod(&r, p, depth as u32).unwrap());
        }
    }
}

#[test]
fn frequency_lattice_sizes() {
    for (q, n) in [(2u64, 5u32), (3, 3), (5, 2), (7, 1)] {
        let all = Frequency::enumerate(q, n).unwrap();
        assert_eq!(all.len() as u64, q.pow(n));
        assert!(all.iter().all(|t| t.level() <= n));
    }
}
