use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qseries::LaurentSeries;

fn integral(min_lo: i64, min_hi: i64, len: std::ops::Range<usize>) -> impl Strategy<Value = LaurentSeries> {
    (min_lo..=min_hi, prop::collection::vec(-60i64..=60, len))
        .prop_map(|(e, c)| LaurentSeries::from_i64s(e, e + c.len() as i64, &c))
}

/// Series with a rational denominator.
fn rational() -> impl Strategy<Value = LaurentSeries> {
    (integral(-3, 3, 64..80), 1i64..=12)
        .prop_map(|(s, d)| s.scale(&BigRational::new(1.into(), d.into())))
}

/// Nonzero leading coefficient at `min_exp`.
fn invertible() -> impl Strategy<Value = LaurentSeries> {
    (integral(-3, 3, 64..80), prop_oneof![Just(1i64), Just(-1), -5i64..=5])
        .prop_map(|(s, lead)| {
            let lead = if lead == 0 { 2 } else { lead };
            let mut c = s.numerators().to_vec();
            c[0] = BigInt::from(lead);
            LaurentSeries::from_integers(s.min_exp(), s.prec(), c)
        })
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(100)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_axioms(a in rational(), b in rational(), c in integral(-3, 3, 64..80)) {
        prop_assert!((&(&a + &b) + &c).agrees_with(&(&a + &(&b + &c))));
        prop_assert!((&a * &b).agrees_with(&(&b * &a)));
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).valuation().is_none());
    }

    #[test]
    fn inverse(a in invertible()) {
        let inv = a.inv().unwrap();
        prop_assert_eq!(inv.min_exp(), -a.min_exp());
        let one = LaurentSeries::one(inv.prec() + a.min_exp());
        prop_assert!((&a * &inv).agrees_with(&one));
    }

    #[test]
    fn powers_add(a in invertible(), n in -3i64..=3, m in -3i64..=3) {
        let lhs = a.pow(n + m).unwrap();
        let rhs = &a.pow(n).unwrap() * &a.pow(m).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn u3_is_linear(a in integral(-6, 6, 200..220), b in integral(-6, 6, 200..220), c in -20i64..=20) {
        let lhs = (&a + &b.scale_int(c)).u3();
        let rhs = &a.u3() + &b.u3().scale_int(c);
        prop_assert!(lhs.prec() >= 64);
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn u3_pulls_out_cubes(a in integral(-6, 6, 200..220), b in rational()) {
        let lhs = (&a * &b.subst_power(3)).u3();
        let rhs = &a.u3() * &b;
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn dissection_reconstructs(a in rational(), m in 2i64..=6) {
        let mut sum = LaurentSeries::zero_from(a.min_exp(), a.prec());
        for r in 0..m {
            sum = &sum + &a.dissect(m, r).subst_power(m).shift(r);
        }
        prop_assert_eq!(sum.prec(), a.prec());
        prop_assert!(sum.agrees_with(&a));
    }

    #[test]
    fn substitution_is_a_homomorphism(a in rational(), b in rational(), k in 1i64..=5) {
        let lhs = (&a * &b).subst_power(k);
        let rhs = &a.subst_power(k) * &b.subst_power(k);
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert!(a.negate_q().negate_q().agrees_with(&a));
    }

    #[test]
    fn decimal_round_trip(a in rational()) {
        let back = LaurentSeries::from_decimal_strings(a.min_exp(), a.prec(), &a.to_decimal_strings()).unwrap();
        prop_assert!(back.agrees_with(&a));
        prop_assert_eq!(back.prec(), a.prec());
    }

    #[test]
    fn binomial_updates_match_products(a in rational(), c in -3i64..=3, k in 1i64..=9) {
        let factor = LaurentSeries::from_terms(0, a.prec() - a.min_exp().min(0), &[(0, 1), (k, c)]);
        let mut m = a.clone();
        m.mul_one_plus(c, k);
        prop_assert!(m.agrees_with(&(&a * &factor)));
        m.div_one_plus(c, k);
        prop_assert!(m.agrees_with(&a));
    }
}

#[test]
fn large_products_take_the_packed_path() {
    let n = 3000;
    let a = LaurentSeries::from_integers(0, n, (0..n).map(|i| BigInt::from(i * i - 7 * i + 1) << 100).collect());
    let b = LaurentSeries::from_integers(0, n, (0..n).map(|i| BigInt::from(3 - i)).collect());
    let p = &a * &b;
    for e in [0, 1, 17, n - 1] {
        let direct: BigInt = (0..=e).map(|i| a.integer_coeff(i).unwrap() * b.integer_coeff(e - i).unwrap()).sum();
        assert_eq!(p.integer_coeff(e).unwrap(), direct);
    }
}
