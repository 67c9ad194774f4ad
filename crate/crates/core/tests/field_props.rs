use ehall_core::kfield::{alpha, equals_probabilistic, is_degenerate, specialize, FieldElem, LaurentPoly2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = LaurentPoly2> {
    prop::collection::vec(((-2i32..=2, -2i32..=2), -3i64..=3), 1..4)
        .prop_map(|ts| LaurentPoly2::from_terms(ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn elem() -> impl Strategy<Value = FieldElem> {
    (poly(), poly()).prop_map(|(n, d)| {
        if d.is_zero() {
            FieldElem::from_poly(n)
        } else {
            FieldElem::new(n, d).unwrap()
        }
    })
}

fn point() -> impl Strategy<Value = (BigRational, BigRational)> {
    ((-9i64..=9, 1i64..=5), (-9i64..=9, 1i64..=5))
        .prop_map(|((a, b), (c, d))| (BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into())))
        .prop_filter("nondegenerate", |(s, t)| !s.is_zero() && !t.is_zero() && !is_degenerate(s, t))
}

/// The product formula for alpha_i evaluated directly in Q.
fn alpha_at(i: i64, s: &BigRational, t: &BigRational) -> BigRational {
    let pw = |x: &BigRational, e: i64| if e >= 0 { num_traits::pow(x.clone(), e as usize) } else { num_traits::pow(x.recip(), (-e) as usize) };
    let one = BigRational::one();
    let q = s * t;
    (&one - pw(s, i)) * (&one - pw(t, i)) * (&one - pw(&q, -i)) / BigRational::from_integer(i.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(x in elem(), y in elem(), z in elem()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn alpha_specializes_to_the_product_formula(i in 1i64..=8, (s, t) in point()) {
        prop_assert_eq!(specialize(&alpha(i), &s, &t).unwrap(), alpha_at(i, &s, &t));
        prop_assert_eq!(specialize(&alpha(-i), &s, &t).unwrap(), alpha_at(-i, &s, &t));
    }

    #[test]
    fn probabilistic_equality_accepts_equal_inputs(x in elem(), y in elem(), seed in any::<u64>()) {
        // the same value written two ways
        let a = x.mul(&y).add(&x);
        let b = x.mul(&y.add(&FieldElem::one()));
        prop_assert_eq!(equals_probabilistic(&a, &b, 4, seed), Ok(true));
    }
}
