use gradlab_core::field::{rat, FieldElement};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = FieldElement> {
    let coeff = (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d));
    [coeff.clone(), coeff.clone(), coeff.clone(), coeff]
        .prop_map(|[a, b, c, d]| FieldElement::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ring_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &FieldElement::zero(), a.clone());
        prop_assert_eq!(&a * &FieldElement::one(), a.clone());
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a + &(-&a), FieldElement::zero());
    }

    #[test]
    fn inverses(a in element()) {
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert_eq!(&(&a / &a), &FieldElement::one());
        }
    }

    #[test]
    fn conjugation_is_a_ring_automorphism(a in element(), b in element()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn string_round_trip(a in element()) {
        prop_assert_eq!(FieldElement::from_strings(&a.to_strings()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<FieldElement>(&json).unwrap(), a);
    }

    #[test]
    fn powers(a in element(), m in -4i64..=4, n in -4i64..=4) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(&a.pow(m).unwrap() * &a.pow(n).unwrap(), a.pow(m + n).unwrap());
    }
}

#[test]
fn roots_of_unity() {
    let z = FieldElement::zeta();
    assert!(z.pow(12).unwrap().is_one());
    assert!(!z.pow(6).unwrap().is_one());
    assert!(!z.pow(4).unwrap().is_one());
    assert_eq!(FieldElement::i().root_of_unity_order(), Some(4));
    assert_eq!(FieldElement::omega().root_of_unity_order(), Some(3));
    assert_eq!(&FieldElement::omega() * &FieldElement::omega(), FieldElement::omega().conj());
    assert_eq!(FieldElement::from_int(2).root_of_unity_order(), None);
    for k in 0..12 {
        assert_eq!(FieldElement::zeta_pow(k).zeta_exponent(), Some(k as u32));
    }
    let one = FieldElement::one();
    let w = FieldElement::omega();
    assert!((&(&one + &w) + &(&w * &w)).is_zero());
}

#[test]
fn logarithms() {
    let two = rat(2, 1);
    assert_eq!(FieldElement::from_ratio(1, 4).log_base(&two), Some(-2));
    assert_eq!(FieldElement::from_int(8).log_base(&two), Some(3));
    assert_eq!(FieldElement::from_int(3).log_base(&two), None);
    assert_eq!(FieldElement::i().log_base(&two), None);
}

#[test]
fn division_by_zero() {
    assert!(FieldElement::zero().inv().is_err());
    assert!(FieldElement::zero().pow(-1).is_err());
}
