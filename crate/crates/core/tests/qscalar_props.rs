use proptest::prelude::*;

use qlpa::qscalar::{cyclotomic, qint, QLaurent, QRational, Scalar, ScalarMode};

fn laurent() -> impl Strategy<Value = QLaurent> {
    (-3i64..=3, prop::collection::vec(-4i64..=4, 1..4)).prop_map(|(low, c)| QLaurent::from_int_coeffs(low, &c))
}

fn qrational() -> impl Strategy<Value = QRational> {
    (laurent(), laurent()).prop_map(|(n, d)| {
        if d.is_zero() {
            QRational::from(n)
        } else {
            QRational::new(n, d).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_and_multiplication_associate(a in qrational(), b in qrational(), c in qrational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in qrational(), b in qrational(), c in qrational()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_elements_invert(a in qrational()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(&a / &a), &QRational::one());
    }

    #[test]
    fn text_form_round_trips(a in qrational()) {
        prop_assert_eq!(QRational::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn qint_is_additive(m in -10i64..=10, n in -10i64..=10) {
        let rhs = &qint(m) + &(&QLaurent::q_pow(m) * &qint(n));
        prop_assert_eq!(qint(m + n), rhs);
    }
}

#[test]
fn cyclotomic_polynomials_divide_q_to_the_ell_minus_one() {
    for ell in 1..=30u32 {
        let q_ell_minus_one = &QLaurent::q_pow(ell as i64) - &QLaurent::one();
        assert!(q_ell_minus_one.div_exact(&cyclotomic(ell)).is_some(), "ell = {ell}");
        // q^ell - 1 is the product of Phi_d over the divisors d of ell
        let product = (1..=ell).filter(|d| ell % d == 0).fold(QLaurent::one(), |acc, d| &acc * &cyclotomic(d));
        assert_eq!(product, q_ell_minus_one, "ell = {ell}");
    }
}

#[test]
fn q_has_exact_order_ell_at_a_root() {
    for ell in 1..=30u32 {
        let mode = ScalarMode::Root(ell);
        assert!(Scalar::q_pow(mode, ell as i64).is_one(), "ell = {ell}");
        for k in 1..ell as i64 {
            assert!(!Scalar::q_pow(mode, k).is_one(), "q^{k} = 1 at ell = {ell}");
        }
    }
}
