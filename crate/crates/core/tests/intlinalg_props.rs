mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use common::*;
use qlpa::intlinalg::{canonical_form, pfaffian, q_membership, SkewMatrix};
use qlpa::qscalar::ScalarMode;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn canonical_form_back_multiplies(seed in any::<u64>(), n in 1usize..=8) {
        let h = random_skew(&mut rng(seed), n, 9);
        let cd = canonical_form(&h);
        let whwt = cd.w.transpose().congruence(h.matrix()).unwrap();
        let block = cd.canonical_matrix();
        prop_assert_eq!(&whwt, block.matrix());
        prop_assert!(oracle_det(&cd.w).abs().is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pfaffian_scales_by_det_under_congruence(seed in any::<u64>(), half in 1usize..=4) {
        let mut rng = rng(seed);
        let n = 2 * half;
        let h = random_skew(&mut rng, n, 9);
        let a = random_unimodular(&mut rng, n, 6);
        let moved = SkewMatrix::new(a.congruence(h.matrix()).unwrap()).unwrap();
        let pf = pfaffian(&h).unwrap();
        prop_assert_eq!(pfaffian(&moved).unwrap(), oracle_det(&a) * &pf);
        prop_assert_eq!(&pf * &pf, oracle_det(h.matrix()));
    }

    #[test]
    fn q_ell_is_closed_under_products_and_inverses(seed in any::<u64>(), pick in 0usize..6, central in 0usize..=2) {
        let (m, ell): (&[i64], u32) = [(&[1][..], 3), (&[1][..], 5), (&[2][..], 3), (&[1, 3][..], 5), (&[1, 1][..], 7), (&[2][..], 5)][pick];
        let mut rng = rng(seed);
        let mode = ScalarMode::Root(ell);
        let factors = ints(m);
        let a = random_q_member(&mut rng, m, central, ell as i64);
        let b = random_q_member(&mut rng, m, central, ell as i64);
        prop_assert!(q_membership(&a, &factors, mode).unwrap());
        prop_assert!(q_membership(&b, &factors, mode).unwrap());
        prop_assert!(q_membership(&a.mul(&b).unwrap(), &factors, mode).unwrap());
        prop_assert!(q_membership(&a.inverse_unimodular().unwrap(), &factors, mode).unwrap());
    }

    #[test]
    fn q_is_closed_under_products_and_inverses(seed in any::<u64>(), pick in 0usize..3, central in 0usize..=2) {
        let m: &[i64] = [&[1][..], &[2][..], &[1, 3][..]][pick];
        let mut rng = rng(seed);
        let factors = ints(m);
        let a = random_q_member(&mut rng, m, central, 0);
        let b = random_q_member(&mut rng, m, central, 0);
        let g = ScalarMode::Generic;
        prop_assert!(q_membership(&a.mul(&b).unwrap(), &factors, g).unwrap());
        prop_assert!(q_membership(&a.inverse_unimodular().unwrap(), &factors, g).unwrap());
        prop_assert_eq!(oracle_det(&a.block(0..2 * m.len(), 0..2 * m.len())), BigInt::one());
    }
}
