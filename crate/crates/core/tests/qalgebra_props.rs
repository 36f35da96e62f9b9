mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::*;
use qlpa::intlinalg::{canonical_form, SkewMatrix};
use qlpa::qalgebra::{apply_derivation, factorization_data, transport, AlgebraElement, AlgebraKind, Presentation, QDerivation};
use qlpa::qscalar::{Scalar, ScalarMode};

fn mode_of(pick: u8) -> ScalarMode {
    match pick {
        0 => ScalarMode::Generic,
        1 => ScalarMode::Root(5),
        _ => ScalarMode::Root(12),
    }
}

/// `alpha^T H beta`, straight from the matrix.
fn bilinear(h: &SkewMatrix, a: &[i64], b: &[i64]) -> i64 {
    let n = h.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a[i] * i64::try_from(&h[(i, j)]).unwrap() * b[j])
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn normal_mul_associates(seed in any::<u64>(), n in 1usize..=4, laurent in any::<bool>(), pick in 0u8..3) {
        let mut rng = rng(seed);
        let kind = if laurent { AlgebraKind::Laurent } else { AlgebraKind::Polynomial };
        let pres = presentation(random_skew(&mut rng, n, 3), kind, mode_of(pick));
        let [f, g, h] = [0; 3].map(|_| random_element(&mut rng, &pres, 5, 3));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn transport_preserves_products(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = rng(seed);
        let h = random_skew(&mut rng, n, 3);
        let p = random_unimodular(&mut rng, n, 5);
        let target = presentation(h.clone(), AlgebraKind::Laurent, ScalarMode::Generic);
        let source = presentation(SkewMatrix::new(p.congruence(h.matrix()).unwrap()).unwrap(), AlgebraKind::Laurent, ScalarMode::Generic);
        let u = random_element(&mut rng, &source, 4, 3);
        let v = random_element(&mut rng, &source, 4, 3);
        let tu = transport(&p, &target, &u).unwrap();
        let tv = transport(&p, &target, &v).unwrap();
        prop_assert_eq!(transport(&p, &target, &(&u * &v)).unwrap(), &tu * &tv);
    }

    #[test]
    fn units_are_exactly_invertible_monomials(seed in any::<u64>(), laurent in any::<bool>(), pick in 0u8..3) {
        let mut rng = rng(seed);
        let kind = if laurent { AlgebraKind::Laurent } else { AlgebraKind::Polynomial };
        let pres = presentation(random_skew(&mut rng, 3, 3), kind, mode_of(pick));
        let f = if seed % 2 == 0 {
            let alpha = if seed % 4 == 0 { vec![0; 3] } else { random_exponent(&mut rng, &pres, 2) };
            AlgebraElement::monomial(&pres, alpha, nonzero_scalar(&mut rng, pres.mode())).unwrap()
        } else {
            random_element(&mut rng, &pres, 3, 2)
        };
        let expected = f.len() == 1 && (laurent || f.terms().all(|(a, _)| a.iter().all(|&e| e == 0)));
        prop_assert_eq!(f.is_unit(), expected);
        match f.inverse() {
            Some(g) => {
                prop_assert!(expected);
                prop_assert_eq!(f.normal_mul(&g).unwrap(), AlgebraElement::one(&pres));
                prop_assert_eq!(g.normal_mul(&f).unwrap(), AlgebraElement::one(&pres));
            }
            None => prop_assert!(!expected),
        }
    }

    #[test]
    fn torus_actions_are_multiplicative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let plane = Presentation::quantum_plane(AlgebraKind::Polynomial, ScalarMode::Generic);
        let f = random_element(&mut rng, &plane, 4, 4);
        let g = random_element(&mut rng, &plane, 4, 4);
        for tau in [QDerivation::TauX, QDerivation::TauY, QDerivation::TauXInv, QDerivation::TauYInv] {
            let lhs = apply_derivation(tau, &(&f * &g)).unwrap();
            let rhs = &apply_derivation(tau, &f).unwrap() * &apply_derivation(tau, &g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn twisted_leibniz_rules(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let plane = Presentation::quantum_plane(AlgebraKind::Polynomial, ScalarMode::Generic);
        let d = |w, f: &AlgebraElement| apply_derivation(w, f).unwrap();
        let f = random_element(&mut rng, &plane, 4, 4);
        let g = random_element(&mut rng, &plane, 4, 4);
        let fg = &f * &g;
        let dx = &(&d(QDerivation::Dx, &f) * &d(QDerivation::TauX, &g)) + &(&d(QDerivation::TauYInv, &f) * &d(QDerivation::Dx, &g));
        prop_assert_eq!(d(QDerivation::Dx, &fg), dx);
        let dy = &(&d(QDerivation::Dy, &f) * &d(QDerivation::TauY, &g)) + &(&d(QDerivation::TauX, &f) * &d(QDerivation::Dy, &g));
        prop_assert_eq!(d(QDerivation::Dy, &fg), dy);
    }

    #[test]
    fn factorization_data_pairs_are_orthogonal(seed in any::<u64>(), n in 1usize..=6) {
        let h = random_skew(&mut rng(seed), n, 6);
        let pres = presentation(h.clone(), AlgebraKind::Laurent, ScalarMode::Generic);
        let data = factorization_data(&pres).unwrap();
        let m = canonical_form(&h).m;
        prop_assert_eq!(data.pairs.len(), m.len());
        prop_assert_eq!(2 * data.pairs.len() + data.central.len(), n);
        let mut vectors: Vec<&Vec<i64>> = Vec::new();
        for (pair, mi) in data.pairs.iter().zip(&m) {
            prop_assert_eq!(BigInt::from(pair.twist), mi.clone());
            prop_assert_eq!(bilinear(&h, &pair.first, &pair.second), pair.twist);
            vectors.push(&pair.first);
            vectors.push(&pair.second);
        }
        vectors.extend(data.central.iter());
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                let same_pair = i / 2 == j / 2 && i < 2 * data.pairs.len() && j < 2 * data.pairs.len();
                if !same_pair {
                    prop_assert_eq!(bilinear(&h, a, b), 0, "vectors {} and {}", i, j);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn monomials_commute_up_to_the_form(seed in any::<u64>(), n in 1usize..=5, pick in 0u8..3) {
        let mut rng = rng(seed);
        let pres = presentation(random_skew(&mut rng, n, 4), AlgebraKind::Laurent, mode_of(pick));
        let a = random_exponent(&mut rng, &pres, 3);
        let b = random_exponent(&mut rng, &pres, 3);
        let one = Scalar::one(pres.mode());
        let xa = AlgebraElement::monomial(&pres, a.clone(), one.clone()).unwrap();
        let xb = AlgebraElement::monomial(&pres, b.clone(), one).unwrap();
        let swapped = (&xb * &xa).scale(&Scalar::q_pow(pres.mode(), bilinear(pres.h(), &a, &b)));
        prop_assert_eq!(&xa * &xb, swapped);
        prop_assert_eq!(pres.commutation_exponent(&a, &b).unwrap(), bilinear(pres.h(), &a, &b));
    }
}
