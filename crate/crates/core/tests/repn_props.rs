mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;
use qlpa::qalgebra::step_operators;
use qlpa::qscalar::{MonomialScalar, QRational, Scalar, ScalarMode};
use qlpa::repn::{
    construct_simple, iso_test, q_power_ratio, restriction_analysis, twist_descriptor, Letter, ModuleAction,
    ModuleVector, SimpleDescriptor, TwistedBasicModule,
};

const G: ScalarMode = ScalarMode::Generic;

fn monomial(rng: &mut ChaCha8Rng) -> MonomialScalar {
    let num = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    MonomialScalar { coeff: BigRational::new(num.into(), rng.gen_range(1..=3).into()), exp: rng.gen_range(-3..=3) }
}

fn coprime_pair(rng: &mut ChaCha8Rng) -> (i64, i64) {
    loop {
        let (a, b) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        if num_integer::gcd(a, b) == 1 {
            return (a, b);
        }
    }
}

fn sl2(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    let mut a = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(1..=6) {
        let k = rng.gen_range(-2..=2);
        let (i, j) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
        for c in 0..2 {
            a[i][c] += k * a[j][c];
        }
    }
    a
}

/// `x^a1 y^a2 t^m` from the letter formulas of the twisted module, written out.
fn closed_monomial(a_mat: [[i64; 2]; 2], c: &[Scalar; 2], alpha: [i64; 2], m: i64) -> ModuleVector {
    let [[a11, a12], [a21, a22]] = a_mat;
    let kappa = |e1: i64, e2: i64| c[0].pow(e1).unwrap().try_mul(&c[1].pow(e2).unwrap()).unwrap();
    let (kx, ky) = (kappa(a11, a21), kappa(a12, a22));
    // y^a2 first, one letter at a time
    let mut coeff = Scalar::one(G);
    let mut pos = m;
    for (e, k, exp, shift) in [(alpha[1], &ky, a12, a22), (alpha[0], &kx, a11, a21)] {
        for _ in 0..e.abs() {
            if e > 0 {
                coeff = &(&coeff * k) * &Scalar::q_pow(G, exp * (pos + shift));
                pos += shift;
            } else {
                pos -= shift;
                coeff = &(&coeff * &k.inv().unwrap()) * &Scalar::q_pow(G, -exp * (pos + shift));
            }
        }
    }
    ModuleVector::term(pos, coeff)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn spectral_ladder(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, b) = coprime_pair(&mut rng);
        let lambda = Scalar::Generic(monomial(&mut rng).to_qrational());
        let module = construct_simple(a, b, &lambda).unwrap();
        let k_exp = |m: i64| -> i64 {
            let v = module.k_action(m);
            let (m2, c) = v.single_term().unwrap();
            assert_eq!(m2, m);
            q_power_ratio(c, &lambda).unwrap()
        };
        let exps: Vec<i64> = (-20..=20).map(k_exp).collect();
        let mut sorted = exps.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), exps.len());
        prop_assert!(sorted.windows(2).all(|w| w[1] - w[0] == 1));
        let steps = step_operators(a, b, G).unwrap();
        for m in -15..=15 {
            let t = ModuleVector::basis(G, m);
            for (hat, shift) in [(&steps.yhat, 1), (&steps.xhat, -1)] {
                let v = module.act_element(hat, &t).unwrap();
                let (m2, _) = v.single_term().unwrap();
                prop_assert_eq!(k_exp(m2) - k_exp(m), shift, "({},{}) at t^{}", a, b, m);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn restriction_eigenvalue_matches_composition(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a_mat = loop {
            let a = sl2(&mut rng);
            if a[1][0] * a[1][1] < 0 {
                break a;
            }
        };
        let c = [Scalar::Generic(monomial(&mut rng).to_qrational()), Scalar::Generic(monomial(&mut rng).to_qrational())];
        let module = TwistedBasicModule::new(a_mat, c.clone()).unwrap();
        let report = restriction_analysis(&module).unwrap();
        prop_assert!(report.simple);
        let k = [a_mat[1][1].abs(), a_mat[1][0].abs()];
        prop_assert_eq!(closed_monomial(a_mat, &c, k, 0), ModuleVector::term(0, report.k_on_one.unwrap()));
        for m in -3..=3 {
            for alpha in [[1, 0], [0, 1], [-1, 2], [2, -1]] {
                prop_assert_eq!(module.act_monomial(alpha, &ModuleVector::basis(G, m)), closed_monomial(a_mat, &c, alpha, m));
            }
        }
    }

    #[test]
    fn iso_test_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let mut pick = || {
            let (a, b) = if rng.gen_bool(0.5) { (1, 2) } else { (2, 1) };
            let mut mono = monomial(&mut rng);
            mono.coeff = BigRational::from_integer(rng.gen_range(1..=2).into());
            SimpleDescriptor::new(a, b, mono).unwrap()
        };
        let (d1, d2, d3) = (pick(), pick(), pick());
        prop_assert!(iso_test(&d1, &d1));
        prop_assert_eq!(iso_test(&d1, &d2), iso_test(&d2, &d1));
        if iso_test(&d1, &d2) && iso_test(&d2, &d3) {
            prop_assert!(iso_test(&d1, &d3));
        }
    }

    #[test]
    fn twisting_back_is_the_identity(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, b) = coprime_pair(&mut rng);
        let d = SimpleDescriptor::new(a, b, monomial(&mut rng)).unwrap();
        let c = [monomial(&mut rng), monomial(&mut rng)];
        let inv = c.clone().map(|m| QRational::monomial(m.coeff, m.exp).inv().unwrap().as_monomial().unwrap());
        let there = twist_descriptor(&d, [&c[0], &c[1]]).unwrap();
        prop_assert!(iso_test(&twist_descriptor(&there, [&inv[0], &inv[1]]).unwrap(), &d));
    }

    #[test]
    fn non_simple_restrictions_have_invariant_half_lines(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a_mat = loop {
            let a = sl2(&mut rng);
            if a[1][0] * a[1][1] >= 0 {
                break a;
            }
        };
        let c = [Scalar::Generic(monomial(&mut rng).to_qrational()), Scalar::one(G)];
        let module = TwistedBasicModule::new(a_mat, c).unwrap();
        prop_assert!(!restriction_analysis(&module).unwrap().simple);
        let upward = a_mat[1][0] >= 0 && a_mat[1][1] >= 0;
        for m0 in -5..=5 {
            for m in -12..=12 {
                let inside = if upward { m >= m0 } else { m <= m0 };
                if !inside {
                    continue;
                }
                for letter in [Letter::X, Letter::Y] {
                    let v = module.act(letter, &ModuleVector::basis(G, m));
                    let stays = v.terms().all(|(k, _)| if upward { k >= m0 } else { k <= m0 });
                    prop_assert!(stays, "{:?} moves t^{} out of the half line at {}", letter, m, m0);
                }
            }
        }
    }
}
