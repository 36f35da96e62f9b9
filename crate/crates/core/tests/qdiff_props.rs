mod common;

use num_integer::Integer;
use proptest::prelude::*;
use rand::Rng;

use common::*;
use qlpa::qdiff::{
    dq_quotient_module, factor_degree2, first_order_operator, monic_normalize, solve_first_order, solve_ramified,
    verify_annihilation, LaurentSeries, QDiffOperator,
};
use qlpa::qscalar::{QRational, Scalar};
use qlpa::repn::{construct_simple, restriction_analysis};

/// The lowest absolute order to which every coefficient of `p` is known.
fn known_below(p: &QDiffOperator) -> i64 {
    p.terms().filter_map(|(_, a)| a.prec()).min().unwrap_or(i64::MAX)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn operator_product_associates(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = 20;
        let [a, b, c] = [0; 3].map(|_| {
            let lo = rng.gen_range(-1..=1);
            let hi = lo + rng.gen_range(0..=3);
            random_operator(&mut rng, lo, hi, t)
        });
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        let bound = known_below(&left).min(known_below(&right));
        prop_assert!(bound > 0);
        prop_assert!(left.agrees_below(&right, bound));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn monic_normalization_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = 20;
        let lo = rng.gen_range(-2..=2);
        let hi = lo + rng.gen_range(0..=3);
        let p = random_operator(&mut rng, lo, hi, t);
        let norm = monic_normalize(&p, t).unwrap();
        let (mlo, mhi) = norm.monic.y_range().unwrap();
        prop_assert_eq!(mlo, 0);
        prop_assert_eq!(norm.monic.coeff(mhi).unwrap(), &LaurentSeries::one(1));
        prop_assert!(!norm.monic.coeff(0).unwrap().is_zero());
        let back = &norm.unit * &norm.monic;
        prop_assert!(back.agrees_below(&p, known_below(&back).min(known_below(&p))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn solver_outputs_verify(seed in any::<u64>(), n in 1i64..=3, k in -2i64..=2) {
        let mut rng = rng(seed);
        let t = 16;
        let mut a = random_series(&mut rng, 1, 4, t);
        a = &a + &LaurentSeries::constant(1, QRational::q_pow(-n * k));
        let sols = solve_first_order(n, &a, t).unwrap();
        prop_assert_eq!(sols.len(), 1);
        prop_assert_eq!(sols[0].k, k);
        let f = sols[0].series(t).unwrap();
        prop_assert!(verify_annihilation(&first_order_operator(n, &a), &f, t));
    }

    #[test]
    fn ramified_outputs_verify(seed in any::<u64>(), n in 2i64..=3, k in -3i64..=3) {
        prop_assume!(n.gcd(&k) == 1);
        let mut rng = rng(seed);
        let t = 12;
        let a = &random_series(&mut rng, 1, 3, t) + &LaurentSeries::constant(1, QRational::q_pow(k));
        let sol = solve_ramified(n, k, &a, t).unwrap();
        let f = sol.series(n * t).unwrap();
        let lifted = a.lift(n as u32).unwrap();
        prop_assert!(verify_annihilation(&first_order_operator(n, &lifted), &f, n * t));
    }

    #[test]
    fn factors_multiply_back(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = 12;
        let (va, vb) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let alpha = random_unit_series(&mut rng, va, 3, t);
        let beta = random_unit_series(&mut rng, vb, 3, t);
        let linear = |s: &LaurentSeries| QDiffOperator::from_terms(1, [(1, LaurentSeries::one(1)), (0, s.clone())]);
        let p = &linear(&alpha) * &linear(&beta);
        let found = factor_degree2(&p, (-2, 2), t).unwrap();
        for pair in &found.factorizations {
            prop_assert!(pair.product().agrees_below(&p, pair.checked_to));
        }
        // the planted factor is found unless its branch is undecided
        let planted = found.factorizations.iter().any(|f| (&f.alpha - &alpha).vanishes_below(f.checked_to));
        prop_assert!(planted || !found.markers.is_empty());
    }

    #[test]
    fn quotient_spectrum_matches_simple_modules(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, b) = loop {
            let (a, b) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            if a.gcd(&b) == 1 {
                break (a, b);
            }
        };
        let lambda = QRational::monomial(num_rational::BigRational::from_integer(rng.gen_range(1..=5).into()), rng.gen_range(-2..=2));
        let dq = dq_quotient_module(a, b, &lambda, 4, 24).unwrap();
        for e in &dq.spectrum {
            prop_assert_eq!(e.exponent, -e.i * b + e.beta * a);
        }
        prop_assert!(dq.exponents_distinct && dq.v_b_holds && dq.v_minus1_holds);
        prop_assert_eq!(dq.step_shifts.0.abs(), 1);
        prop_assert_eq!(dq.step_shifts.0, -dq.step_shifts.1);
        let simple = construct_simple(a, b, &Scalar::Generic(lambda)).unwrap();
        prop_assert_eq!(dq.descriptor, restriction_analysis(&simple).unwrap().descriptor);
    }
}

#[test]
fn two_way_operator_factors_in_two_ways() {
    let p = QDiffOperator::parse("y^2 - ((1-q^-1 x^2)/(1-x)) y + (x-q^-1 x^2)/(1-x)", 30).unwrap();
    let found = factor_degree2(&p, (-1, 1), 30).unwrap();
    assert!(found.factorizations.len() >= 2);
    assert_ne!(found.factorizations[0].alpha, found.factorizations[1].alpha);
}
