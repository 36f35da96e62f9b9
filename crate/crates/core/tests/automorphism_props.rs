mod common;

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;
use qlpa::automorphism::Automorphism;
use qlpa::intlinalg::q_membership;
use qlpa::qalgebra::{AlgebraElement, AlgebraKind};
use qlpa::qscalar::{Scalar, ScalarMode};

const FACTORS: [&[i64]; 3] = [&[1], &[2], &[1, 3]];

/// `c q^e` with small `c`, occasionally `1 + q`.
fn torus_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let text = match rng.gen_range(0..4) {
        0 => "1 + q".to_string(),
        _ => format!("{} q^{}", rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(-2..=2)),
    };
    Scalar::parse(ScalarMode::Generic, &text).unwrap()
}

/// An automorphism `tau_c tau_M` of `L_q[Lambda(m) + central]` with `M` in `Q(m, Z)`.
fn random_automorphism(rng: &mut ChaCha8Rng, pres: &std::sync::Arc<qlpa::qalgebra::Presentation>, m: &[i64], central: usize) -> Automorphism {
    let mat = random_q_member_with(rng, m, central, 0, 2);
    let c = (0..pres.n()).map(|_| torus_scalar(rng)).collect();
    Automorphism::new(pres, c, mat).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verification_matches_membership(seed in any::<u64>(), pick in 0usize..3, central in 0usize..=1, root in 0usize..5) {
        let m = FACTORS[pick];
        let mode = [ScalarMode::Generic, ScalarMode::Root(2), ScalarMode::Root(3), ScalarMode::Root(5), ScalarMode::Root(7)][root];
        if let ScalarMode::Root(l) = mode {
            prop_assume!(m.iter().all(|&x| x % l as i64 != 0));
        }
        let mut rng = rng(seed);
        let h = canonical_skew(m, central);
        let mat = if seed % 2 == 0 {
            random_unimodular(&mut rng, h.dim(), 4)
        } else {
            let scale = match mode { ScalarMode::Generic => 0, ScalarMode::Root(l) => l as i64 };
            random_q_member(&mut rng, m, central, scale)
        };
        let pres = presentation(h, AlgebraKind::Laurent, ScalarMode::Generic);
        let v = Automorphism::from_matrix(&pres, mat.clone()).unwrap().verify(mode).unwrap();
        let member = q_membership(&mat, &ints(m), mode).unwrap();
        prop_assert_eq!(v.is_automorphism, member);
        prop_assert_eq!(v.q_membership, Some(member));
    }

    #[test]
    fn composition_associates_and_matches_application(seed in any::<u64>(), pick in 0usize..3, central in 0usize..=1) {
        let m = FACTORS[pick];
        let mut rng = rng(seed);
        let pres = presentation(canonical_skew(m, central), AlgebraKind::Laurent, ScalarMode::Generic);
        let [s, t, u] = [0; 3].map(|_| random_automorphism(&mut rng, &pres, m, central));
        let st = s.compose(&t).unwrap();
        prop_assert_eq!(st.compose(&u).unwrap(), s.compose(&t.compose(&u).unwrap()).unwrap());
        for i in 0..pres.n() {
            let g = AlgebraElement::generator(&pres, i);
            prop_assert_eq!(st.apply(&g).unwrap(), s.apply(&t.apply(&g).unwrap()).unwrap());
        }
        let f = random_element(&mut rng, &pres, 3, 2);
        prop_assert_eq!(st.apply(&f).unwrap(), s.apply(&t.apply(&f).unwrap()).unwrap());
        prop_assert!(s.compose(&s.invert().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn torus_subgroup_is_normal(seed in any::<u64>(), pick in 0usize..3, central in 0usize..=1) {
        let m = FACTORS[pick];
        let mut rng = rng(seed);
        let pres = presentation(canonical_skew(m, central), AlgebraKind::Laurent, ScalarMode::Generic);
        let sigma = random_automorphism(&mut rng, &pres, m, central);
        prop_assert!(sigma.verify(ScalarMode::Generic).unwrap().is_automorphism);
        let c = (0..pres.n()).map(|_| torus_scalar(&mut rng)).collect();
        let torus = Automorphism::torus(&pres, c).unwrap();
        let conj = sigma.compose(&torus).unwrap().compose(&sigma.invert().unwrap()).unwrap();
        prop_assert!(conj.is_torus());
    }
}
