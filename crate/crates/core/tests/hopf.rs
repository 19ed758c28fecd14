use proptest::prelude::*;
use qlevy::algebra::{equals_exact, AlgElt, Ctx, Equality, GenSym, QCoeff, QPoint};
use qlevy::gauss::{gaussian_functional, GaussParams};
use qlevy::hopf::{counit_exact, directions, eps_prime_exact, proj_p, Functional, Morphism};

fn arb_word(c: Ctx, max_deg: usize) -> impl Strategy<Value = Vec<GenSym>> {
    prop::collection::vec(prop::sample::select(c.generators(true)), 0..=max_deg)
}

fn arb_elt(c: Ctx, max_deg: usize) -> impl Strategy<Value = AlgElt> {
    prop::collection::vec((arb_word(c, max_deg), -4i64..=4, -1i32..=1), 1..=3).prop_map(move |ts| {
        AlgElt::from_terms(c, ts.into_iter().map(|(w, a, e)| (w, QCoeff::from_int(a) * QCoeff::q_pow(e))))
    })
}

fn gauss3() -> Functional {
    let g = GaussParams { r: vec![0.5, -0.25], rr: vec![vec![2.0, 0.5], vec![0.5, 1.0]] };
    gaussian_functional(Ctx::suq(3), QPoint::half(), &g).unwrap()
}

#[test]
fn morphisms_respect_relations() {
    for m in [Morphism::s(3), Morphism::s_chain(2, 4), Morphism::t(2), Morphism::t_breve(2), Morphism::torus(3)] {
        let m = m.unwrap();
        assert!(m.verify().unwrap() > 0);
    }
}

#[test]
fn counit_is_neutral_for_convolution() {
    let c = Ctx::suq(2);
    let psi = gaussian_functional(c, QPoint::half(), &GaussParams { r: vec![0.3], rr: vec![vec![1.5]] }).unwrap();
    let eps = Functional::counit(c, QPoint::half());
    let l = eps.convolve(&psi).unwrap();
    let r = psi.convolve(&eps).unwrap();
    for w in qlevy::hopf::battery::words_up_to(&c.generators(true), 3) {
        let v = psi.eval_word(&w);
        assert!((l.eval_word(&w) - v).norm() < 1e-12);
        assert!((r.eval_word(&w) - v).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn functionals_are_linear(a in arb_elt(Ctx::suq(3), 3), b in arb_elt(Ctx::suq(3), 3), l in -3i64..3) {
        let psi = gauss3();
        let lhs = psi.eval(&(&a + &b.scale(&QCoeff::from_int(l))));
        let rhs = psi.eval(&a) + psi.eval(&b) * l as f64;
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn counit_is_multiplicative(a in arb_elt(Ctx::suq(3), 3), b in arb_elt(Ctx::suq(3), 3)) {
        prop_assert_eq!(counit_exact(&(&a * &b)), counit_exact(&a) * counit_exact(&b));
    }

    #[test]
    fn drift_is_a_derivation(a in arb_elt(Ctx::suq(3), 3), b in arb_elt(Ctx::suq(3), 3), j in 2usize..=3) {
        let lhs = eps_prime_exact(&(&a * &b), j).unwrap();
        let rhs = eps_prime_exact(&a, j).unwrap() * counit_exact(&b) + counit_exact(&a) * eps_prime_exact(&b, j).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projection_lands_in_k2(a in arb_elt(Ctx::suq(3), 3)) {
        let c = a.ctx();
        let p = proj_p(&a);
        prop_assert!(counit_exact(&p).is_zero());
        for j in directions(c) {
            prop_assert!(eps_prime_exact(&p, j).unwrap().is_zero());
        }
    }

    #[test]
    fn projection_commutes_with_s(a in arb_elt(Ctx::suq(3), 3)) {
        let s = Morphism::s(3).unwrap();
        let lhs = proj_p(&s.apply(&a).unwrap());
        let rhs = s.apply(&proj_p(&a)).unwrap();
        prop_assert_eq!(equals_exact(&lhs, &rhs).unwrap(), Equality::Equal);
    }
}
