use proptest::prelude::*;
use qlevy::algebra::{
    adjoint_expand, equals_exact, inversions, normal_form, normal_form_with, permutations, quantum_determinant,
    quantum_minor, reduce, relation_catalog, twisted_determinant, AlgElt, Ctx, Equality, GenSym, QCoeff, Strategy as Rw,
};
use qlevy::hopf::kernel::{k2_sum, staircase_witness};
use qlevy::hopf::structure::d_one;
use qlevy::hopf::basis_extension;

fn u(c: Ctx, j: usize, k: usize) -> AlgElt {
    AlgElt::u(c, j, k)
}

#[test]
fn catalogs_reduce_to_zero() {
    for c in [Ctx::mq(2), Ctx::mq(3), Ctx::suq(2), Ctx::suq(3), Ctx::uq(2)] {
        for r in relation_catalog(c) {
            assert!(reduce(&r.elt).unwrap().is_zero(), "{:?} {}", c, r.name);
        }
    }
}

#[test]
fn twisted_determinants_s3() {
    let c = Ctx::suq(3);
    for tau in permutations(3) {
        let t = twisted_determinant(c, &tau).unwrap();
        let want = AlgElt::scalar(c, QCoeff::neg_q_pow(inversions(&tau) as i32));
        assert!(reduce(&(t - want)).unwrap().is_zero(), "{:?}", tau);
    }
}

#[test]
fn determinant_shapes() {
    let c = Ctx::mq(2);
    let d = quantum_determinant(c);
    assert_eq!(d, u(c, 1, 1) * u(c, 2, 2) - (u(c, 1, 2) * u(c, 2, 1)).scale(&QCoeff::q_pow(1)));
    assert_eq!(quantum_minor(c, 1, 1).unwrap(), u(c, 2, 2));
    let id = twisted_determinant(c, &[0, 1]).unwrap();
    assert!(reduce(&(id - d)).unwrap().is_zero());
    assert_eq!(quantum_determinant(Ctx::mq(3)).len(), 6);
}

// (1 - q) u_jk = q (u_ll - 1) u_jk - u_jk (u_ll - 1), l = max(j, k)
#[test]
fn kernel_identity_offdiagonal() {
    for n in 2..=3 {
        let c = Ctx::suq(n);
        for j in 1..=n {
            for k in 1..=n {
                if j == k {
                    continue;
                }
                let l = j.max(k);
                let ul = u(c, l, l) - AlgElt::one(c);
                let lhs = u(c, j, k).scale(&(QCoeff::one() - QCoeff::q_pow(1)));
                let rhs = (&ul * &u(c, j, k)).scale(&QCoeff::q_pow(1)) - &u(c, j, k) * &ul;
                assert!(reduce(&(lhs - rhs)).unwrap().is_zero(), "u[{},{}]", j, k);
            }
        }
    }
}

// 1 - u_jj u*_jj = sum_{p != j} u_jp u*_jp
#[test]
fn kernel_identity_rows() {
    for n in 2..=3 {
        let c = Ctx::suq(n);
        for j in 1..=n {
            let mut x = AlgElt::one(c) - u(c, j, j) * AlgElt::us(c, j, j);
            for p in (1..=n).filter(|&p| p != j) {
                x = x - u(c, j, p) * AlgElt::us(c, j, p);
            }
            assert!(reduce(&x).unwrap().is_zero());
        }
    }
}

// d_1 + ... + d_N lies in K_2 through the staircase expansion
#[test]
fn kernel_identity_staircase() {
    for n in 2..=3 {
        let c = Ctx::suq(n);
        let mut sum = d_one(c);
        for d in basis_extension(c) {
            sum = sum + d;
        }
        let w = k2_sum(c, &staircase_witness(c));
        assert!(reduce(&(sum - w)).unwrap().is_zero());
    }
}

#[test]
fn unitarity_of_last_column() {
    let c = Ctx::suq(3);
    let lhs = AlgElt::one(c) - AlgElt::us(c, 3, 3) * u(c, 3, 3);
    let rhs = AlgElt::us(c, 1, 3) * u(c, 1, 3) + AlgElt::us(c, 2, 3) * u(c, 2, 3);
    assert_eq!(equals_exact(&lhs, &rhs).unwrap(), Equality::Equal);
}

#[test]
fn star_expansion_round_trip() {
    for c in [Ctx::suq(2), Ctx::suq(3)] {
        let gens = c.generators(false);
        let mut battery: Vec<AlgElt> = gens.iter().map(|&g| AlgElt::gen(c, g).unwrap()).collect();
        for &g in gens.iter().take(4) {
            for &h in gens.iter().take(4) {
                battery.push(AlgElt::gen(c, g).unwrap() * AlgElt::gen(c, h).unwrap());
            }
        }
        for a in &battery {
            let once = adjoint_expand(&a.adjoint()).unwrap();
            let twice = adjoint_expand(&once.adjoint()).unwrap();
            assert!(reduce(&(twice - a.clone())).unwrap().is_zero(), "{}", a);
        }
    }
}

fn mq_letters(n: usize) -> Vec<GenSym> {
    let mut v = Vec::new();
    for j in 1..=n {
        for k in 1..=n {
            v.push(GenSym::u(j, k));
        }
    }
    v
}

fn arb_elt(n: usize, max_deg: usize) -> impl Strategy<Value = AlgElt> {
    let letters = mq_letters(n);
    let word = prop::collection::vec(prop::sample::select(letters), 0..=max_deg);
    let term = (word, -5i64..=5, 1i64..=3, -2i32..=2);
    prop::collection::vec(term, 1..=3).prop_map(move |ts| {
        let c = Ctx::mq(n);
        AlgElt::from_terms(c, ts.into_iter().map(|(w, a, b, e)| (w, QCoeff::from_ratio(a, b) * QCoeff::q_pow(e))))
    })
}

fn arb_suq2(max_deg: usize) -> impl Strategy<Value = AlgElt> {
    let letters = Ctx::suq(2).generators(true);
    let word = prop::collection::vec(prop::sample::select(letters), 0..=max_deg);
    prop::collection::vec((word, -3i64..=3, 0i64..=2), 1..=3).prop_map(|ts| {
        let c = Ctx::suq(2);
        AlgElt::from_terms(c, ts.into_iter().map(|(w, a, b)| (w, QCoeff::from_int(a) + QCoeff::from_int(b) * QCoeff::i())))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rewriting_is_confluent(a in prop_oneof![arb_elt(2, 5), arb_elt(3, 4)]) {
        let l = normal_form_with(&a, false, Rw::Leftmost).unwrap();
        let r = normal_form_with(&a, false, Rw::Rightmost).unwrap();
        prop_assert_eq!(l.elt, r.elt);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_respects_products(a in arb_elt(2, 3), b in arb_elt(2, 3)) {
        let na = normal_form(&a, false).unwrap().elt;
        let nb = normal_form(&b, false).unwrap().elt;
        prop_assert_eq!(normal_form(&(&na * &nb), false).unwrap().elt, normal_form(&(&a * &b), false).unwrap().elt);
    }

    #[test]
    fn ring_axioms(a in arb_elt(2, 2), b in arb_elt(2, 2), c in arb_elt(2, 2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn adjoint_is_an_antihomomorphic_involution(a in arb_suq2(3), b in arb_suq2(3)) {
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!((&a + &b).adjoint(), &a.adjoint() + &b.adjoint());
    }

    #[test]
    fn coefficient_arithmetic_is_exact(a in -20i64..20, b in 1i64..9, c in -20i64..20, d in 1i64..9, e in -4i32..4) {
        let x = QCoeff::from_ratio(a, b) * QCoeff::q_pow(e) + QCoeff::from_ratio(c, d);
        let y = QCoeff::from_ratio(c, d) * QCoeff::q_gap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) * &y.inv().unwrap(), x.clone());
        }
        let q0 = num::BigRational::new(1.into(), 3.into());
        let lhs = (&x * &y).eval_exact(&q0).unwrap();
        let rhs = x.eval_exact(&q0).unwrap() * y.eval_exact(&q0).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
