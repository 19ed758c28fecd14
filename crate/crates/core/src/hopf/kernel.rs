//! Explicit elements of K_2 and the splitting of K_2 elements into sums of
//! products of two centered monomials.

use super::structure::{centered_word, counit_exact, directions, eps_prime_exact};
use crate::algebra::{inversions, permutations, AlgElt, Ctx, GenSym, QCoeff, Variant, Word};
use crate::error::{QError, QResult};
use std::collections::BTreeMap;

/// `coef * delta(a) * delta(b)` where `delta(w)` is the product of the
/// centered letters `g - eps(g)` of `w`. Both words are nonempty, so the term
/// is a product of two elements of K_1.
#[derive(Clone, Debug, PartialEq)]
pub struct K2Term {
    pub coef: QCoeff,
    pub a: Word,
    pub b: Word,
}

impl K2Term {
    pub fn to_elt(&self, ctx: Ctx) -> AlgElt {
        (centered_word(ctx, &self.a) * centered_word(ctx, &self.b)).scale(&self.coef)
    }
}

pub fn k2_sum(ctx: Ctx, terms: &[K2Term]) -> AlgElt {
    let mut s = AlgElt::zero(ctx);
    for t in terms {
        s = s + t.to_elt(ctx);
    }
    s
}

#[derive(Default)]
struct Acc {
    map: BTreeMap<(Word, Word), QCoeff>,
}

impl Acc {
    fn push(&mut self, c: QCoeff, a: Word, b: Word) {
        if c.is_zero() {
            return;
        }
        let e = self.map.entry((a, b)).or_insert_with(QCoeff::zero);
        *e = &*e + &c;
    }

    fn finish(self) -> Vec<K2Term> {
        self.map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((a, b), coef)| K2Term { coef, a, b })
            .collect()
    }
}

/// Off-diagonal letter as a K_2 element: with `l = max(j,k)`,
/// `(1-q) u_jk = q (u_ll - 1) u_jk - u_jk (u_ll - 1)`, and the adjoint form
/// for `u*_jk`.
pub fn offdiag_witness(g: GenSym) -> Vec<K2Term> {
    let (j, k) = g.indices().expect("indexed letter");
    assert!(j != k, "diagonal letter");
    let l = j.max(k);
    let inv = (QCoeff::one() - QCoeff::q_pow(1)).inv().unwrap();
    let cq = QCoeff::q_pow(1) * &inv;
    if g.is_starred() {
        let d = GenSym::us(l, l);
        vec![K2Term { coef: cq, a: vec![g], b: vec![d] }, K2Term { coef: -inv, a: vec![d], b: vec![g] }]
    } else {
        let d = GenSym::u(l, l);
        vec![K2Term { coef: cq, a: vec![d], b: vec![g] }, K2Term { coef: -inv, a: vec![g], b: vec![d] }]
    }
}

/// `(u_jj - 1) + (u*_jj - 1) = -sum_{p != j} u_jp u*_jp - (u_jj - 1)(u*_jj - 1)`.
pub fn diag_witness(ctx: Ctx, j: usize) -> Vec<K2Term> {
    let mut out = vec![K2Term { coef: -QCoeff::one(), a: vec![GenSym::u(j, j)], b: vec![GenSym::us(j, j)] }];
    for p in (1..=ctx.n).filter(|&p| p != j) {
        out.push(K2Term { coef: -QCoeff::one(), a: vec![GenSym::u(j, p)], b: vec![GenSym::us(j, p)] });
    }
    out
}

/// Centered expansion of `c * w`: returns the terms with at least two
/// centered letters, and adds the single-letter terms to `linear` and the
/// constant to `constant`.
fn expand_word(c: &QCoeff, w: &[GenSym], acc: &mut Acc, linear: &mut BTreeMap<GenSym, QCoeff>, constant: &mut QCoeff) {
    let diag: Vec<usize> = (0..w.len()).filter(|&i| w[i].counit()).collect();
    let off: Vec<usize> = (0..w.len()).filter(|&i| !w[i].counit()).collect();
    for mask in 0u64..(1u64 << diag.len()) {
        let mut s: Vec<usize> = off.clone();
        for (b, &i) in diag.iter().enumerate() {
            if mask >> b & 1 == 1 {
                s.push(i);
            }
        }
        s.sort_unstable();
        match s.len() {
            0 => *constant = &*constant + c,
            1 => {
                let e = linear.entry(w[s[0]]).or_insert_with(QCoeff::zero);
                *e = &*e + c;
            }
            _ => acc.push(c.clone(), vec![w[s[0]]], s[1..].iter().map(|&i| w[i]).collect()),
        }
    }
}

/// `v_1 + ... + v_N` with `v_j = u_jj - 1`, as a sum of K_2 terms. Uses the
/// determinant relation `D = 1`, so this holds in SU_q(N) only.
fn staircase_v_sum(ctx: Ctx, acc: &mut Acc, sign: &QCoeff) {
    let n = ctx.n;
    let mut lin = BTreeMap::new();
    let mut cst = QCoeff::zero();
    // -(sum over sigma != id of (-q)^i(sigma) u_sigma)
    for s in permutations(n) {
        if s.iter().enumerate().all(|(i, &t)| i == t) {
            continue;
        }
        let w: Word = (0..n).map(|i| GenSym::u(i + 1, s[i] + 1)).collect();
        let c = -(QCoeff::neg_q_pow(inversions(&s) as i32) * sign);
        expand_word(&c, &w, acc, &mut lin, &mut cst);
    }
    debug_assert!(lin.is_empty() && cst.is_zero());
    // -(sum over |S| >= 2 of prod_{j in S} v_j), ordered
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let w: Word = (0..n).filter(|&j| mask >> j & 1 == 1).map(|j| GenSym::u(j + 1, j + 1)).collect();
        acc.push(-sign.clone(), vec![w[0]], w[1..].to_vec());
    }
}

/// `d_1 + ... + d_N` as K_2 terms (SU_q(N)).
pub fn staircase_witness(ctx: Ctx) -> Vec<K2Term> {
    let mut acc = Acc::default();
    add_d_sum(ctx, &mut acc, &QCoeff::one());
    acc.finish()
}

fn add_d_sum(ctx: Ctx, acc: &mut Acc, scale: &QCoeff) {
    // d-sum = (V - V*)/2i; the adjoint of coef*delta(a)delta(b) is
    // conj(coef)*delta(b*)delta(a*)
    let half_i = QCoeff::i().inv().unwrap() * QCoeff::from_ratio(1, 2);
    let mut v = Acc::default();
    staircase_v_sum(ctx, &mut v, &QCoeff::one());
    for ((a, b), c) in v.map {
        let astar: Word = a.iter().rev().map(|g| g.star()).collect();
        let bstar: Word = b.iter().rev().map(|g| g.star()).collect();
        let mut whole = bstar;
        whole.extend(astar);
        acc.push(&c * &half_i * scale, a, b);
        acc.push(-(c.conj() * &half_i * scale), vec![whole[0]], whole[1..].to_vec());
    }
}

/// Splits `x` (with `eps(x) = 0` and `eps'_k(x) = 0` for all k) into K_2
/// terms whose sum equals `x` in SU_q(N).
pub fn split_k2(x: &AlgElt) -> QResult<Vec<K2Term>> {
    let ctx = x.ctx();
    if ctx.variant != Variant::SUq {
        return Err(QError::Precondition("split_k2 works in SU_q(N); lift U_q(N) elements first".into()));
    }
    if !counit_exact(x).is_zero() {
        return Err(QError::Precondition("split_k2: eps(x) != 0".into()));
    }
    for j in directions(ctx) {
        if !eps_prime_exact(x, j)?.is_zero() {
            return Err(QError::Precondition(format!("split_k2: eps'_{}(x) != 0", j)));
        }
    }
    let mut acc = Acc::default();
    let mut lin: BTreeMap<GenSym, QCoeff> = BTreeMap::new();
    let mut cst = QCoeff::zero();
    for (w, c) in x.terms() {
        if w.iter().any(|g| matches!(g, GenSym::Dinv | GenSym::DinvStar)) {
            return Err(QError::Precondition("split_k2: Dinv in SU_q context".into()));
        }
        expand_word(c, w, &mut acc, &mut lin, &mut cst);
    }
    debug_assert!(cst.is_zero());
    let n = ctx.n;
    let mut alpha = vec![QCoeff::zero(); n + 1];
    let mut beta = vec![QCoeff::zero(); n + 1];
    for (g, c) in lin {
        match g {
            GenSym::U(j, k) if j == k => alpha[j as usize] = c,
            GenSym::Ustar(j, k) if j == k => beta[j as usize] = c,
            _ => {
                for t in offdiag_witness(g) {
                    acc.push(t.coef * &c, t.a, t.b);
                }
            }
        }
    }
    // alpha v + beta v* = (alpha+beta)/2 (v + v*) + (alpha-beta) i d_j
    let half = QCoeff::from_ratio(1, 2);
    let mut gamma = Vec::with_capacity(n);
    for j in 1..=n {
        let s = (&alpha[j] + &beta[j]) * &half;
        if !s.is_zero() {
            for t in diag_witness(ctx, j) {
                acc.push(t.coef * &s, t.a, t.b);
            }
        }
        gamma.push((&alpha[j] - &beta[j]) * QCoeff::i());
    }
    // eps'_k(x) = 0 forces gamma_k = gamma_1 for all k
    if gamma.iter().any(|g| g != &gamma[0]) {
        return Err(QError::Numeric("split_k2: residual drift part is not a multiple of d_1+...+d_N".into()));
    }
    if !gamma[0].is_zero() {
        add_d_sum(ctx, &mut acc, &gamma[0]);
    }
    Ok(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{equals_exact, parse_elt, Equality};
    use crate::hopf::structure::proj_p;

    fn check(x: &AlgElt) {
        let t = split_k2(x).unwrap();
        for k in &t {
            assert!(!k.a.is_empty() && !k.b.is_empty());
        }
        assert_eq!(equals_exact(&k2_sum(x.ctx(), &t), x).unwrap(), Equality::Equal, "{}", x);
    }

    #[test]
    fn already_split() {
        let c = Ctx::suq(2);
        let x = AlgElt::us(c, 1, 2) * AlgElt::u(c, 1, 2);
        let t = split_k2(&x).unwrap();
        assert_eq!(t, vec![K2Term { coef: QCoeff::one(), a: vec![GenSym::us(1, 2)], b: vec![GenSym::u(1, 2)] }]);
    }

    #[test]
    fn offdiagonal_letter() {
        let c = Ctx::suq(2);
        let t = split_k2(&AlgElt::u(c, 1, 2)).unwrap();
        assert_eq!(t.len(), 2);
        check(&AlgElt::u(c, 1, 2));
        check(&AlgElt::us(c, 2, 1));
    }

    #[test]
    fn witnesses_hold() {
        for n in 2..=3 {
            let c = Ctx::suq(n);
            for j in 1..=n {
                let v = AlgElt::u(c, j, j) + AlgElt::us(c, j, j) - AlgElt::scalar(c, QCoeff::from_int(2));
                assert_eq!(equals_exact(&k2_sum(c, &diag_witness(c, j)), &v).unwrap(), Equality::Equal);
            }
            let mut d = AlgElt::zero(c);
            for j in 1..=n {
                d = d + (AlgElt::u(c, j, j) - AlgElt::us(c, j, j)).scale(&(QCoeff::i().inv().unwrap() * QCoeff::from_ratio(1, 2)));
            }
            assert_eq!(equals_exact(&k2_sum(c, &staircase_witness(c)), &d).unwrap(), Equality::Equal);
        }
    }

    #[test]
    fn projected_words_split() {
        let c = Ctx::suq(3);
        for s in ["u[1,1]", "u[2,2]*u*[3,3]", "u[1,1]*u[2,2] - u*[3,3]", "u[1,2]*u[2,1]*u[3,3]", "u*[2,2]*u*[2,2]"] {
            let a = parse_elt(c, s).unwrap();
            check(&proj_p(&a));
        }
    }

    #[test]
    fn rejects_drift() {
        let c = Ctx::suq(2);
        assert!(split_k2(&(AlgElt::u(c, 2, 2) - AlgElt::us(c, 2, 2))).is_err());
        assert!(split_k2(&AlgElt::one(c)).is_err());
    }
}
