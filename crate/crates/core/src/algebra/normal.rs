//! Rewriting to normal form.
//!
//! Words in the generators `u_jk` are sorted row-major with the commutation
//! relations of the quantum matrix bialgebra, solved for the out-of-order
//! product. Each step replaces a word by lexicographically smaller words of
//! the same length, so processing the pending set from the largest word down
//! visits every word once.
//!
//! The determinant relation is handled by division: a sorted monomial that
//! contains every diagonal letter is the leading term of `D * m'` for the
//! monomial `m'` left after removing one copy of each diagonal letter, under
//! the order (degree, weight, lex) with weight `-(j-k)^2` per letter `u_jk`.
//! The cross term of the fourth commutation relation strictly lowers that
//! weight, so the division terminates and its remainders are canonical.

use super::det::{quantum_determinant, quantum_minor};
use super::elt::AlgElt;
use super::gen::{Ctx, GenSym, Variant, Word};
use super::qcoeff::QCoeff;
use crate::error::{QError, QResult};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug)]
pub struct Reduced {
    pub elt: AlgElt,
    /// Set when the determinant division hit its iteration cap.
    pub capped: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Equality {
    Equal,
    Different,
    Undecided,
}

pub const DET_RULE_CAP: usize = 2_000_000;

/// Replaces starred letters by their polynomial expressions.
pub fn adjoint_expand(a: &AlgElt) -> QResult<AlgElt> {
    let ctx = a.ctx();
    if !a.has_star() {
        return Ok(a.clone());
    }
    match ctx.variant {
        Variant::Mq => Err(QError::Precondition("M_q(N) has no involution".into())),
        Variant::Torus => Ok(a.clone()),
        Variant::SUq | Variant::Uq => {
            let mut cache: HashMap<GenSym, AlgElt> = HashMap::new();
            a.substitute(ctx, |g| {
                if let Some(e) = cache.get(&g) {
                    return Ok(e.clone());
                }
                let e = match g {
                    GenSym::Ustar(j, k) => {
                        let (j, k) = (j as usize, k as usize);
                        let m = quantum_minor(ctx, j, k)?
                            .scale(&QCoeff::neg_q_pow(k as i32 - j as i32));
                        if ctx.variant == Variant::Uq {
                            m * AlgElt::word(ctx, vec![GenSym::Dinv], QCoeff::one())
                        } else {
                            m
                        }
                    }
                    GenSym::DinvStar => quantum_determinant(ctx),
                    other => AlgElt::gen(ctx, other)?,
                };
                cache.insert(g, e.clone());
                Ok(e)
            })
        }
    }
}

struct Consts {
    qinv: QCoeff,
    gap: QCoeff,
    one: QCoeff,
}

impl Consts {
    fn new() -> Self {
        Consts { qinv: QCoeff::q_pow(-1), gap: QCoeff::q_gap(), one: QCoeff::one() }
    }
}

/// Rewrite of an out-of-order adjacent pair `a b` (a > b).
fn pair_rule<'c>(a: GenSym, b: GenSym, k: &'c Consts) -> [Option<([GenSym; 2], &'c QCoeff)>; 2] {
    match (a, b) {
        (GenSym::U(t, v), GenSym::U(r, s)) => {
            if r == t {
                [Some(([b, a], &k.qinv)), None]
            } else if s == v {
                [Some(([b, a], &k.qinv)), None]
            } else if s > v {
                [Some(([b, a], &k.one)), None]
            } else {
                [Some(([b, a], &k.one)), Some(([GenSym::U(r, v), GenSym::U(t, s)], &k.gap))]
            }
        }
        // D^{-1} is central.
        (GenSym::Dinv, GenSym::U(..)) => [Some(([b, a], &k.one)), None],
        _ => unreachable!("pair_rule on {:?} {:?}", a, b),
    }
}

fn descent(w: &[GenSym], strategy: Strategy) -> Option<usize> {
    let n = w.len();
    if n < 2 {
        return None;
    }
    match strategy {
        Strategy::Leftmost => (0..n - 1).find(|&i| w[i] > w[i + 1]),
        Strategy::Rightmost => (0..n - 1).rev().find(|&i| w[i] > w[i + 1]),
    }
}

/// Sorts every word with the commutation relations.
fn mq_reduce(
    input: impl IntoIterator<Item = (Word, QCoeff)>,
    strategy: Strategy,
) -> BTreeMap<Word, QCoeff> {
    let k = Consts::new();
    let mut pending: BTreeMap<Word, QCoeff> = BTreeMap::new();
    for (w, c) in input {
        add_into(&mut pending, w, c);
    }
    let mut out = BTreeMap::new();
    while let Some((w, c)) = pending.pop_last() {
        match descent(&w, strategy) {
            None => {
                out.insert(w, c);
            }
            Some(i) => {
                for (pair, f) in pair_rule(w[i], w[i + 1], &k).into_iter().flatten() {
                    let mut nw = w.clone();
                    nw[i] = pair[0];
                    nw[i + 1] = pair[1];
                    add_into(&mut pending, nw, &c * f);
                }
            }
        }
    }
    out
}

fn add_into(m: &mut BTreeMap<Word, QCoeff>, w: Word, c: QCoeff) {
    if c.is_zero() {
        return;
    }
    match m.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn weight(w: &[GenSym]) -> i64 {
    w.iter()
        .map(|g| match g {
            GenSym::U(j, k) => -((*j as i64 - *k as i64).pow(2)),
            _ => 0,
        })
        .sum()
}

/// Removes one copy of each diagonal letter from a sorted word, if present.
fn divide_staircase(w: &[GenSym], n: usize) -> Option<Word> {
    let mut out = Vec::with_capacity(w.len());
    let mut next = 1usize;
    for &g in w {
        if next <= n && g == GenSym::u(next, next) {
            next += 1;
        } else {
            out.push(g);
        }
    }
    (next > n).then_some(out)
}

thread_local! {
    static DM_CACHE: RefCell<HashMap<(usize, Word), Vec<(Word, QCoeff)>>> = RefCell::new(HashMap::new());
}

/// Sorted form of `D * m` for a sorted `u`-word `m`.
fn det_times(n: usize, m: &[GenSym]) -> Vec<(Word, QCoeff)> {
    let key = (n, m.to_vec());
    if let Some(v) = DM_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let d = quantum_determinant(Ctx::mq(n));
    let prod = d.into_terms().into_iter().map(|(mut w, c)| {
        w.extend_from_slice(m);
        (w, c)
    });
    let v: Vec<(Word, QCoeff)> = mq_reduce(prod, Strategy::Leftmost).into_iter().collect();
    DM_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 200_000 {
            c.clear();
        }
        c.insert(key, v.clone());
    });
    v
}

type Key = (usize, i64, Word);

fn det_reduce(ctx: Ctx, input: BTreeMap<Word, QCoeff>, cap: usize) -> (BTreeMap<Word, QCoeff>, bool) {
    let n = ctx.n;
    let uq = ctx.variant == Variant::Uq;
    let split = |w: &Word| -> (Word, usize) {
        let k = w.iter().filter(|g| **g == GenSym::Dinv).count();
        (w[..w.len() - k].to_vec(), k)
    };
    let mut queue: BTreeMap<Key, QCoeff> = BTreeMap::new();
    let push = |queue: &mut BTreeMap<Key, QCoeff>, w: Word, c: QCoeff| {
        if c.is_zero() {
            return;
        }
        let (u, _) = split(&w);
        let key = (u.len(), weight(&u), w);
        match queue.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    };
    for (w, c) in input {
        push(&mut queue, w, c);
    }
    let mut out = BTreeMap::new();
    let mut steps = 0usize;
    while let Some(((_, _, w), c)) = queue.pop_last() {
        steps += 1;
        if steps > cap {
            add_into(&mut out, w, c);
            for ((_, _, w), c) in std::mem::take(&mut queue) {
                add_into(&mut out, w, c);
            }
            return (out, true);
        }
        let (u, k) = split(&w);
        let reducible = !uq || k >= 1;
        let m = if reducible { divide_staircase(&u, n) } else { None };
        let Some(m) = m else {
            out.insert(w, c);
            continue;
        };
        let dm = det_times(n, &m);
        let lead = dm
            .iter()
            .find(|(x, _)| *x == u)
            .map(|(_, c)| c.clone())
            .expect("staircase is the leading term of D*m");
        let f = &c * &lead.inv().expect("nonzero leading coefficient");
        let dinv = |mut x: Word, p: usize| {
            x.extend(std::iter::repeat(GenSym::Dinv).take(p));
            x
        };
        let kk = if uq { k - 1 } else { 0 };
        push(&mut queue, dinv(m.clone(), kk), f.clone());
        for (x, cx) in dm {
            if x == u {
                continue;
            }
            push(&mut queue, dinv(x, k), -(&f * &cx));
        }
    }
    (out, false)
}

fn torus_reduce(ctx: Ctx, a: &AlgElt) -> QResult<AlgElt> {
    let n = ctx.n;
    let mut out = AlgElt::zero(ctx);
    for (w, c) in a.terms() {
        let mut e = vec![0i64; n + 1];
        for g in w {
            match *g {
                GenSym::U(j, k) if j == k => e[j as usize] += 1,
                GenSym::Ustar(j, k) if j == k => e[j as usize] -= 1,
                other => return Err(QError::InvalidIndex(format!("{} in torus", other))),
            }
        }
        let mut nw = Vec::new();
        for j in 2..=n {
            let x = e[j] - e[1];
            let g = if x >= 0 { GenSym::u(j, j) } else { GenSym::us(j, j) };
            nw.extend(std::iter::repeat(g).take(x.unsigned_abs() as usize));
        }
        out.add_term(nw, c.clone());
    }
    Ok(out)
}

pub fn normal_form(a: &AlgElt, apply_det_rule: bool) -> QResult<Reduced> {
    normal_form_with(a, apply_det_rule, Strategy::Leftmost)
}

pub fn normal_form_with(a: &AlgElt, apply_det_rule: bool, strategy: Strategy) -> QResult<Reduced> {
    let ctx = a.ctx();
    a.validate()?;
    if ctx.variant == Variant::Torus {
        return Ok(Reduced { elt: torus_reduce(ctx, a)?, capped: false });
    }
    if a.has_star() {
        return Err(QError::Precondition("normal_form needs a star-free element; expand first".into()));
    }
    let sorted = mq_reduce(a.terms().map(|(w, c)| (w.clone(), c.clone())), strategy);
    let det = apply_det_rule && matches!(ctx.variant, Variant::SUq | Variant::Uq);
    if !det {
        return Ok(Reduced { elt: AlgElt::from_terms(ctx, sorted), capped: false });
    }
    let (terms, capped) = det_reduce(ctx, sorted, DET_RULE_CAP);
    Ok(Reduced { elt: AlgElt::from_terms(ctx, terms), capped })
}

/// Canonical form: stars expanded, sorted, determinant relation applied.
pub fn reduce(a: &AlgElt) -> QResult<AlgElt> {
    let e = adjoint_expand(a)?;
    let r = normal_form(&e, true)?;
    if r.capped {
        return Err(QError::CapExceeded("determinant division".into()));
    }
    Ok(r.elt)
}

pub fn equals_exact(a: &AlgElt, b: &AlgElt) -> QResult<Equality> {
    let d = a.try_add(&-b)?;
    let e = adjoint_expand(&d)?;
    let r = normal_form(&e, true)?;
    if r.capped {
        return Ok(Equality::Undecided);
    }
    Ok(if r.elt.is_zero() { Equality::Equal } else { Equality::Different })
}

pub fn is_zero_exact(a: &AlgElt) -> QResult<bool> {
    Ok(equals_exact(a, &AlgElt::zero(a.ctx()))? == Equality::Equal)
}

/// Checks that every overlap `x y z` with `x > y > z` resolves to the same
/// sorted form from both ends, and that `D m` reduces to `m` for every sorted
/// monomial `m` up to the given degree. Returns the number of cases checked.
pub fn check_confluence(ctx: Ctx, det_degree: usize) -> QResult<usize> {
    let letters: Vec<GenSym> = (1..=ctx.n)
        .flat_map(|j| (1..=ctx.n).map(move |k| GenSym::u(j, k)))
        .collect();
    let mut count = 0;
    for &x in &letters {
        for &y in &letters {
            for &z in &letters {
                if !(x > y && y > z) {
                    continue;
                }
                let w = vec![x, y, z];
                let a = mq_reduce([(w.clone(), QCoeff::one())], Strategy::Leftmost);
                let b = mq_reduce([(w, QCoeff::one())], Strategy::Rightmost);
                if a != b {
                    return Err(QError::Numeric(format!("overlap {} {} {} is not resolvable", x, y, z)));
                }
                count += 1;
            }
        }
    }
    if ctx.variant == Variant::SUq {
        let d = quantum_determinant(ctx);
        for m in sorted_monomials(&letters, det_degree) {
            let mm = AlgElt::word(ctx, m.clone(), QCoeff::one());
            let lhs = &d * &mm;
            if equals_exact(&lhs, &mm)? != Equality::Equal {
                return Err(QError::Numeric(format!("D*m != m for m = {}", mm)));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn sorted_monomials(letters: &[GenSym], max_deg: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in letters {
                if w.last().is_none_or(|&l| l <= g) {
                    let mut nw = w.clone();
                    nw.push(g);
                    next.push(nw);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(c: Ctx, j: usize, k: usize) -> AlgElt {
        AlgElt::u(c, j, k)
    }

    #[test]
    fn reversed_same_column() {
        let c = Ctx::mq(2);
        let r = normal_form(&(u(c, 2, 1) * u(c, 1, 1)), false).unwrap().elt;
        assert_eq!(r, (u(c, 1, 1) * u(c, 2, 1)).scale(&QCoeff::q_pow(-1)));
    }

    #[test]
    fn reversed_fourth_relation() {
        let c = Ctx::mq(2);
        let r = normal_form(&(u(c, 2, 2) * u(c, 1, 1)), false).unwrap().elt;
        let want = u(c, 1, 1) * u(c, 2, 2) + (u(c, 1, 2) * u(c, 2, 1)).scale(&QCoeff::q_gap());
        assert_eq!(r, want);
    }

    #[test]
    fn determinant_is_one_in_suq2() {
        let c = Ctx::suq(2);
        let d = quantum_determinant(c);
        assert_eq!(normal_form(&d, true).unwrap().elt, AlgElt::one(c));
    }

    #[test]
    fn star_expansion_suq2() {
        let c = Ctx::suq(2);
        assert_eq!(adjoint_expand(&AlgElt::us(c, 1, 1)).unwrap(), u(c, 2, 2));
        assert_eq!(
            adjoint_expand(&AlgElt::us(c, 1, 2)).unwrap(),
            u(c, 2, 1).scale(&QCoeff::mono(-1, 1))
        );
    }

    #[test]
    fn equality_examples() {
        let c = Ctx::mq(2);
        let lhs = u(c, 1, 1) * u(c, 1, 2);
        let rhs = (u(c, 1, 2) * u(c, 1, 1)).scale(&QCoeff::q_pow(1));
        assert_eq!(equals_exact(&lhs, &rhs).unwrap(), Equality::Equal);
        assert_eq!(equals_exact(&u(c, 1, 1), &u(c, 2, 2)).unwrap(), Equality::Different);
        for n in 2..=3 {
            let c = Ctx::suq(n);
            let lhs = AlgElt::one(c) - AlgElt::us(c, n, n) * u(c, n, n);
            let mut rhs = AlgElt::zero(c);
            for k in 1..n {
                rhs = rhs + AlgElt::us(c, k, n) * u(c, k, n);
            }
            assert_eq!(equals_exact(&lhs, &rhs).unwrap(), Equality::Equal);
        }
    }

    #[test]
    fn uq_determinant_cancels() {
        let c = Ctx::uq(2);
        let dinv = AlgElt::gen(c, GenSym::Dinv).unwrap();
        let d = quantum_determinant(c);
        assert_eq!(reduce(&(&d * &dinv)).unwrap(), AlgElt::one(c));
        assert_eq!(reduce(&(&dinv * &d)).unwrap(), AlgElt::one(c));
        let ds = AlgElt::gen(c, GenSym::DinvStar).unwrap();
        assert_eq!(reduce(&(&ds * &dinv)).unwrap(), AlgElt::one(c));
        assert!(!reduce(&dinv).unwrap().is_zero());
    }

    #[test]
    fn torus_words() {
        let c = Ctx::torus(3);
        let a = u(c, 1, 1) * u(c, 2, 2) * u(c, 3, 3);
        assert_eq!(normal_form(&a, true).unwrap().elt, AlgElt::one(c));
        let b = u(c, 2, 2) * AlgElt::us(c, 2, 2);
        assert_eq!(normal_form(&b, true).unwrap().elt, AlgElt::one(c));
    }

    #[test]
    fn confluence_small() {
        assert!(check_confluence(Ctx::suq(2), 4).unwrap() > 0);
        assert!(check_confluence(Ctx::suq(3), 3).unwrap() > 0);
    }
}
