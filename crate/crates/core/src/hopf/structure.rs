//! Counit, coproduct, torus characters and the projection onto K_2.

use crate::algebra::{AlgElt, Ctx, GenSym, QCoeff, QPoint, Variant, Word};
use crate::error::{QError, QResult};
use num::complex::Complex64;

/// Counit as an exact coefficient.
pub fn counit_exact(a: &AlgElt) -> QCoeff {
    let mut s = QCoeff::zero();
    for (w, c) in a.terms() {
        if w.iter().all(|g| g.counit()) {
            s = s + c;
        }
    }
    s
}

pub fn counit(a: &AlgElt, q0: &QPoint) -> Complex64 {
    counit_exact(a).eval_f64(q0.value())
}

pub fn counit_word(w: &[GenSym]) -> f64 {
    if w.iter().all(|g| g.counit()) {
        1.0
    } else {
        0.0
    }
}

/// Integer exponents `n_k` of a diagonal word: one slot per diagonal index and,
/// for U_q, a last slot for the determinant direction. `None` if some letter is
/// off-diagonal.
pub fn torus_exponents(ctx: Ctx, w: &[GenSym]) -> Option<Vec<i64>> {
    let slots = if ctx.variant == Variant::Uq { ctx.n + 1 } else { ctx.n };
    let mut e = vec![0i64; slots];
    for g in w {
        match *g {
            GenSym::U(j, k) if j == k => e[j as usize - 1] += 1,
            GenSym::Ustar(j, k) if j == k => e[j as usize - 1] -= 1,
            GenSym::Dinv => e[ctx.n] += 1,
            GenSym::DinvStar => e[ctx.n] -= 1,
            _ => return None,
        }
    }
    Some(e)
}

/// `m_j = n_j - n_1` for the torus directions j = 2..T, listed from j = 2.
pub fn torus_m(ctx: Ctx, w: &[GenSym]) -> Option<Vec<i64>> {
    let e = torus_exponents(ctx, w)?;
    Some(e[1..].iter().map(|x| x - e[0]).collect())
}

/// Character `u_kl -> e^{i theta_k} delta_kl`. For SU_q the angles are
/// theta_2..theta_N; for U_q they are theta_1..theta_N with `Dinv` sent to
/// `e^{-i sum theta}`.
pub fn eps_theta_word(ctx: Ctx, w: &[GenSym], theta: &[f64]) -> QResult<Complex64> {
    let want = if ctx.variant == Variant::Uq { ctx.n } else { ctx.n - 1 };
    if theta.len() != want {
        return Err(QError::Precondition(format!("expected {} angles, got {}", want, theta.len())));
    }
    let Some(e) = torus_exponents(ctx, w) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let phase = if ctx.variant == Variant::Uq {
        let tot: f64 = theta.iter().sum();
        (0..ctx.n).map(|k| e[k] as f64 * theta[k]).sum::<f64>() - e[ctx.n] as f64 * tot
    } else {
        let t1: f64 = -theta.iter().sum::<f64>();
        e[0] as f64 * t1 + (1..ctx.n).map(|k| e[k] as f64 * theta[k - 1]).sum::<f64>()
    };
    Ok(Complex64::from_polar(1.0, phase))
}

pub fn eps_theta(a: &AlgElt, theta: &[f64], q0: &QPoint) -> QResult<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for (w, c) in a.terms() {
        s += c.eval_f64(q0.value()) * eps_theta_word(a.ctx(), w, theta)?;
    }
    Ok(s)
}

fn check_dir(ctx: Ctx, j: usize) -> QResult<()> {
    let t = if ctx.variant == Variant::Uq { ctx.n + 1 } else { ctx.n };
    if j < 2 || j > t {
        return Err(QError::InvalidIndex(format!("torus direction {} outside 2..{}", j, t)));
    }
    Ok(())
}

/// First derivative of the character family in direction j (2..T), exact.
pub fn eps_prime_exact(a: &AlgElt, j: usize) -> QResult<QCoeff> {
    check_dir(a.ctx(), j)?;
    let mut s = QCoeff::zero();
    for (w, c) in a.terms() {
        if let Some(m) = torus_m(a.ctx(), w) {
            s = s + c * &QCoeff::from_int(m[j - 2]);
        }
    }
    Ok(s * QCoeff::i())
}

/// Second mixed derivative in directions j, k (2..T), exact.
pub fn eps_second_exact(a: &AlgElt, j: usize, k: usize) -> QResult<QCoeff> {
    check_dir(a.ctx(), j)?;
    check_dir(a.ctx(), k)?;
    let mut s = QCoeff::zero();
    for (w, c) in a.terms() {
        if let Some(m) = torus_m(a.ctx(), w) {
            s = s + c * &QCoeff::from_int(-m[j - 2] * m[k - 2]);
        }
    }
    Ok(s)
}

pub fn eps_prime_word(ctx: Ctx, w: &[GenSym], j: usize) -> Complex64 {
    match torus_m(ctx, w) {
        Some(m) => Complex64::new(0.0, m[j - 2] as f64),
        None => Complex64::new(0.0, 0.0),
    }
}

pub fn eps_second_word(ctx: Ctx, w: &[GenSym], j: usize, k: usize) -> Complex64 {
    match torus_m(ctx, w) {
        Some(m) => Complex64::new(-(m[j - 2] * m[k - 2]) as f64, 0.0),
        None => Complex64::new(0.0, 0.0),
    }
}

/// Torus directions with dual functionals, as indices 2..=T.
pub fn directions(ctx: Ctx) -> std::ops::RangeInclusive<usize> {
    let t = if ctx.variant == Variant::Uq { ctx.n + 1 } else { ctx.n };
    2..=t
}

/// `d_j = (u_jj - u*_jj)/2i` for j = 2..N, and for U_q also
/// `d_D = (Dinv - Dinv*)/2i` in the last slot.
pub fn basis_extension(ctx: Ctx) -> Vec<AlgElt> {
    let half_over_i = QCoeff::i().inv().unwrap() * QCoeff::from_ratio(1, 2);
    directions(ctx)
        .map(|j| {
            let (a, b) = if j <= ctx.n {
                (GenSym::u(j, j), GenSym::us(j, j))
            } else {
                (GenSym::Dinv, GenSym::DinvStar)
            };
            AlgElt::from_terms(ctx, [(vec![a], half_over_i.clone()), (vec![b], -&half_over_i)])
        })
        .collect()
}

/// `d_1 = (u_11 - u*_11)/2i`, outside the basis extension.
pub fn d_one(ctx: Ctx) -> AlgElt {
    let h = QCoeff::i().inv().unwrap() * QCoeff::from_ratio(1, 2);
    AlgElt::from_terms(ctx, [(vec![GenSym::u(1, 1)], h.clone()), (vec![GenSym::us(1, 1)], -h)])
}

/// `P = id - 1 eps - sum_k d_k eps'_k`, exactly.
pub fn proj_p(a: &AlgElt) -> AlgElt {
    let ctx = a.ctx();
    let mut r = a - &AlgElt::scalar(ctx, counit_exact(a));
    for (d, j) in basis_extension(ctx).iter().zip(directions(ctx)) {
        let e = eps_prime_exact(a, j).expect("valid direction");
        if !e.is_zero() {
            r = r - d.scale(&e);
        }
    }
    r
}

/// Centered letter `g - eps(g)`.
pub fn centered(ctx: Ctx, g: GenSym) -> AlgElt {
    let e = AlgElt::word(ctx, vec![g], QCoeff::one());
    if g.counit() {
        e - AlgElt::one(ctx)
    } else {
        e
    }
}

/// Product of centered letters.
pub fn centered_word(ctx: Ctx, w: &[GenSym]) -> AlgElt {
    let mut acc = AlgElt::one(ctx);
    for &g in w {
        acc = acc * centered(ctx, g);
    }
    acc
}

/// Index pattern of a word: per letter, the kind and the (row, col) pair.
fn letter_with(g: GenSym, j: usize, k: usize) -> GenSym {
    match g {
        GenSym::U(..) => GenSym::u(j, k),
        GenSym::Ustar(..) => GenSym::us(j, k),
        other => other,
    }
}

/// Splits of a word under the coproduct: all `(w1, w2)` with
/// `Delta(w) = sum w1 (x) w2`, every coefficient 1.
pub fn coproduct_word(n: usize, w: &[GenSym]) -> Vec<(Word, Word)> {
    let idx: Vec<usize> = w.iter().enumerate().filter(|(_, g)| g.indices().is_some()).map(|(i, _)| i).collect();
    let total = n.pow(idx.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut s = vec![1usize; idx.len()];
    for _ in 0..total {
        let mut w1 = w.to_vec();
        let mut w2 = w.to_vec();
        for (t, &p) in idx.iter().enumerate() {
            let (j, k) = w[p].indices().unwrap();
            w1[p] = letter_with(w[p], j, s[t]);
            w2[p] = letter_with(w[p], s[t], k);
        }
        out.push((w1, w2));
        for x in s.iter_mut() {
            if *x < n {
                *x += 1;
                break;
            }
            *x = 1;
        }
    }
    out
}

/// n-fold coproduct as a list of tensor words with coefficients.
pub fn coproduct_iter(a: &AlgElt, n: usize, cap: usize) -> QResult<Vec<(Vec<Word>, QCoeff)>> {
    if n < 2 {
        return Err(QError::Precondition("coproduct_iter needs n >= 2".into()));
    }
    let big_n = a.ctx().n;
    let mut total = 0usize;
    for (w, _) in a.terms() {
        let l = w.iter().filter(|g| g.indices().is_some()).count() as u32;
        total = total.saturating_add(big_n.saturating_pow(l * (n as u32 - 1)));
    }
    if total > cap {
        return Err(QError::CapExceeded(format!("{} tensor terms > cap {}", total, cap)));
    }
    let mut out = Vec::with_capacity(total);
    for (w, c) in a.terms() {
        let mut parts: Vec<Vec<Word>> = vec![vec![w.clone()]];
        for _ in 1..n {
            let mut next = Vec::new();
            for p in &parts {
                let last = p.last().unwrap();
                for (x, y) in coproduct_word(big_n, last) {
                    let mut np = p[..p.len() - 1].to_vec();
                    np.push(x);
                    np.push(y);
                    next.push(np);
                }
            }
            parts = next;
        }
        for p in parts {
            out.push((p, c.clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_elt;

    #[test]
    fn counit_examples() {
        let c = Ctx::suq(2);
        assert!(counit_exact(&AlgElt::u(c, 1, 2)).is_zero());
        assert!(counit_exact(&AlgElt::one(c)).is_one());
        assert!(counit_exact(&(AlgElt::u(c, 1, 1) * AlgElt::us(c, 1, 1))).is_one());
    }

    #[test]
    fn coproduct_of_u11() {
        let t = coproduct_iter(&AlgElt::u(Ctx::suq(2), 1, 1), 2, 100).unwrap();
        let words: Vec<Vec<Word>> = t.into_iter().map(|(w, _)| w).collect();
        assert_eq!(
            words,
            vec![
                vec![vec![GenSym::u(1, 1)], vec![GenSym::u(1, 1)]],
                vec![vec![GenSym::u(1, 2)], vec![GenSym::u(2, 1)]]
            ]
        );
        let one = coproduct_iter(&AlgElt::one(Ctx::suq(2)), 2, 10).unwrap();
        assert_eq!(one, vec![(vec![vec![], vec![]], QCoeff::one())]);
    }

    #[test]
    fn eps_prime_examples() {
        let c = Ctx::suq(3);
        let d = basis_extension(c);
        assert!(eps_prime_exact(&d[0], 2).unwrap().is_one());
        assert!(eps_prime_exact(&d[0], 3).unwrap().is_zero());
        assert_eq!(eps_prime_exact(&AlgElt::u(c, 1, 1), 2).unwrap(), -QCoeff::i());
        assert_eq!(eps_prime_exact(&AlgElt::u(c, 2, 2), 2).unwrap(), QCoeff::i());
        assert!(eps_second_exact(&d[0], 2, 2).unwrap().is_zero());
        assert!(eps_prime_exact(&AlgElt::one(c), 2).unwrap().is_zero());
    }

    #[test]
    fn projection_examples() {
        let c = Ctx::suq(3);
        assert!(proj_p(&AlgElt::one(c)).is_zero());
        for d in basis_extension(c) {
            assert!(proj_p(&d).is_zero());
        }
        assert_eq!(proj_p(&AlgElt::u(c, 1, 2)), AlgElt::u(c, 1, 2));
        let a = parse_elt(c, "u[1,1]*u*[2,2] + 3*u[3,3] - q*u[1,2]*u[2,1]").unwrap();
        let p = proj_p(&a);
        assert_eq!(proj_p(&p), p);
        assert_eq!(proj_p(&a.adjoint()), p.adjoint());
    }

    #[test]
    fn uq_dual_pairing() {
        let c = Ctx::uq(2);
        let d = basis_extension(c);
        assert_eq!(d.len(), 2);
        for (a, j) in d.iter().zip(directions(c)) {
            for k in directions(c) {
                let v = eps_prime_exact(a, k).unwrap();
                assert_eq!(v.is_one(), j == k);
                assert!(v.is_one() || v.is_zero());
            }
        }
    }

    #[test]
    fn theta_characters() {
        let c = Ctx::suq(3);
        let q0 = QPoint::half();
        let th = [0.3, -0.1];
        let v = eps_theta(&AlgElt::u(c, 1, 1), &th, &q0).unwrap();
        assert!((v - Complex64::from_polar(1.0, -0.2)).norm() < 1e-15);
        let cu = Ctx::uq(2);
        let d = crate::algebra::AlgElt::gen(cu, GenSym::Dinv).unwrap();
        let v = eps_theta(&d, &[0.2, 0.5], &q0).unwrap();
        assert!((v - Complex64::from_polar(1.0, -0.7)).norm() < 1e-15);
    }
}
