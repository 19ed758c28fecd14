//! Degree-truncated GNS data of a generating functional.
//!
//! Only an approximation: the span of centered words of degree at most d is
//! not invariant, so the generators act on the words of degree at most d-1
//! and the resulting matrices are least-squares compressions.

use super::cocycle::Cocycle;
use crate::algebra::{AlgElt, GenSym, Word};
use crate::error::{QError, QResult};
use crate::hopf::battery::words_up_to;
use crate::hopf::structure::centered_word;
use crate::hopf::{gram, min_eig, Functional};
use crate::repkit::{Dense, Vector, C};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

pub struct GnsData {
    pub letters: Vec<GenSym>,
    pub degree: usize,
    pub words: Vec<Word>,
    pub gram: Dense,
    pub rank: usize,
    /// Column i is the class of the i-th centered word, `X* X = gram`.
    pub coords: Dense,
    /// Generator actions on the quotient (rank x rank).
    pub action: BTreeMap<GenSym, Dense>,
    /// Largest least-squares misfit of an action, relative to the data.
    pub action_misfit: f64,
    pub gram_min_eig: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerReport {
    pub gram_defect: f64,
    pub isometry_defect: f64,
    pub fit_defect: f64,
    pub intertwining_defect: f64,
}

/// Pivoted Cholesky `P G P^T = L L*`; returns the permutation order and L
/// (n x r) with pivots stopping below `tol * max diag`.
fn pivoted_cholesky(g: &Dense, tol: f64) -> (Vec<usize>, Dense) {
    let n = g.nrows();
    let mut a = g.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = (0..n).map(|i| g[(i, i)].re).fold(0.0, f64::max);
    let mut l = Dense::zeros(n, n);
    let mut r = 0;
    while r < n {
        let (p, dmax) = (r..n).map(|i| (i, a[(i, i)].re)).fold((r, f64::NEG_INFINITY), |b, x| if x.1 > b.1 { x } else { b });
        if dmax <= tol * scale.max(1e-300) {
            break;
        }
        a.swap_rows(r, p);
        a.swap_columns(r, p);
        l.swap_rows(r, p);
        perm.swap(r, p);
        let d = dmax.sqrt();
        l[(r, r)] = C::new(d, 0.0);
        for i in r + 1..n {
            l[(i, r)] = a[(i, r)] / d;
        }
        for i in r + 1..n {
            for j in r + 1..n {
                let v = l[(i, r)] * l[(j, r)].conj();
                a[(i, j)] -= v;
            }
        }
        r += 1;
    }
    (perm, l.columns(0, r).into_owned())
}

/// Builds the quotient of the centered words of degree at most `d` over
/// `letters` by the null space of `[psi(a_i* a_j)]`.
pub fn gns_build(psi: &Functional, letters: &[GenSym], d: usize, tol: f64) -> QResult<GnsData> {
    let ctx = psi.ctx();
    for &g in letters {
        ctx.check(g)?;
    }
    let words = words_up_to(letters, d);
    let elts: Vec<AlgElt> = words.iter().map(|w| centered_word(ctx, w)).collect();
    let g = gram(psi, &elts);
    let g = (&g + g.adjoint()).scale(0.5);
    let scale = g.norm().max(1.0);
    let me = min_eig(&g);
    if me < -tol * scale {
        return Err(QError::Precondition(format!("Gram matrix is not positive (min eigenvalue {:.3e})", me)));
    }
    let (perm, l) = pivoted_cholesky(&g, tol);
    let rank = l.ncols();
    let n = words.len();
    let mut coords = Dense::zeros(rank, n);
    for (row, &orig) in perm.iter().enumerate() {
        for k in 0..rank {
            coords[(k, orig)] = l[(row, k)].conj();
        }
    }
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let low: Vec<usize> = (0..n).filter(|&i| words[i].len() < d).collect();
    let mut action = BTreeMap::new();
    let mut misfit = 0.0f64;
    if rank > 0 {
        let mut xl = Dense::zeros(rank, low.len());
        for (c, &i) in low.iter().enumerate() {
            xl.set_column(c, &coords.column(i));
        }
        let pinv = xl.clone().pseudo_inverse(1e-12 * xl.norm().max(1e-300)).map_err(|e| QError::Numeric(e.to_string()))?;
        for &g in letters {
            let eps = if g.counit() { 1.0 } else { 0.0 };
            let mut y = Dense::zeros(rank, low.len());
            for (c, &i) in low.iter().enumerate() {
                // g a = (g - eps(g)) a + eps(g) a
                let mut w = vec![g];
                w.extend_from_slice(&words[i]);
                let v = coords.column(index[&w]) + coords.column(i) * C::new(eps, 0.0);
                y.set_column(c, &v);
            }
            let p = &y * &pinv;
            misfit = misfit.max((&p * &xl - &y).norm() / y.norm().max(1.0));
            action.insert(g, p);
        }
    }
    Ok(GnsData { letters: letters.to_vec(), degree: d, words, gram: g, rank, coords, action, action_misfit: misfit, gram_min_eig: me })
}

impl GnsData {
    /// GNS cocycle value on a letter: the class of its centered word.
    pub fn eta_letter(&self, g: GenSym) -> Option<Vector> {
        let i = self.words.iter().position(|w| w.len() == 1 && w[0] == g)?;
        Some(self.coords.column(i).into_owned())
    }

    /// Compares with a known triple: `V = E X^+` should be an isometry with
    /// `V x_i = eta(a_i)` and `V pi_gns(g) = pi(g) V` on the low words.
    pub fn intertwiner(&self, eta: &Cocycle) -> IntertwinerReport {
        let ctx = eta.pi.ctx;
        let n = self.words.len();
        let dim = eta.dim();
        let mut e = Dense::zeros(dim, n);
        for (i, w) in self.words.iter().enumerate() {
            e.set_column(i, &eta.eval(&centered_word(ctx, w)));
        }
        let gram_defect = (e.adjoint() * &e - &self.gram).amax_c();
        if self.rank == 0 {
            return IntertwinerReport { gram_defect, isometry_defect: 0.0, fit_defect: e.norm(), intertwining_defect: 0.0 };
        }
        let xp = self.coords.clone().pseudo_inverse(1e-12 * self.coords.norm()).expect("pseudo inverse");
        let v = &e * xp;
        let isometry_defect = (v.adjoint() * &v - Dense::identity(self.rank, self.rank)).amax_c();
        let fit_defect = (&v * &self.coords - &e).amax_c();
        let mut inter = 0.0f64;
        for (g, p) in &self.action {
            let pg = eta.pi.image(*g).to_dense();
            for (i, w) in self.words.iter().enumerate() {
                if w.len() < self.degree {
                    let x = self.coords.column(i);
                    let lhs = &v * (p * x);
                    let rhs = &pg * (&v * x);
                    inter = inter.max((lhs - rhs).amax_c());
                }
            }
        }
        IntertwinerReport { gram_defect, isometry_defect, fit_defect, intertwining_defect: inter }
    }
}

trait CAmax {
    fn amax_c(&self) -> f64;
}

impl CAmax for Dense {
    fn amax_c(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl CAmax for Vector {
    fn amax_c(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ctx, QPoint};
    use crate::repkit::MatRep;
    use crate::schurmann::{coboundary, PsiExact};
    use std::sync::Arc;

    fn letters() -> Vec<GenSym> {
        vec![GenSym::u(1, 1), GenSym::u(1, 2), GenSym::u(2, 1), GenSym::u(2, 2)]
    }

    #[test]
    fn drift_has_trivial_gns() {
        let c = Ctx::suq(2);
        let psi = Functional::eps_prime(c, QPoint::half(), 2).unwrap();
        let g = gns_build(&psi, &letters(), 2, 1e-12).unwrap();
        assert_eq!(g.rank, 0);
    }

    #[test]
    fn coboundary_gns_is_isometric() {
        let pi = Arc::new(MatRep::suq2_irrep(24, QPoint::half()).unwrap());
        let mut f = Vector::from_element(24, C::new(0.0, 0.0));
        f[0] = C::new(1.0, 0.0);
        f[1] = C::new(0.0, 0.3);
        let eta = Arc::new(coboundary(pi, &f).unwrap());
        let psi = PsiExact::new(eta.clone()).functional("psi_f");
        let g = gns_build(&psi, &letters(), 3, 1e-10).unwrap();
        assert!(g.rank > 0);
        assert!(g.action_misfit < 1e-8, "{}", g.action_misfit);
        let r = g.intertwiner(&eta);
        assert!(r.gram_defect < 1e-8, "{:?}", r);
        assert!(r.isometry_defect < 1e-8, "{:?}", r);
        assert!(r.intertwining_defect < 1e-8, "{:?}", r);
    }

    #[test]
    fn doubling_scales_the_cocycle() {
        let pi = Arc::new(MatRep::suq2_irrep(16, QPoint::half()).unwrap());
        let mut f = Vector::from_element(16, C::new(0.0, 0.0));
        f[0] = C::new(1.0, 0.0);
        let eta = Arc::new(coboundary(pi, &f).unwrap());
        let psi = PsiExact::new(eta.clone()).functional("psi");
        let two = psi.add(&psi).unwrap();
        let g1 = gns_build(&psi, &letters(), 2, 1e-10).unwrap();
        let g2 = gns_build(&two, &letters(), 2, 1e-10).unwrap();
        assert_eq!(g1.rank, g2.rank);
        for l in letters() {
            let a = g1.eta_letter(l).unwrap().norm();
            let b = g2.eta_letter(l).unwrap().norm();
            assert!((b - 2f64.sqrt() * a).abs() < 1e-10);
            assert!((a - eta.value(l).norm()).abs() < 1e-10);
        }
    }
}
