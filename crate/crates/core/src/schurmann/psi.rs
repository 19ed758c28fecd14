//! The two evaluation routes for `psi = lim <f_p, pi(P(.)) f_p>`.

use super::cocycle::Cocycle;
use super::plimit::{romberg_scalar, Schedule, Trace};
use crate::algebra::{AlgElt, GenSym, Word};
use crate::error::{QError, QResult};
use crate::hopf::structure::{basis_extension, counit, counit_word, directions, eps_prime_word, proj_p};
use crate::hopf::{split_k2, Flags, Functional};
use crate::repkit::{MatRep, Vector, C};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

fn star_reverse(w: &[GenSym]) -> Word {
    w.iter().rev().map(|g| g.star()).collect()
}

/// `psi(a) = sum_i <eta(a_i*), eta(b_i)>` over a splitting of `P(a)` into
/// products of two elements of K_1. Word values are cached.
pub struct PsiExact {
    pub eta: Arc<Cocycle>,
    cache: Mutex<HashMap<Word, C>>,
}

impl PsiExact {
    pub fn new(eta: Arc<Cocycle>) -> Arc<Self> {
        Arc::new(PsiExact { eta, cache: Mutex::new(HashMap::new()) })
    }

    pub fn word(&self, w: &[GenSym]) -> QResult<C> {
        if let Some(v) = self.cache.lock().unwrap().get(w) {
            return Ok(*v);
        }
        let ctx = self.eta.pi.ctx;
        let q = self.eta.pi.q0.value();
        let x = proj_p(&AlgElt::word(ctx, w.to_vec(), crate::algebra::QCoeff::one()));
        let mut v = C::new(0.0, 0.0);
        for t in split_k2(&x)? {
            let left = self.eta.eval_centered(&star_reverse(&t.a));
            let right = self.eta.eval_centered(&t.b);
            v += t.coef.eval_f64(q) * left.dotc(&right);
        }
        self.cache.lock().unwrap().insert(w.to_vec(), v);
        Ok(v)
    }

    pub fn eval(&self, a: &AlgElt) -> QResult<C> {
        let q = self.eta.pi.q0.value();
        let mut s = C::new(0.0, 0.0);
        for (w, c) in a.terms() {
            s += c.eval_f64(q) * self.word(w)?;
        }
        Ok(s)
    }

    /// As a `Functional`; evaluation failures surface as NaN.
    pub fn functional(self: &Arc<Self>, desc: impl Into<String>) -> Functional {
        let me = self.clone();
        let pi = &self.eta.pi;
        Functional::new(pi.ctx, pi.q0.clone(), desc, Flags::generating(), move |w| {
            me.word(w).unwrap_or(C::new(f64::NAN, f64::NAN))
        })
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiValue {
    pub value: C,
    /// Largest single term over the result, at the finest p.
    pub conditioning: f64,
    pub trace: Trace,
}

/// The limit route over a family `f_p`.
pub struct PsiPLimit {
    pub pi: Arc<MatRep>,
    pub fam: Vec<(u32, Vector)>,
    pub sched: Schedule,
    norms: Vec<f64>,
    on_d: Vec<Vec<C>>,
}

impl PsiPLimit {
    pub fn new(pi: Arc<MatRep>, fam: Vec<(u32, Vector)>, sched: Schedule) -> Self {
        let ctx = pi.ctx;
        let ds = basis_extension(ctx);
        let norms = fam.iter().map(|(_, f)| f.norm_squared()).collect();
        let on_d = fam.iter().map(|(_, f)| ds.iter().map(|d| f.dotc(&pi.apply(d, f))).collect()).collect();
        PsiPLimit { pi, fam, sched, norms, on_d }
    }

    pub fn from_top(pi: Arc<MatRep>, eta_nn: &Vector, sched: &Schedule) -> QResult<Self> {
        let fam = super::plimit::f_family(&pi, pi.ctx.n, eta_nn, sched)?;
        Ok(PsiPLimit::new(pi, fam, sched.clone()))
    }

    /// `<f, pi(w) f> - eps(w) ||f||^2 - sum_k eps'_k(w) <f, pi(d_k) f>` at the
    /// i-th p, with the largest term magnitude.
    fn word_at(&self, i: usize, w: &[GenSym]) -> (C, f64) {
        let ctx = self.pi.ctx;
        let f = &self.fam[i].1;
        let a = f.dotc(&self.pi.apply_word(w, f));
        let e = counit_word(w) * self.norms[i];
        let mut v = a - e;
        let mut big = a.norm().max(e.abs());
        for (k, j) in directions(ctx).enumerate() {
            let d = eps_prime_word(ctx, w, j) * self.on_d[i][k];
            big = big.max(d.norm());
            v -= d;
        }
        (v, big)
    }

    pub fn eval(&self, a: &AlgElt) -> QResult<PsiValue> {
        let q = self.pi.q0.value();
        let mut vals = Vec::with_capacity(self.fam.len());
        let mut big = 0.0;
        for i in 0..self.fam.len() {
            let mut s = C::new(0.0, 0.0);
            let mut b = 0.0f64;
            for (w, c) in a.terms() {
                let cv = c.eval_f64(q);
                let (x, m) = self.word_at(i, w);
                s += cv * x;
                b = b.max(cv.norm() * m);
            }
            vals.push(s);
            big = b;
        }
        let ms: Vec<u32> = self.fam.iter().map(|x| x.0).collect();
        let (value, trace) = romberg_scalar(&ms, &vals, self.sched.tol);
        if !trace.converged {
            return Err(QError::Convergence(format!(
                "psi p-limit did not settle: last step {:.3e}",
                trace.steps.last().cloned().unwrap_or(f64::NAN)
            )));
        }
        Ok(PsiValue { value, conditioning: big / value.norm().max(1e-300), trace })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub pairs: usize,
    pub max_defect: f64,
    pub ok: bool,
}

/// Largest `|psi(a*b) - psi(a*)eps(b) - eps(a*)psi(b) - <eta(a), eta(b)>|`.
pub fn triple_check(eta: &Cocycle, psi: &Functional, pairs: &[(AlgElt, AlgElt)], tol: f64) -> TripleReport {
    let q0 = eta.pi.q0.clone();
    let d = crate::par::map(pairs, |(a, b)| {
        let s = a.adjoint();
        let lhs = psi.eval(&(&s * b)) - psi.eval(&s) * counit(b, &q0) - counit(&s, &q0) * psi.eval(b);
        (lhs - eta.eval(a).dotc(&eta.eval(b))).norm()
    })
    .into_iter()
    .fold(0.0, f64::max);
    TripleReport { pairs: pairs.len(), max_defect: d, ok: d <= tol }
}

/// `max |psi(P(a)) - psi(a)|`.
pub fn projection_defect(psi: &Functional, battery: &[AlgElt]) -> f64 {
    crate::par::map(battery, |a| (psi.eval(&proj_p(a)) - psi.eval(a)).norm()).into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ctx, QPoint};
    use crate::hopf::{k1_battery, BatterySpec};
    use crate::schurmann::cocycle::{coboundary, cocycle_from_eta_nn, Method};

    fn e0(dim: usize) -> Vector {
        let mut v = Vector::from_element(dim, C::new(0.0, 0.0));
        v[0] = C::new(1.0, 0.0);
        v
    }

    #[test]
    fn coboundary_psi_matches_direct_formula() {
        let pi = Arc::new(MatRep::suq2_irrep(24, QPoint::half()).unwrap());
        let f = e0(24) + Vector::from_fn(24, |i, _| if i == 2 { C::new(0.0, 0.5) } else { C::new(0.0, 0.0) });
        let eta = Arc::new(coboundary(pi.clone(), &f).unwrap());
        let psi = PsiExact::new(eta.clone());
        let c = Ctx::suq(2);
        let b = k1_battery(c, &BatterySpec::new(2)).unwrap();
        for a in &b {
            let direct = f.dotc(&pi.apply(&proj_p(a), &f));
            assert!((psi.eval(a).unwrap() - direct).norm() < 1e-12, "{}", a);
        }
        assert_eq!(psi.eval(&AlgElt::one(c)).unwrap(), C::new(0.0, 0.0));
    }

    #[test]
    fn routes_agree_on_small_battery() {
        let m = 1 << 16;
        let pi = Arc::new(MatRep::suq2_irrep(m, QPoint::half()).unwrap());
        let sched = Schedule { m_min: 3, m_max: 10, tol: 1e-8, core: None };
        let eta = Arc::new(cocycle_from_eta_nn(pi.clone(), &e0(m), Method::ClosedForm, &sched).unwrap());
        let ex = PsiExact::new(eta.clone());
        let pl = PsiPLimit::from_top(pi, &e0(m), &sched).unwrap();
        let c = Ctx::suq(2);
        let b = k1_battery(c, &BatterySpec::new(2)).unwrap();
        for a in &b {
            let x = ex.eval(a).unwrap();
            let y = pl.eval(a).unwrap();
            assert!((x - y.value).norm() < 1e-6, "{}: {} vs {} ({:?})", a, x, y.value, y.trace);
        }
        let psi = ex.functional("psi");
        let pairs: Vec<_> = b.iter().take(12).flat_map(|x| b.iter().take(12).map(move |y| (x.clone(), y.clone()))).collect();
        assert!(triple_check(&eta, &psi, &pairs, 1e-8).ok);
        assert!(projection_defect(&psi, &b) < 1e-12);
    }
}
