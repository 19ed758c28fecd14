//! pi-eps-cocycles given by their values on generators.

use super::plimit::{core_mask, f_family, romberg_masked, Schedule, Trace};
use crate::algebra::{adjoint_expand, reduce, AlgElt, GenSym, Variant};
use crate::error::{QError, QResult};
use crate::gauss::GaussCocycle;
use crate::hopf::structure::counit;
use crate::repkit::{MatRep, Op, Vector, C};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    PLimit,
}

#[derive(Clone, Debug)]
pub enum Origin {
    Coboundary(Vector),
    Gaussian,
    FromTop { eta_nn: Vector, method: Method },
    Table,
}

#[derive(Clone, Debug)]
pub struct Cocycle {
    pub pi: Arc<MatRep>,
    pub origin: Origin,
    table: BTreeMap<GenSym, Vector>,
    pub trace: Option<Trace>,
}

fn zero(n: usize) -> Vector {
    Vector::from_element(n, C::new(0.0, 0.0))
}

fn eps_letter(g: GenSym) -> f64 {
    if g.counit() {
        1.0
    } else {
        0.0
    }
}

impl Cocycle {
    pub fn from_table(pi: Arc<MatRep>, table: BTreeMap<GenSym, Vector>, origin: Origin) -> QResult<Self> {
        for g in pi.ctx.generators(true) {
            match table.get(&g) {
                Some(v) if v.len() == pi.dim => {}
                _ => return Err(QError::Precondition(format!("cocycle table lacks a value for {}", g))),
            }
        }
        Ok(Cocycle { pi, origin, table, trace: None })
    }

    pub fn dim(&self) -> usize {
        self.pi.dim
    }

    pub fn value(&self, g: GenSym) -> &Vector {
        &self.table[&g]
    }

    pub fn table(&self) -> &BTreeMap<GenSym, Vector> {
        &self.table
    }

    /// `eta(g_1...g_k) = sum_i pi(g_1...g_{i-1}) eta(g_i) eps(g_{i+1}...g_k)`.
    pub fn eval_word(&self, w: &[GenSym]) -> Vector {
        let mut acc = zero(self.dim());
        let mut tail = 1.0;
        for &g in w.iter().rev() {
            acc = self.pi.image(g).matvec(&acc);
            if tail != 0.0 {
                acc += self.value(g) * C::new(tail, 0.0);
            }
            tail *= eps_letter(g);
        }
        acc
    }

    pub fn eval(&self, a: &AlgElt) -> Vector {
        let q = self.pi.q0.value();
        let mut out = zero(self.dim());
        for (w, c) in a.terms() {
            out += self.eval_word(w) * c.eval_f64(q);
        }
        out
    }

    /// `eta` of the product of centered letters of `w`.
    pub fn eval_centered(&self, w: &[GenSym]) -> Vector {
        let Some((&last, rest)) = w.split_last() else {
            return zero(self.dim());
        };
        let mut v = self.value(last).clone();
        for &g in rest.iter().rev() {
            let e = eps_letter(g);
            let pv = self.pi.image(g).matvec(&v);
            v = if e != 0.0 { pv - v * C::new(e, 0.0) } else { pv };
        }
        v
    }

    /// `max || eta(reduce(ab)) - pi(a) eta(b) - eta(a) eps(b) ||` over pairs;
    /// the product is brought to normal form first, so the check sees the
    /// defining relations.
    pub fn identity_defect(&self, pairs: &[(AlgElt, AlgElt)]) -> QResult<f64> {
        self.identity_defect_on(pairs, None)
    }

    /// As `identity_defect`, measured on the masked coordinates only.
    pub fn identity_defect_on(&self, pairs: &[(AlgElt, AlgElt)], mask: Option<&[bool]>) -> QResult<f64> {
        let q0 = self.pi.q0.clone();
        let res = crate::par::map(pairs, |(a, b)| -> QResult<f64> {
            let ab = reduce(&(a * b))?;
            let lhs = self.eval(&ab);
            let rhs = self.pi.apply(a, &self.eval(b)) + self.eval(a) * counit(b, &q0);
            let d = lhs - rhs;
            Ok(match mask {
                None => d.norm(),
                Some(m) => d.iter().zip(m).filter(|(_, &k)| k).map(|(z, _)| z.norm_sqr()).sum::<f64>().sqrt(),
            })
        });
        res.into_iter().try_fold(0.0, |m, r| r.map(|x| f64::max(m, x)))
    }

    /// Largest `||eta(r)||` over the relation catalog.
    pub fn relation_defect(&self) -> f64 {
        let cat = crate::algebra::relation_catalog(self.pi.ctx);
        crate::par::map(&cat, |r| self.eval(&r.elt).norm()).into_iter().fold(0.0, f64::max)
    }

    pub fn max_distance(&self, o: &Cocycle) -> f64 {
        self.max_distance_on(o, None)
    }

    /// Largest distance between generator values, on the masked coordinates.
    pub fn max_distance_on(&self, o: &Cocycle, mask: Option<&[bool]>) -> f64 {
        self.table
            .iter()
            .map(|(g, v)| {
                let d = v - o.value(*g);
                match mask {
                    None => d.norm(),
                    Some(m) => d.iter().zip(m).filter(|(_, &k)| k).map(|(z, _)| z.norm_sqr()).sum::<f64>().sqrt(),
                }
            })
            .fold(0.0, f64::max)
    }
}

/// `eta(a) = pi(a - eps(a)) f`.
pub fn coboundary(pi: Arc<MatRep>, f: &Vector) -> QResult<Cocycle> {
    if f.len() != pi.dim {
        return Err(QError::Precondition(format!("vector of length {} for a {}-dimensional representation", f.len(), pi.dim)));
    }
    let mut t = BTreeMap::new();
    for g in pi.ctx.generators(true) {
        let v = pi.image(g).matvec(f) - f * C::new(eps_letter(g), 0.0);
        t.insert(g, v);
    }
    Cocycle::from_table(pi, t, Origin::Coboundary(f.clone()))
}

/// Gaussian cocycle `sum_j eta_j eps'_j` over the counit representation.
pub fn gaussian_cocycle(c: &GaussCocycle, q0: crate::algebra::QPoint) -> QResult<Cocycle> {
    let d = c.dim();
    let pi = Arc::new(MatRep::trivial(c.ctx, q0, d));
    let mut t = BTreeMap::new();
    for g in c.ctx.generators(true) {
        t.insert(g, c.eval_word(&[g]));
    }
    Cocycle::from_table(pi, t, Origin::Gaussian)
}

fn top_index(pi: &MatRep) -> QResult<usize> {
    if pi.ctx.variant != Variant::SUq || pi.ctx.n < 2 {
        return Err(QError::Precondition("cocycles from eta(u_NN) need SU_q(N), N >= 2".into()));
    }
    Ok(pi.ctx.n)
}

fn solve_checked(m: &Op, rhs: &Vector, what: &str) -> QResult<Vector> {
    let x = m.solve(rhs)?;
    let r = (m.matvec(&x) - rhs).norm();
    if !(r <= 1e-9 * rhs.norm().max(1.0)) {
        return Err(QError::Numeric(format!("{}: solve residual {:.3e}", what, r)));
    }
    Ok(x)
}

/// Starred values from `u*_jk = (-q)^{k-j} D^{jk}`, evaluated through the
/// unstarred table.
fn fill_starred(pi: &Arc<MatRep>, t: &mut BTreeMap<GenSym, Vector>) -> QResult<()> {
    let ctx = pi.ctx;
    let partial = Cocycle { pi: pi.clone(), origin: Origin::Table, table: t.clone(), trace: None };
    for g in ctx.generators(false) {
        let e = adjoint_expand(&AlgElt::gen(ctx, g.star())?)?;
        if e.has_star() {
            return Err(QError::Numeric(format!("adjoint expansion of {} kept a star", g.star())));
        }
        let v = partial.eval(&e);
        t.insert(g.star(), v);
    }
    Ok(())
}

/// Cocycle determined by `eta(u_NN)`, either from the linear relations it
/// must satisfy or as the limit of the coboundaries of
/// `f_p = -(I - p pi(u_NN))^{-1} eta(u_NN)`.
pub fn cocycle_from_eta_nn(pi: Arc<MatRep>, eta_nn: &Vector, method: Method, sched: &Schedule) -> QResult<Cocycle> {
    let n = top_index(&pi)?;
    if eta_nn.len() != pi.dim {
        return Err(QError::Precondition("eta(u_NN) has the wrong length".into()));
    }
    let q = pi.q0.value();
    let dim = pi.dim;
    let a = pi.image(GenSym::u(n, n)).clone();
    match method {
        Method::ClosedForm => {
            let mut t: BTreeMap<GenSym, Vector> = BTreeMap::new();
            t.insert(GenSym::u(n, n), eta_nn.clone());
            let iq = Op::identity(dim).sub(&a.scale(C::new(q, 0.0)));
            for k in 1..n {
                for g in [GenSym::u(k, n), GenSym::u(n, k)] {
                    let rhs = -pi.image(g).matvec(eta_nn);
                    t.insert(g, solve_checked(&iq, &rhs, "I - q pi(u_NN)")?);
                }
            }
            let am1 = a.sub(&Op::identity(dim));
            let gap = C::new(1.0 / q - q, 0.0);
            for j in 1..n {
                for k in 1..n {
                    let mut rhs = pi.image(GenSym::u(j, k)).matvec(eta_nn);
                    if j == k {
                        rhs -= eta_nn;
                    }
                    rhs += pi.image(GenSym::u(j, n)).matvec(&t[&GenSym::u(n, k)]) * gap;
                    t.insert(GenSym::u(j, k), solve_checked(&am1, &rhs, "pi(u_NN) - I")?);
                }
            }
            fill_starred(&pi, &mut t)?;
            Cocycle::from_table(pi, t, Origin::FromTop { eta_nn: eta_nn.clone(), method })
        }
        Method::PLimit => {
            let fam = f_family(&pi, n, eta_nn, sched)?;
            let gens = pi.ctx.generators(true);
            let ms: Vec<u32> = fam.iter().map(|x| x.0).collect();
            let stacked: Vec<Vector> = fam
                .iter()
                .map(|(_, f)| {
                    let mut s = Vector::from_element(dim * gens.len(), C::new(0.0, 0.0));
                    for (i, g) in gens.iter().enumerate() {
                        let v = pi.image(*g).matvec(f) - f * C::new(eps_letter(*g), 0.0);
                        s.rows_mut(i * dim, dim).copy_from(&v);
                    }
                    s
                })
                .collect();
            let mask = core_mask(&pi.depth, sched.core);
            let (lim, trace) = romberg_masked(&ms, &stacked, mask.as_deref(), sched.tol);
            if !trace.converged {
                return Err(QError::Convergence(format!(
                    "p-limit of the cocycle did not settle: last step {:.3e}",
                    trace.steps.last().cloned().unwrap_or(f64::NAN)
                )));
            }
            let mut t = BTreeMap::new();
            for (i, g) in gens.iter().enumerate() {
                t.insert(*g, lim.rows(i * dim, dim).into_owned());
            }
            let mut c = Cocycle::from_table(pi, t, Origin::FromTop { eta_nn: eta_nn.clone(), method })?;
            c.trace = Some(trace);
            Ok(c)
        }
    }
}

/// `||f||_pi = sqrt(sum_j ||pi(1 - u_jj) f||^2)`.
pub fn h_pi_norm(pi: &MatRep, f: &Vector) -> f64 {
    let n = pi.ctx.n;
    (1..=n)
        .map(|j| (f - pi.image(GenSym::u(j, j)).matvec(f)).norm_squared())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ctx, QPoint};
    use crate::hopf::{k1_battery, BatterySpec};

    fn e(dim: usize, k: usize) -> Vector {
        let mut v = zero(dim);
        v[k] = C::new(1.0, 0.0);
        v
    }

    #[test]
    fn h_pi_norm_oracle() {
        let pi = MatRep::suq2_irrep(32, QPoint::half()).unwrap();
        assert!((h_pi_norm(&pi, &e(32, 0)) - 2.75f64.sqrt()).abs() < 1e-15);
        assert_eq!(h_pi_norm(&pi, &zero(32)), 0.0);
    }

    #[test]
    fn coboundary_basics() {
        let pi = Arc::new(MatRep::suq2_irrep(16, QPoint::half()).unwrap());
        let f = e(16, 1) + e(16, 3) * C::new(0.0, 2.0);
        let c = coboundary(pi.clone(), &f).unwrap();
        assert_eq!(c.eval(&AlgElt::one(Ctx::suq(2))).norm(), 0.0);
        let want = pi.image(GenSym::u(2, 2)).matvec(&f) - &f;
        assert!((c.value(GenSym::u(2, 2)) - want).norm() < 1e-15);
        let triv = coboundary(Arc::new(MatRep::trivial(Ctx::suq(2), QPoint::half(), 2)), &e(2, 0)).unwrap();
        assert!(triv.table().values().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn closed_form_recovers_coboundary() {
        let pi = Arc::new(MatRep::suq2_irrep(40, QPoint::half()).unwrap());
        let g = e(40, 0) - e(40, 2) * C::new(0.5, 0.0);
        let cob = coboundary(pi.clone(), &g).unwrap();
        let top = cob.value(GenSym::u(2, 2)).clone();
        let cf = cocycle_from_eta_nn(pi.clone(), &top, Method::ClosedForm, &Schedule::default()).unwrap();
        assert!(cf.max_distance(&cob) < 1e-12, "{}", cf.max_distance(&cob));
        assert!(cf.relation_defect() < 1e-12);
        let zero_top = cocycle_from_eta_nn(pi, &zero(40), Method::ClosedForm, &Schedule::default()).unwrap();
        assert!(zero_top.table().values().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn routes_agree_on_irrep() {
        let m = 4096;
        let pi = Arc::new(MatRep::suq2_irrep(m, QPoint::half()).unwrap());
        let top = e(m, 0);
        let sched = Schedule { core: Some(32), ..Schedule::default() };
        let cf = cocycle_from_eta_nn(pi.clone(), &top, Method::ClosedForm, &sched).unwrap();
        let pl = cocycle_from_eta_nn(pi.clone(), &top, Method::PLimit, &sched).unwrap();
        let mask = core_mask(&pi.depth, sched.core).unwrap();
        let d = cf.max_distance_on(&pl, Some(&mask));
        assert!(d < 1e-8, "{}", d);
        assert!((cf.value(GenSym::u(1, 1))[0].re - 0.25).abs() < 1e-12);
        let spec = BatterySpec { max_degree: 1, generators: vec![], count: 6, seed: 3 };
        let b = k1_battery(Ctx::suq(2), &spec).unwrap();
        let pairs: Vec<_> = b.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).take(60).collect();
        assert!(cf.identity_defect(&pairs).unwrap() < 1e-10);
    }
}
