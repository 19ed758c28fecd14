//! Assembly `psi = psi_G + sum_n psi_n` along the subgroup chain.

use super::cocycle::{cocycle_from_eta_nn, Cocycle, Method, Origin};
use super::plimit::Schedule;
use super::psi::PsiExact;
use crate::algebra::{AlgElt, Ctx, GenSym, QPoint, Variant};
use crate::error::{QError, QResult};
use crate::gauss::{gaussian_functional, GaussParams};
use crate::hopf::{Flags, Functional, Morphism};
use crate::repkit::{decompose, Decomposition, MatRep, Vector, C};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Per-level values of `eta(u_nn)`, in the coordinates of the input
/// representation; each must lie in the span of its level.
#[derive(Clone, Debug, Default)]
pub struct EtaSpec {
    pub per_level: BTreeMap<usize, Vector>,
}

impl EtaSpec {
    pub fn single(n: usize, v: Vector) -> Self {
        EtaSpec { per_level: [(n, v)].into_iter().collect() }
    }
}

pub struct HuntLevel {
    pub n: usize,
    pub dim: usize,
    /// Cocycle of the level as a representation of SU_q(n).
    pub eta: Arc<Cocycle>,
    pub psi_small: Arc<PsiExact>,
    /// `psi_small o s_{n,N}`.
    pub psi: Functional,
    /// The cocycle pulled back to SU_q(N) on the level subspace.
    pub eta_ambient: Arc<Cocycle>,
    pub injectivity: f64,
    /// Distance of `eta_nn` from the level subspace.
    pub span_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub n: usize,
    pub dim: usize,
    pub injectivity: f64,
    pub span_residual: f64,
    pub living_on: Option<f64>,
    pub irreducible: Option<bool>,
}

pub struct HuntDecomposition {
    pub ctx: Ctx,
    pub q0: QPoint,
    pub gauss: GaussParams,
    pub psi_g: Functional,
    pub levels: Vec<HuntLevel>,
    pub decomposition: Option<Decomposition>,
    pub psi: Functional,
}

#[derive(Clone, Debug)]
pub struct HuntOptions {
    pub tol: f64,
    pub method: Method,
    pub sched: Schedule,
}

impl Default for HuntOptions {
    fn default() -> Self {
        HuntOptions { tol: 1e-8, method: Method::ClosedForm, sched: Schedule::default() }
    }
}

fn lift_table(small: &Cocycle, big: Ctx) -> BTreeMap<GenSym, Vector> {
    let n = small.pi.ctx.n;
    let zero = Vector::from_element(small.dim(), C::new(0.0, 0.0));
    big.generators(true)
        .into_iter()
        .map(|g| {
            let inside = matches!(g.indices(), Some((j, k)) if j <= n && k <= n);
            (g, if inside { small.value(g).clone() } else { zero.clone() })
        })
        .collect()
}

/// Functional on SU_q(N) given by evaluating through `s_{n,N}`.
fn pulled_back(psi: Arc<PsiExact>, n: usize, big: Ctx, q0: QPoint) -> QResult<Functional> {
    if n == big.n {
        return Ok(psi.functional(format!("psi_{}", n)));
    }
    let m = Morphism::s_chain(n, big.n)?;
    let small = Ctx::suq(n);
    Ok(Functional::new(big, q0, format!("psi_{} o s_{{{},{}}}", n, n, big.n), Flags::generating(), move |w| {
        let a = AlgElt::word(big, w.to_vec(), crate::algebra::QCoeff::one());
        match m.apply(&a) {
            Ok(img) => psi.eval(&img.with_ctx(small)).unwrap_or(C::new(f64::NAN, f64::NAN)),
            Err(_) => C::new(f64::NAN, f64::NAN),
        }
    }))
}

/// Decomposes `pi` (when given), builds one cocycle and one functional per
/// level from `spec`, and adds the gaussian part.
pub fn hunt_decompose(
    ctx: Ctx,
    q0: QPoint,
    pi: Option<&MatRep>,
    spec: &EtaSpec,
    gauss: &GaussParams,
    opts: &HuntOptions,
) -> QResult<HuntDecomposition> {
    if ctx.variant != Variant::SUq {
        return Err(QError::Precondition("hunt_decompose works on SU_q(N); use uqn::uq_hunt for U_q(N)".into()));
    }
    let psi_g = gaussian_functional(ctx, q0.clone(), gauss)?;
    let mut levels = Vec::new();
    let mut decomposition = None;
    if let Some(pi) = pi {
        if pi.ctx != ctx {
            return Err(QError::ContextMismatch(format!("representation of {:?} for {:?}", pi.ctx, ctx)));
        }
        let d = decompose(pi, opts.tol)?;
        for (&n, v) in &spec.per_level {
            if v.len() != pi.dim {
                return Err(QError::Precondition(format!("eta for level {} has length {} != {}", n, v.len(), pi.dim)));
            }
            if n < 2 {
                return Err(QError::Precondition("level 1 carries only gaussian data; pass it as GaussParams".into()));
            }
            let lv = d.level(n).ok_or_else(|| QError::Precondition(format!("decomposition has no level {}", n)))?;
            let coords: Vector = lv.basis.adjoint() * v;
            let back: Vector = &lv.basis * &coords;
            let span_residual = (v - back).norm();
            if span_residual > opts.tol * v.norm().max(1.0) {
                return Err(QError::Precondition(format!(
                    "eta for level {} leaves the level subspace (residual {:.3e})",
                    n, span_residual
                )));
            }
            let rep = Arc::new(lv.rep.clone());
            let eta = Arc::new(cocycle_from_eta_nn(rep, &coords, opts.method, &opts.sched)?);
            let psi_small = PsiExact::new(eta.clone());
            let psi = pulled_back(psi_small.clone(), n, ctx, q0.clone())?;
            let amb = Arc::new(lv.ambient.clone());
            let eta_ambient = Arc::new(Cocycle::from_table(amb, lift_table(&eta, ctx), Origin::Table)?);
            levels.push(HuntLevel {
                n,
                dim: lv.rep.dim,
                eta,
                psi_small,
                psi,
                eta_ambient,
                injectivity: lv.injectivity.unwrap_or(0.0),
                span_residual,
            });
        }
        decomposition = Some(d);
    } else if !spec.per_level.is_empty() {
        return Err(QError::Precondition("level data without a representation".into()));
    }
    let mut psi = psi_g.clone();
    for l in &levels {
        psi = psi.add(&l.psi)?;
    }
    psi.desc = "psi".into();
    Ok(HuntDecomposition { ctx, q0, gauss: gauss.clone(), psi_g, levels, decomposition, psi })
}

impl HuntLevel {
    /// Largest `|psi_n(a r b)|` over kernel generators r of `s_{n,N}` and
    /// words a, b of degree at most `deg`, with psi_n computed from the
    /// SU_q(N) cocycle on the level subspace (not by substitution).
    pub fn living_on_residual(&self, deg: usize) -> QResult<f64> {
        let big = self.eta_ambient.pi.ctx;
        if self.n == big.n {
            return Ok(0.0);
        }
        let ker = Morphism::s_chain(self.n, big.n)?.kernel_generators()?;
        let letters = big.generators(true);
        let mut sides = vec![AlgElt::one(big)];
        sides.extend(
            crate::hopf::battery::words_up_to(&letters, deg)
                .into_iter()
                .map(|w| AlgElt::word(big, w, crate::algebra::QCoeff::one())),
        );
        let psi = PsiExact::new(self.eta_ambient.clone());
        let mut items = Vec::new();
        for r in &ker {
            for a in &sides {
                items.push(a * r);
                items.push(r * a);
            }
        }
        let vals = crate::par::map(&items, |x| psi.eval(x).map(|v| v.norm()));
        vals.into_iter().try_fold(0.0, |m, r| r.map(|x| f64::max(m, x)))
    }

    /// True when `I - pi_n(u_nn)` is injective on the level and the level
    /// representation splits off nothing below n.
    pub fn irreducible(&self, tol: f64) -> QResult<bool> {
        let d = decompose(&self.eta.pi, tol)?;
        Ok(self.injectivity > tol && d.levels.len() == 1 && d.levels[0].n == self.n)
    }
}

impl HuntDecomposition {
    pub fn summary(&self, living_deg: Option<usize>, tol: f64) -> QResult<Vec<LevelSummary>> {
        self.levels
            .iter()
            .map(|l| {
                Ok(LevelSummary {
                    n: l.n,
                    dim: l.dim,
                    injectivity: l.injectivity,
                    span_residual: l.span_residual,
                    living_on: living_deg.map(|d| l.living_on_residual(d)).transpose()?,
                    irreducible: Some(l.irreducible(tol)?),
                })
            })
            .collect()
    }

    /// `max |psi - psi_G - sum psi_n|` on the battery.
    pub fn sum_defect(&self, battery: &[AlgElt]) -> f64 {
        crate::par::map(battery, |a| {
            let parts: C = self.levels.iter().map(|l| l.psi.eval(a)).sum::<C>() + self.psi_g.eval(a);
            (self.psi.eval(a) - parts).norm()
        })
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `max |psi_L(P(a)) - psi_L(a)|` for the jump part.
    pub fn jump_projection_defect(&self, battery: &[AlgElt]) -> f64 {
        crate::par::map(battery, |a| {
            let pa = crate::hopf::proj_p(a);
            self.levels.iter().map(|l| l.psi.eval(&pa) - l.psi.eval(a)).sum::<C>().norm()
        })
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{k1_battery, BatterySpec};

    fn e(dim: usize, i: usize) -> Vector {
        let mut v = Vector::from_element(dim, C::new(0.0, 0.0));
        v[i] = C::new(1.0, 0.0);
        v
    }

    #[test]
    fn gauss_only() {
        let c = Ctx::suq(3);
        let g = GaussParams { r: vec![0.5, -1.0], rr: vec![vec![2.0, 1.0], vec![1.0, 1.0]] };
        let h = hunt_decompose(c, QPoint::half(), None, &EtaSpec::default(), &g, &HuntOptions::default()).unwrap();
        let b = k1_battery(c, &BatterySpec::new(2)).unwrap();
        for a in &b {
            assert!((h.psi.eval(a) - h.psi_g.eval(a)).norm() < 1e-15);
        }
    }

    #[test]
    fn block_level_lives_on_suq2() {
        let q = QPoint::half();
        let rho = MatRep::suq2_irrep(8, q.clone()).unwrap();
        let c = Ctx::suq(3);
        let pi = MatRep::direct_sum(&[MatRep::trivial(c, q.clone(), 1), MatRep::block_embed(&rho, 3, 0).unwrap()]).unwrap();
        let g = GaussParams { r: vec![0.25, 0.5], rr: vec![vec![1.0, 0.0], vec![0.0, 0.0]] };
        let spec = EtaSpec::single(2, e(9, 1));
        let h = hunt_decompose(c, q, Some(&pi), &spec, &g, &HuntOptions::default()).unwrap();
        assert_eq!(h.levels.len(), 1);
        let l = &h.levels[0];
        assert_eq!((l.n, l.dim), (2, 8));
        assert!(l.living_on_residual(1).unwrap() < 1e-10);
        assert!(l.irreducible(1e-8).unwrap());
        for (j, d) in crate::hopf::basis_extension(c).iter().enumerate() {
            assert!((h.psi.eval(d) - C::new(g.r[j], 0.0)).norm() < 1e-12);
        }
        let b = k1_battery(c, &BatterySpec::new(2)).unwrap();
        assert!(h.sum_defect(&b) < 1e-14);
        assert!(h.jump_projection_defect(&b) < 1e-10);
    }
}
