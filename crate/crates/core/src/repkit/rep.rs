//! Truncated *-representations.

use super::op::{Op, Vector, C, ONE, ZERO};
use crate::algebra::{relation_catalog, AlgElt, Ctx, GenSym, QPoint, Variant};
use crate::error::{QError, QResult};
use crate::hopf::Morphism;
use serde::Serialize;
use std::collections::BTreeMap;

/// Depth of a basis vector that is not affected by truncation.
pub const DEEP: u32 = u32::MAX;

pub const CONV_CAP: usize = 4096;

/// Generator images on a finite truncation. Every starred generator maps to
/// the adjoint of its partner.
///
/// `depth[i]` counts how many raising steps basis vector i can take before
/// hitting the cutoff; a relation of degree d holds exactly on the span of
/// the basis vectors of depth at least d/2.
#[derive(Clone, Debug)]
pub struct MatRep {
    pub ctx: Ctx,
    pub q0: QPoint,
    pub dim: usize,
    gens: BTreeMap<GenSym, Op>,
    pub depth: Vec<u32>,
    pub tag: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub name: String,
    pub degree: usize,
    pub interior: f64,
    pub full: f64,
}

impl MatRep {
    /// Builds from images of the unstarred generators (and `Dinv` for U_q).
    pub fn from_unstarred(ctx: Ctx, q0: QPoint, images: BTreeMap<GenSym, Op>, depth: Vec<u32>, tag: impl Into<String>) -> QResult<Self> {
        let dim = depth.len();
        let mut gens = BTreeMap::new();
        for g in ctx.generators(false) {
            let m = images
                .get(&g)
                .ok_or_else(|| QError::Precondition(format!("missing image of {}", g)))?;
            if m.dim() != dim {
                return Err(QError::Precondition(format!("image of {} has dimension {} != {}", g, m.dim(), dim)));
            }
            gens.insert(g.star(), m.adjoint());
            gens.insert(g, m.clone());
        }
        Ok(MatRep { ctx, q0, dim, gens, depth, tag: tag.into() })
    }

    pub fn image(&self, g: GenSym) -> &Op {
        match g {
            GenSym::Dinv | GenSym::DinvStar if self.ctx.variant == Variant::SUq => panic!("Dinv in SU_q"),
            _ => &self.gens[&g],
        }
    }

    pub fn min_depth(&self) -> u32 {
        self.depth.iter().cloned().min().unwrap_or(DEEP)
    }

    /// One-dimensional counit representation (or its multiple on `dim` copies).
    pub fn trivial(ctx: Ctx, q0: QPoint, dim: usize) -> Self {
        let mut im = BTreeMap::new();
        for g in ctx.generators(false) {
            let v = if g.counit() { ONE } else { ZERO };
            im.insert(g, Op::scalar(dim, v));
        }
        MatRep::from_unstarred(ctx, q0, im, vec![DEEP; dim], "trivial").unwrap()
    }

    /// The SU_q(2) representation with `alpha e_k = sqrt(1 - q^{2k}) e_{k-1}`,
    /// `gamma e_k = q^k e_k` on span{e_0, ..., e_{M-1}}.
    pub fn suq2_irrep(m: usize, q0: QPoint) -> QResult<Self> {
        if m < 2 {
            return Err(QError::Precondition("suq2_irrep needs M >= 2".into()));
        }
        let q = q0.value();
        let alpha = Op::from_triplets(m, (1..m).map(|k| (k - 1, k, C::new((1.0 - q.powi(2 * k as i32)).sqrt(), 0.0))));
        let gamma = Op::diag(&(0..m).map(|k| C::new(q.powi(k as i32), 0.0)).collect::<Vec<_>>());
        let ctx = Ctx::suq(2);
        let mut im = BTreeMap::new();
        im.insert(GenSym::u(1, 1), alpha.clone());
        im.insert(GenSym::u(1, 2), gamma.adjoint().scale(C::new(-q, 0.0)));
        im.insert(GenSym::u(2, 1), gamma);
        im.insert(GenSym::u(2, 2), alpha.adjoint());
        let depth = (0..m).map(|k| (m - 1 - k) as u32).collect();
        MatRep::from_unstarred(ctx, q0, im, depth, format!("suq2(M={})", m))
    }

    /// One-dimensional character `u_jj -> e^{i theta_j}`; SU_q takes
    /// theta_2..theta_N, U_q takes theta_1..theta_N.
    pub fn torus_char(ctx: Ctx, q0: QPoint, theta: &[f64]) -> QResult<Self> {
        let n = ctx.n;
        let angles: Vec<f64> = match ctx.variant {
            Variant::SUq if theta.len() == n - 1 => {
                let mut a = vec![-theta.iter().sum::<f64>()];
                a.extend_from_slice(theta);
                a
            }
            Variant::Uq if theta.len() == n => theta.to_vec(),
            _ => return Err(QError::Precondition(format!("wrong number of angles for {:?}", ctx))),
        };
        let mut im = BTreeMap::new();
        for g in ctx.generators(false) {
            let v = match g {
                GenSym::U(j, k) if j == k => C::from_polar(1.0, angles[j as usize - 1]),
                GenSym::Dinv => C::from_polar(1.0, -angles.iter().sum::<f64>()),
                _ => ZERO,
            };
            im.insert(g, Op::scalar(1, v));
        }
        MatRep::from_unstarred(ctx, q0, im, vec![DEEP], format!("torus{:?}", theta))
    }

    /// Places an SU_q(n) representation in the rows/columns m+1..m+n of
    /// SU_q(N); the other diagonal entries act as identity.
    pub fn block_embed(inner: &MatRep, big: usize, m: usize) -> QResult<Self> {
        let n = inner.ctx.n;
        if inner.ctx.variant != Variant::SUq || m + n > big {
            return Err(QError::Precondition(format!("block [{}, {}] does not fit in SU_q({})", m + 1, m + n, big)));
        }
        let ctx = Ctx::suq(big);
        let mut im = BTreeMap::new();
        for j in 1..=big {
            for k in 1..=big {
                let inside = |x: usize| x > m && x <= m + n;
                let op = if inside(j) && inside(k) {
                    inner.image(GenSym::u(j - m, k - m)).clone()
                } else if j == k {
                    Op::identity(inner.dim)
                } else {
                    Op::zeros(inner.dim)
                };
                im.insert(GenSym::u(j, k), op);
            }
        }
        MatRep::from_unstarred(ctx, inner.q0.clone(), im, inner.depth.clone(), format!("block[{},{}]({})", m + 1, m + n, inner.tag))
    }

    /// `(rho_1 * rho_2)(u_jk) = sum_s rho_1(u_js) (x) rho_2(u_sk)`.
    pub fn conv_product(a: &MatRep, b: &MatRep) -> QResult<Self> {
        if a.ctx != b.ctx {
            return Err(QError::ContextMismatch("conv_product of different algebras".into()));
        }
        let dim = a.dim * b.dim;
        if dim > CONV_CAP {
            return Err(QError::CapExceeded(format!("tensor dimension {} > {}", dim, CONV_CAP)));
        }
        let n = a.ctx.n;
        let mut im = BTreeMap::new();
        for j in 1..=n {
            for k in 1..=n {
                let mut acc = Op::zeros(dim);
                for s in 1..=n {
                    acc = acc.add(&a.image(GenSym::u(j, s)).kron(b.image(GenSym::u(s, k))));
                }
                im.insert(GenSym::u(j, k), acc);
            }
        }
        if a.ctx.variant == Variant::Uq {
            im.insert(GenSym::Dinv, a.image(GenSym::Dinv).kron(b.image(GenSym::Dinv)));
        }
        let mut depth = Vec::with_capacity(dim);
        for x in &a.depth {
            for y in &b.depth {
                depth.push((*x).min(*y));
            }
        }
        MatRep::from_unstarred(a.ctx, a.q0.clone(), im, depth, format!("({} * {})", a.tag, b.tag))
    }

    pub fn direct_sum(parts: &[MatRep]) -> QResult<Self> {
        let first = parts.first().ok_or_else(|| QError::Precondition("empty direct sum".into()))?;
        if parts.iter().any(|p| p.ctx != first.ctx) {
            return Err(QError::ContextMismatch("direct sum of different algebras".into()));
        }
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let mut im = BTreeMap::new();
        for g in first.ctx.generators(false) {
            let mut t = Vec::new();
            let mut off = 0;
            for p in parts {
                t.extend(p.image(g).0.triplet_iter().map(|(i, j, v)| (i + off, j + off, *v)));
                off += p.dim;
            }
            im.insert(g, Op::from_triplets(dim, t));
        }
        let depth = parts.iter().flat_map(|p| p.depth.iter().cloned()).collect();
        let tag = parts.iter().map(|p| p.tag.clone()).collect::<Vec<_>>().join(" + ");
        MatRep::from_unstarred(first.ctx, first.q0.clone(), im, depth, tag)
    }

    /// `pi o m` for a morphism into this representation's algebra.
    pub fn pullback(&self, m: &Morphism) -> QResult<Self> {
        if m.target() != self.ctx {
            return Err(QError::ContextMismatch(format!("{} does not land in {:?}", m.name, self.ctx)));
        }
        let src = m.source();
        let mut im = BTreeMap::new();
        for g in src.generators(false) {
            let img = m.apply(&AlgElt::gen(src, g)?)?;
            im.insert(g, self.evaluate(&img)?);
        }
        MatRep::from_unstarred(src, self.q0.clone(), im, self.depth.clone(), format!("{} o {}", self.tag, m.name))
    }

    pub fn word_op(&self, w: &[GenSym]) -> Op {
        let mut acc = Op::identity(self.dim);
        for &g in w {
            acc = acc.mul(self.image(g));
        }
        acc
    }

    pub fn evaluate(&self, a: &AlgElt) -> QResult<Op> {
        if a.ctx() != self.ctx {
            return Err(QError::ContextMismatch(format!("{:?} element in {:?} representation", a.ctx(), self.ctx)));
        }
        let q = self.q0.value();
        let mut acc = Op::zeros(self.dim);
        for (w, c) in a.terms() {
            acc = acc.add(&self.word_op(w).scale(c.eval_f64(q)));
        }
        Ok(acc)
    }

    pub fn apply_word(&self, w: &[GenSym], v: &Vector) -> Vector {
        let mut x = v.clone();
        for &g in w.iter().rev() {
            x = self.image(g).matvec(&x);
        }
        x
    }

    pub fn apply(&self, a: &AlgElt, v: &Vector) -> Vector {
        let q = self.q0.value();
        let mut out = Vector::from_element(self.dim, ZERO);
        for (w, c) in a.terms() {
            out += self.apply_word(w, v) * c.eval_f64(q);
        }
        out
    }

    /// Basis vectors deep enough for a relation of the given degree.
    pub fn interior_mask(&self, degree: usize) -> Vec<bool> {
        let need = (degree / 2) as u32;
        self.depth.iter().map(|&d| d >= need).collect()
    }

    pub fn interior_dim(&self, degree: usize) -> usize {
        self.interior_mask(degree).iter().filter(|&&b| b).count()
    }

    /// Residual of an element that vanishes in the algebra, compressed to the
    /// interior appropriate for its degree.
    pub fn residual(&self, name: &str, a: &AlgElt) -> QResult<Residual> {
        let r = self.evaluate(a)?;
        let deg = a.degree();
        let inner = r.compress_mask(&self.interior_mask(deg));
        Ok(Residual { name: name.to_string(), degree: deg, interior: inner.norm_bound(), full: r.norm_bound() })
    }

    pub fn relation_residuals(&self) -> QResult<Vec<Residual>> {
        let cat = relation_catalog(self.ctx);
        let res = crate::par::map(&cat, |r| self.residual(&r.name, &r.elt));
        res.into_iter().collect()
    }

    pub fn max_interior_residual(&self) -> QResult<f64> {
        Ok(self.relation_residuals()?.iter().map(|r| r.interior).fold(0.0, f64::max))
    }

    /// Largest operator norm among the generator images; exact up to
    /// dimension 512, a power-iteration estimate above.
    pub fn max_generator_norm(&self) -> f64 {
        let gens: Vec<GenSym> = self.ctx.generators(false);
        crate::par::map(&gens, |g| {
            let op = self.image(*g);
            let b = op.norm_bound();
            if b <= 1.0 || op.dim() > 512 {
                b.min(if b <= 1.0 { b } else { op.norm_estimate(500) })
            } else {
                op.to_dense().singular_values().max()
            }
        })
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irrep_exact_identities() {
        let pi = MatRep::suq2_irrep(12, QPoint::half()).unwrap();
        let a = pi.image(GenSym::u(1, 1));
        let g = pi.image(GenSym::u(2, 1));
        let r1 = a.mul(g).sub(&g.mul(a).scale(C::new(0.5, 0.0)));
        assert!(r1.max_abs() < 1e-16);
        let r2 = a.adjoint().mul(a).add(&g.adjoint().mul(g)).sub(&Op::identity(12));
        assert!(r2.max_abs() < 1e-15);
        let corner = a.mul(&a.adjoint()).add(&g.mul(&g.adjoint()).scale(C::new(0.25, 0.0))).sub(&Op::identity(12)).to_dense();
        let want = -(1.0 - 0.5f64.powi(24));
        assert!((corner[(11, 11)] - C::new(want, 0.0)).norm() < 1e-15);
        assert!(pi.max_interior_residual().unwrap() < 1e-14);
    }

    #[test]
    fn embeddings_and_products() {
        let rho = MatRep::suq2_irrep(6, QPoint::half()).unwrap();
        let b1 = MatRep::block_embed(&rho, 3, 0).unwrap();
        let b2 = MatRep::block_embed(&rho, 3, 1).unwrap();
        assert_eq!(b2.image(GenSym::u(1, 1)), &Op::identity(6));
        let p = MatRep::conv_product(&b1, &b2).unwrap();
        let want = Op::identity(6).kron(rho.image(GenSym::u(2, 2)));
        assert!(p.image(GenSym::u(3, 3)).sub(&want).max_abs() < 1e-16);
        for r in [&b1, &b2, &p] {
            assert!(r.max_interior_residual().unwrap() < 1e-13, "{}", r.tag);
        }
        let t = MatRep::torus_char(Ctx::suq(3), QPoint::half(), &[0.3, -0.2]).unwrap();
        let s = MatRep::direct_sum(&[t, b1]).unwrap();
        assert_eq!(s.dim, 7);
        assert!(s.max_interior_residual().unwrap() < 1e-13);
    }

    #[test]
    fn pullback_to_uq() {
        let rho = MatRep::suq2_irrep(5, QPoint::half()).unwrap();
        let u = rho.pullback(&Morphism::t_breve(2).unwrap()).unwrap();
        assert_eq!(u.ctx, Ctx::uq(2));
        assert!(u.max_interior_residual().unwrap() < 1e-13);
        let lifted = u.pullback(&Morphism::t(2).unwrap()).unwrap();
        assert_eq!(lifted.image(GenSym::u(3, 3)), &Op::identity(5));
        assert!(lifted.max_interior_residual().unwrap() < 1e-13);
    }
}
