//! Splitting a representation of SU_q(N) along SU_q(1) < ... < SU_q(N).

use super::op::{align_to_coordinates, complement, kernel, smallest_singular_value, Op, C, ONE, ZERO};
use super::rep::{MatRep, DEEP};
use crate::algebra::{Ctx, GenSym, Variant};
use crate::error::{QError, QResult};
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::BTreeMap;

pub type Dense = DMatrix<C>;

/// Relative kernel tolerance for `I - pi(u_nn)`.
pub const KERNEL_REL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Level {
    pub n: usize,
    /// Orthonormal columns in the coordinates of the input representation.
    pub basis: Dense,
    /// The level as a representation of SU_q(n).
    pub rep: MatRep,
    /// The same subspace as a representation of SU_q(N).
    pub ambient: MatRep,
    /// Smallest singular value of `I - pi_n(u_nn)`; `None` for level 1.
    pub injectivity: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionDiagnostics {
    pub invariance: f64,
    pub corner: f64,
    pub level_one: f64,
    pub orthogonality: f64,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub levels: Vec<Level>,
    pub diagnostics: DecompositionDiagnostics,
}

impl Decomposition {
    pub fn dims(&self) -> BTreeMap<usize, usize> {
        self.levels.iter().map(|l| (l.n, l.basis.ncols())).collect()
    }

    pub fn level(&self, n: usize) -> Option<&Level> {
        self.levels.iter().find(|l| l.n == n)
    }
}

pub(crate) fn dense(op: &Op) -> Dense {
    op.to_dense()
}

/// `B* A B` with A sparse.
pub fn compress(op: &Op, b: &Dense) -> Dense {
    let ab: Dense = &op.0 * b;
    b.adjoint() * ab
}

fn depth_of(basis: &Dense, depth: &[u32]) -> Vec<u32> {
    (0..basis.ncols())
        .map(|c| {
            (0..basis.nrows())
                .filter(|&r| basis[(r, c)].norm() > 1e-12)
                .map(|r| depth[r])
                .min()
                .unwrap_or(DEEP)
        })
        .collect()
}

/// Compression of `pi` to the columns of `basis`, on SU_q(n) (generators with
/// both indices at most n).
pub fn restrict(pi: &MatRep, basis: &Dense, n: usize, tag: &str) -> QResult<MatRep> {
    let ctx = Ctx::suq(n);
    let mut im = BTreeMap::new();
    for g in ctx.generators(false) {
        im.insert(g, Op::from_dense(&compress(pi.image(g), basis)));
    }
    MatRep::from_unstarred(ctx, pi.q0.clone(), im, depth_of(basis, &pi.depth), tag)
}

fn ambient(pi: &MatRep, basis: &Dense, tag: &str) -> QResult<MatRep> {
    let mut im = BTreeMap::new();
    for g in pi.ctx.generators(false) {
        im.insert(g, Op::from_dense(&compress(pi.image(g), basis)));
    }
    MatRep::from_unstarred(pi.ctx, pi.q0.clone(), im, depth_of(basis, &pi.depth), tag)
}

/// `||(I - Y Y*) A Y||` for orthonormal Y.
fn leak(op: &Op, y: &Dense) -> f64 {
    if y.ncols() == 0 {
        return 0.0;
    }
    let ay: Dense = &op.0 * y;
    let r = &ay - y * (y.adjoint() * &ay);
    r.norm()
}

/// Peels off levels N, N-1, ..., 2; the remainder is level 1.
pub fn decompose(pi: &MatRep, tol: f64) -> QResult<Decomposition> {
    if pi.ctx.variant != Variant::SUq {
        return Err(QError::Precondition("decompose expects an SU_q(N) representation".into()));
    }
    let big = pi.ctx.n;
    let dim = pi.dim;
    if dim > super::op::DENSE_CAP {
        return Err(QError::CapExceeded(format!("dense decomposition of dimension {}", dim)));
    }
    let mut cur = Dense::identity(dim, dim);
    let mut levels = Vec::new();
    let mut diag = DecompositionDiagnostics { invariance: 0.0, corner: 0.0, level_one: 0.0, orthogonality: 0.0 };
    for n in (2..=big).rev() {
        let d = cur.ncols();
        if d == 0 {
            break;
        }
        let unn = compress(pi.image(GenSym::u(n, n)), &cur);
        let a = Dense::identity(d, d) - &unn;
        let scale = a.norm().max(1.0);
        let k = kernel(&a, KERNEL_REL_TOL * scale);
        let fixed = align_to_coordinates(&(&cur * &k), 1e-12);
        let level_basis = align_to_coordinates(&(&cur * complement(&k, d)), 1e-12);

        // the fixed space must be invariant and see only the [1, n-1] block
        for j in 1..=n {
            for kk in 1..=n {
                let g = GenSym::u(j, kk);
                for h in [g, g.star()] {
                    diag.invariance = diag.invariance.max(leak(pi.image(h), &fixed));
                }
            }
        }
        for kk in 1..n {
            for g in [GenSym::u(kk, n), GenSym::u(n, kk)] {
                let r: Dense = &pi.image(g).0 * &fixed;
                diag.corner = diag.corner.max(r.norm());
            }
        }
        let ru: Dense = &pi.image(GenSym::u(n, n)).0 * &fixed - &fixed;
        diag.corner = diag.corner.max(ru.norm());
        if diag.invariance > tol || diag.corner > tol {
            return Err(QError::Numeric(format!(
                "level {}: invariance residual {:.3e}, corner residual {:.3e} above {:.1e}",
                n, diag.invariance, diag.corner, tol
            )));
        }

        if level_basis.ncols() > 0 {
            let rep = restrict(pi, &level_basis, n, &format!("level {}", n))?;
            let cert = smallest_singular_value(&(Dense::identity(rep.dim, rep.dim) - dense(rep.image(GenSym::u(n, n)))));
            let amb = ambient(pi, &level_basis, &format!("level {} in SU_q({})", n, big))?;
            levels.push(Level { n, basis: level_basis, rep, ambient: amb, injectivity: Some(cert) });
        }
        cur = fixed;
    }
    if cur.ncols() > 0 {
        let rep = restrict(pi, &cur, 1, "level 1")?;
        let amb = ambient(pi, &cur, "level 1")?;
        for g in pi.ctx.generators(false) {
            let e = if g.counit() { ONE } else { ZERO };
            let m = dense(amb.image(g)) - Dense::identity(amb.dim, amb.dim) * e;
            diag.level_one = diag.level_one.max(m.norm());
        }
        if diag.level_one > tol {
            return Err(QError::Numeric(format!("level 1 is not a multiple of the counit ({:.3e})", diag.level_one)));
        }
        levels.push(Level { n: 1, basis: cur, rep, ambient: amb, injectivity: None });
    }
    levels.sort_by_key(|l| l.n);
    let all = Dense::from_columns(&levels.iter().flat_map(|l| l.basis.column_iter().map(|c| c.into_owned())).collect::<Vec<_>>());
    if all.ncols() != dim {
        return Err(QError::Numeric(format!("levels span {} of {} dimensions", all.ncols(), dim)));
    }
    diag.orthogonality = (all.adjoint() * &all - Dense::identity(dim, dim)).norm();
    Ok(Decomposition { levels, diagnostics: diag })
}

/// Joint kernel of `pi(g) - eps(g)` over all generators, as orthonormal columns.
pub fn maximal_gaussian_subspace(pi: &MatRep, tol: f64) -> Dense {
    let dim = pi.dim;
    let mut s = Dense::zeros(dim, dim);
    for g in pi.ctx.generators(true) {
        let e = if g.counit() { ONE } else { ZERO };
        let m = dense(pi.image(g)) - Dense::identity(dim, dim) * e;
        s += m.adjoint() * m;
    }
    let eig = s.symmetric_eigen();
    let idx: Vec<usize> = (0..dim).filter(|&i| eig.eigenvalues[i].abs() < tol).collect();
    let mut out = Dense::zeros(dim, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &eig.eigenvectors.column(i));
    }
    align_to_coordinates(&out, 1e-12)
}

/// Distance between the orthogonal projections onto two column spans.
pub fn projector_distance(a: &Dense, b: &Dense) -> f64 {
    let pa = a * a.adjoint();
    let pb = b * b.adjoint();
    (pa - pb).norm()
}

/// Largest distance between `ker(I - A)` and `ker(I - A*)` over generator
/// images A.
pub fn eigen_one_symmetry(pi: &MatRep, tol: f64) -> f64 {
    let dim = pi.dim;
    let gens = pi.ctx.generators(false);
    crate::par::map(&gens, |g| {
        let a = Dense::identity(dim, dim) - dense(pi.image(*g));
        let k1 = kernel(&a, tol);
        let k2 = kernel(&a.adjoint(), tol);
        if k1.ncols() != k2.ncols() {
            return f64::INFINITY;
        }
        projector_distance(&k1, &k2)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QPoint;

    fn sample(m: usize) -> (MatRep, [usize; 3]) {
        let q = QPoint::half();
        let rho = MatRep::suq2_irrep(m, q.clone()).unwrap();
        let b1 = MatRep::block_embed(&rho, 3, 0).unwrap();
        let b2 = MatRep::block_embed(&rho, 3, 1).unwrap();
        let conv = MatRep::conv_product(&b1, &b2).unwrap();
        let parts = [
            MatRep::trivial(Ctx::suq(3), q.clone(), 1),
            MatRep::torus_char(Ctx::suq(3), q.clone(), &[0.0, 0.7]).unwrap(),
            b1,
            conv,
        ];
        (MatRep::direct_sum(&parts).unwrap(), [1, m, 1 + m * m])
    }

    #[test]
    fn recovers_construction() {
        let (pi, want) = sample(6);
        let d = decompose(&pi, 1e-8).unwrap();
        let dims = d.dims();
        assert_eq!(dims[&1], want[0]);
        assert_eq!(dims[&2], want[1]);
        assert_eq!(dims[&3], want[2]);
        assert!(d.diagnostics.orthogonality < 1e-10);
        for l in &d.levels {
            if let Some(c) = l.injectivity {
                assert!(c > 1e-6, "level {} certificate {}", l.n, c);
            }
        }
        let g = maximal_gaussian_subspace(&pi, 1e-10);
        assert!(projector_distance(&g, &d.level(1).unwrap().basis) < 1e-10);
    }

    #[test]
    fn irrep_has_no_gaussian_part() {
        let pi = MatRep::suq2_irrep(16, QPoint::half()).unwrap();
        assert_eq!(maximal_gaussian_subspace(&pi, 1e-10).ncols(), 0);
        let d = decompose(&pi, 1e-8).unwrap();
        assert_eq!(d.dims()[&2], 16);
        assert!(eigen_one_symmetry(&pi, 1e-10) < 1e-10);
    }

    #[test]
    fn trivial_is_level_one() {
        let pi = MatRep::trivial(Ctx::suq(3), QPoint::half(), 3);
        let d = decompose(&pi, 1e-8).unwrap();
        assert_eq!(d.dims(), [(1, 3)].into_iter().collect());
    }
}
