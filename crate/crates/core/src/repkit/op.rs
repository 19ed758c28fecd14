//! Sparse complex operators.

use crate::error::{QError, QResult};
use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num::complex::Complex64;

pub type C = Complex64;
pub type Vector = DVector<C>;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);

/// Above this dimension dense fallbacks refuse to run.
pub const DENSE_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct Op(pub CsrMatrix<C>);

impl Op {
    pub fn identity(n: usize) -> Op {
        Op(CsrMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Op {
        Op(CsrMatrix::zeros(n, n))
    }

    pub fn scalar(n: usize, c: C) -> Op {
        Op::identity(n).scale(c)
    }

    pub fn diag(d: &[C]) -> Op {
        Op::from_triplets(d.len(), d.iter().enumerate().map(|(i, &x)| (i, i, x)))
    }

    pub fn from_triplets(n: usize, t: impl IntoIterator<Item = (usize, usize, C)>) -> Op {
        let mut coo = CooMatrix::new(n, n);
        for (i, j, v) in t {
            if v != ZERO {
                coo.push(i, j, v);
            }
        }
        Op(CsrMatrix::from(&coo))
    }

    pub fn from_dense(m: &DMatrix<C>) -> Op {
        assert_eq!(m.nrows(), m.ncols());
        let n = m.nrows();
        Op::from_triplets(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, m[(i, j)])))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn nnz(&self) -> usize {
        self.0.nnz()
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        let mut m = DMatrix::from_element(self.dim(), self.dim(), ZERO);
        for (i, j, v) in self.0.triplet_iter() {
            m[(i, j)] += *v;
        }
        m
    }

    pub fn scale(&self, c: C) -> Op {
        let mut m = self.0.clone();
        for v in m.values_mut() {
            *v *= c;
        }
        Op(m)
    }

    pub fn adjoint(&self) -> Op {
        let n = self.dim();
        Op::from_triplets(n, self.0.triplet_iter().map(|(i, j, v)| (j, i, v.conj())))
    }

    pub fn add(&self, o: &Op) -> Op {
        Op(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Op) -> Op {
        Op(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Op) -> Op {
        Op(&self.0 * &o.0)
    }

    pub fn kron(&self, o: &Op) -> Op {
        let m = o.dim();
        let n = self.dim() * m;
        let mut t = Vec::with_capacity(self.nnz() * o.nnz());
        for (i, j, a) in self.0.triplet_iter() {
            for (k, l, b) in o.0.triplet_iter() {
                t.push((i * m + k, j * m + l, a * b));
            }
        }
        Op::from_triplets(n, t)
    }

    pub fn matvec(&self, v: &Vector) -> Vector {
        let (off, cols, vals) = self.0.csr_data();
        Vector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|i| (off[i]..off[i + 1]).map(|p| vals[p] * v[cols[p]]).sum::<C>()),
        )
    }

    /// `sqrt(||A||_1 ||A||_inf)`, an upper bound for the operator norm.
    pub fn norm_bound(&self) -> f64 {
        let n = self.dim();
        let mut rows = vec![0.0; n];
        let mut cols = vec![0.0; n];
        for (i, j, v) in self.0.triplet_iter() {
            rows[i] += v.norm();
            cols[j] += v.norm();
        }
        let r = rows.iter().cloned().fold(0.0, f64::max);
        let c = cols.iter().cloned().fold(0.0, f64::max);
        let fro = self.0.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        (r * c).sqrt().min(fro)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Operator norm estimate by power iteration on `A* A`.
    pub fn norm_estimate(&self, iters: usize) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let adj = self.adjoint();
        let mut v = Vector::from_fn(n, |i, _| C::new(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05));
        let mut est = 0.0;
        for _ in 0..iters {
            let nv = v.norm();
            if nv == 0.0 {
                return 0.0;
            }
            v /= C::new(nv, 0.0);
            let w = adj.matvec(&self.matvec(&v));
            est = w.norm();
            v = w;
        }
        est.sqrt()
    }

    /// Keeps only the entries whose row and column are both selected.
    pub fn compress_mask(&self, keep: &[bool]) -> Op {
        Op::from_triplets(self.dim(), self.0.triplet_iter().filter(|(i, j, _)| keep[*i] && keep[*j]).map(|(i, j, v)| (i, j, *v)))
    }

    fn is_lower(&self) -> bool {
        self.0.triplet_iter().all(|(i, j, v)| j <= i || *v == ZERO)
    }

    fn is_upper(&self) -> bool {
        self.0.triplet_iter().all(|(i, j, v)| j >= i || *v == ZERO)
    }

    /// Solves `A x = b`: substitution for triangular A, dense LU otherwise.
    pub fn solve(&self, b: &Vector) -> QResult<Vector> {
        let n = self.dim();
        let (off, cols, vals) = self.0.csr_data();
        if self.is_lower() {
            let mut x = Vector::from_element(n, ZERO);
            for i in 0..n {
                let mut s = b[i];
                let mut d = ZERO;
                for p in off[i]..off[i + 1] {
                    let j = cols[p];
                    if j == i {
                        d += vals[p];
                    } else {
                        s -= vals[p] * x[j];
                    }
                }
                if d == ZERO {
                    return Err(QError::Numeric(format!("singular triangular system at row {}", i)));
                }
                x[i] = s / d;
            }
            return Ok(x);
        }
        if self.is_upper() {
            let mut x = Vector::from_element(n, ZERO);
            for i in (0..n).rev() {
                let mut s = b[i];
                let mut d = ZERO;
                for p in off[i]..off[i + 1] {
                    let j = cols[p];
                    if j == i {
                        d += vals[p];
                    } else {
                        s -= vals[p] * x[j];
                    }
                }
                if d == ZERO {
                    return Err(QError::Numeric(format!("singular triangular system at row {}", i)));
                }
                x[i] = s / d;
            }
            return Ok(x);
        }
        if n > DENSE_CAP {
            return Err(QError::CapExceeded(format!("dense solve of dimension {}", n)));
        }
        self.to_dense()
            .lu()
            .solve(b)
            .ok_or_else(|| QError::Numeric("singular system".into()))
    }
}

/// Orthonormal basis of the numerical kernel of a square matrix: right
/// singular vectors with singular value below `tol`.
pub fn kernel(m: &DMatrix<C>, tol: f64) -> DMatrix<C> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::from_element(0, 0, ZERO);
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let idx: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] < tol).collect();
    let mut out = DMatrix::from_element(n, idx.len(), ZERO);
    for (c, &i) in idx.iter().enumerate() {
        for r in 0..n {
            out[(r, c)] = vt[(i, r)].conj();
        }
    }
    out
}

pub fn smallest_singular_value(m: &DMatrix<C>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone().singular_values().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Orthonormal basis of the complement of `span(b)` inside `C^n`.
pub fn complement(b: &DMatrix<C>, n: usize) -> DMatrix<C> {
    let p = DMatrix::<C>::identity(n, n) - b * b.adjoint();
    let e = p.symmetric_eigen();
    let idx: Vec<usize> = (0..n).filter(|&i| e.eigenvalues[i] > 0.5).collect();
    let mut out = DMatrix::from_element(n, idx.len(), ZERO);
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &e.eigenvectors.column(i));
    }
    out
}

/// Replaces an orthonormal basis by coordinate unit vectors when it spans a
/// coordinate subspace.
pub fn align_to_coordinates(b: &DMatrix<C>, tol: f64) -> DMatrix<C> {
    let n = b.nrows();
    let diag: Vec<f64> = (0..n).map(|i| b.row(i).iter().map(|z| z.norm_sqr()).sum()).collect();
    let chosen: Vec<usize> = (0..n).filter(|&i| diag[i] > 0.5).collect();
    if chosen.len() != b.ncols() || diag.iter().any(|&d| d > tol && d < 1.0 - tol) {
        return b.clone();
    }
    let mut out = DMatrix::from_element(n, chosen.len(), ZERO);
    for (c, &i) in chosen.iter().enumerate() {
        out[(i, c)] = ONE;
    }
    // the projectors must agree
    let diff = (&out * out.adjoint() - b * b.adjoint()).camax();
    if diff > tol.sqrt() {
        return b.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_and_adjoint() {
        let a = Op::from_triplets(2, [(0, 1, C::new(1.0, 1.0))]);
        let b = Op::diag(&[ONE, C::new(2.0, 0.0)]);
        let k = a.kron(&b).to_dense();
        assert_eq!(k[(0, 2)], C::new(1.0, 1.0));
        assert_eq!(k[(1, 3)], C::new(2.0, 2.0));
        assert_eq!(a.adjoint().to_dense()[(1, 0)], C::new(1.0, -1.0));
    }

    #[test]
    fn triangular_and_dense_solves() {
        let l = Op::from_triplets(3, [(0, 0, ONE), (1, 0, C::new(0.5, 0.0)), (1, 1, ONE), (2, 1, C::new(0.0, 1.0)), (2, 2, C::new(2.0, 0.0))]);
        let b = Vector::from_vec(vec![ONE, ONE, ONE]);
        let x = l.solve(&b).unwrap();
        assert!((l.matvec(&x) - &b).norm() < 1e-15);
        let u = l.adjoint();
        let y = u.solve(&b).unwrap();
        assert!((u.matvec(&y) - &b).norm() < 1e-15);
        let g = l.add(&u);
        let z = g.solve(&b).unwrap();
        assert!((g.matvec(&z) - &b).norm() < 1e-14);
    }

    #[test]
    fn kernel_and_alignment() {
        let m = DMatrix::from_diagonal(&Vector::from_vec(vec![ZERO, ONE, ZERO]));
        let k = kernel(&m, 1e-10);
        assert_eq!(k.ncols(), 2);
        let a = align_to_coordinates(&k, 1e-10);
        assert_eq!(a[(0, 0)], ONE);
        assert_eq!(a[(2, 1)], ONE);
        let c = complement(&a, 3);
        assert_eq!(c.ncols(), 1);
        assert!((c[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }
}
