//! Gaussian generating functionals and gaussian cocycles.

use crate::algebra::{AlgElt, Ctx, GenSym, QPoint, Variant};
use crate::error::{QError, QResult};
use crate::hopf::battery::words_up_to;
use crate::hopf::structure::{basis_extension, centered_word, directions, eps_prime_word, eps_second_word};
use crate::hopf::{Flags, Functional};
use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

pub const PSD_TOL: f64 = 1e-10;

/// Drift vector and diffusion matrix, indexed by the torus directions
/// (2..N for SU_q(N), 2..N+1 in the lifted coordinates for U_q(N)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussParams {
    pub r: Vec<f64>,
    #[serde(rename = "R")]
    pub rr: Vec<Vec<f64>>,
}

impl GaussParams {
    pub fn zero(dim: usize) -> Self {
        GaussParams { r: vec![0.0; dim], rr: vec![vec![0.0; dim]; dim] }
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.rr[i][j])
    }

    pub fn validate(&self, ctx: Ctx) -> QResult<()> {
        let d = directions(ctx).count();
        if self.r.len() != d || self.rr.len() != d || self.rr.iter().any(|row| row.len() != d) {
            return Err(QError::Precondition(format!("gaussian parameters need dimension {} for {:?}", d, ctx)));
        }
        let m = self.matrix();
        let scale = m.norm().max(1.0);
        if (&m - m.transpose()).amax() > 0.0 {
            return Err(QError::Precondition("diffusion matrix is not symmetric".into()));
        }
        if d > 0 {
            let e = m.symmetric_eigenvalues().min();
            if e < -PSD_TOL * scale {
                return Err(QError::Precondition(format!("diffusion matrix is not PSD (min eigenvalue {:e})", e)));
            }
        }
        Ok(())
    }
}

/// `psi = sum r_j eps'_j + 1/2 sum r_jk eps''_jk`.
pub fn gaussian_functional(ctx: Ctx, q0: QPoint, p: &GaussParams) -> QResult<Functional> {
    p.validate(ctx)?;
    let dirs: Vec<usize> = directions(ctx).collect();
    let p2 = p.clone();
    let flags = if p.rr.iter().flatten().all(|&x| x == 0.0) { Flags::drift() } else { Flags::gaussian() };
    Ok(Functional::new(ctx, q0, "gaussian", flags, move |w| {
        let mut v = Complex64::new(0.0, 0.0);
        for (a, &j) in dirs.iter().enumerate() {
            if p2.r[a] != 0.0 {
                v += eps_prime_word(ctx, w, j) * p2.r[a];
            }
            for (b, &k) in dirs.iter().enumerate() {
                if p2.rr[a][b] != 0.0 {
                    v += eps_second_word(ctx, w, j, k) * (0.5 * p2.rr[a][b]);
                }
            }
        }
        v
    }))
}

/// Centered words of degree exactly 3 over all generators with stars.
pub fn k3_battery(ctx: Ctx) -> Vec<AlgElt> {
    let gens = ctx.generators(true);
    words_up_to(&gens, 3).into_iter().filter(|w| w.len() == 3).map(|w| centered_word(ctx, &w)).collect()
}

/// Reads `r_j = psi(d_j)` and `r_jk = psi(d_j d_k)` after checking that psi
/// vanishes on K_3 words.
pub fn recover_params(psi: &Functional, tol: f64) -> QResult<GaussParams> {
    let ctx = psi.ctx();
    let k3 = k3_battery(ctx);
    let worst = crate::par::map(&k3, |a| psi.eval(a).norm()).into_iter().fold(0.0, f64::max);
    if worst > tol {
        return Err(QError::Precondition(format!("functional does not vanish on K_3 (max {:e})", worst)));
    }
    let d = basis_extension(ctx);
    let r: Vec<f64> = d.iter().map(|x| psi.eval(x).re).collect();
    let rr: Vec<Vec<f64>> = d.iter().map(|x| d.iter().map(|y| psi.eval(&(x * y)).re).collect()).collect();
    Ok(GaussParams { r, rr })
}

/// Gaussian cocycle `eta = sum_j eta_j eps'_j` with vectors in C^m.
#[derive(Clone, Debug)]
pub struct GaussCocycle {
    pub ctx: Ctx,
    pub vectors: Vec<DVector<Complex64>>,
}

impl GaussCocycle {
    pub fn new(ctx: Ctx, vectors: Vec<DVector<Complex64>>) -> QResult<Self> {
        if vectors.len() != directions(ctx).count() {
            return Err(QError::Precondition("one vector per torus direction".into()));
        }
        if vectors.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(QError::Precondition("vectors of unequal length".into()));
        }
        Ok(GaussCocycle { ctx, vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    pub fn eval_word(&self, w: &[GenSym]) -> DVector<Complex64> {
        let mut out = DVector::from_element(self.dim(), Complex64::new(0.0, 0.0));
        for (v, j) in self.vectors.iter().zip(directions(self.ctx)) {
            let e = eps_prime_word(self.ctx, w, j);
            if e != Complex64::new(0.0, 0.0) {
                out += v * e;
            }
        }
        out
    }

    pub fn eval(&self, a: &AlgElt, q: f64) -> DVector<Complex64> {
        let mut out = DVector::from_element(self.dim(), Complex64::new(0.0, 0.0));
        for (w, c) in a.terms() {
            out += self.eval_word(w) * c.eval_f64(q);
        }
        out
    }

    pub fn gram(&self) -> DMatrix<Complex64> {
        let d = self.vectors.len();
        DMatrix::from_fn(d, d, |i, j| self.vectors[i].dotc(&self.vectors[j]))
    }

    /// Builds the vectors from the positive square root of a PSD matrix, so
    /// that the Gram matrix reproduces it.
    pub fn from_psd(ctx: Ctx, rr: &DMatrix<f64>) -> QResult<Self> {
        let q = psd_sqrt(rr)?;
        let vectors = (0..q.ncols()).map(|j| q.column(j).map(|x| Complex64::new(x, 0.0))).collect();
        GaussCocycle::new(ctx, vectors)
    }
}

pub fn psd_sqrt(m: &DMatrix<f64>) -> QResult<DMatrix<f64>> {
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let scale = m.norm().max(1.0);
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.min() < -PSD_TOL * scale {
        return Err(QError::Precondition("matrix is not PSD".into()));
    }
    let s = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&s) * eig.eigenvectors.transpose())
}

#[derive(Clone, Debug, Serialize)]
pub struct HermitianReport {
    pub hermitian: bool,
    pub max_imag: f64,
    pub gram_re: Vec<Vec<f64>>,
    pub gram_im: Vec<Vec<f64>>,
    /// Present when hermitian: the parameters of the completing functional.
    pub completion: Option<GaussParams>,
}

/// Hermitian iff the Gram matrix of the vectors is real; then the gaussian
/// functional with diffusion matrix Re(Gram) completes the triple.
pub fn is_hermitian_gaussian(c: &GaussCocycle, tol: f64) -> HermitianReport {
    let g = c.gram();
    let d = g.nrows();
    let max_imag = g.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let gram_re: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| g[(i, j)].re).collect()).collect();
    let gram_im: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| g[(i, j)].im).collect()).collect();
    let hermitian = max_imag <= tol;
    let completion = hermitian.then(|| {
        let mut rr = gram_re.clone();
        for i in 0..d {
            for j in 0..i {
                let m = 0.5 * (rr[i][j] + rr[j][i]);
                rr[i][j] = m;
                rr[j][i] = m;
            }
        }
        GaussParams { r: vec![0.0; d], rr }
    });
    HermitianReport { hermitian, max_imag, gram_re, gram_im, completion }
}

/// Max over battery pairs of
/// `|psi(a* b) - psi(a*) eps(b) - eps(a*) psi(b) - <eta(a), eta(b)>|`.
pub fn gaussian_triple_defect(psi: &Functional, eta: &GaussCocycle, battery: &[AlgElt]) -> f64 {
    let q = psi.q0().value();
    let eps = Functional::counit(psi.ctx(), psi.q0().clone());
    let etas: Vec<DVector<Complex64>> = battery.iter().map(|a| eta.eval(a, q)).collect();
    let n = battery.len();
    crate::par::map_range(n * n, |e| {
        let (i, j) = (e / n, e % n);
        let a = &battery[i];
        let b = &battery[j];
        let ast = a.adjoint();
        let lhs = psi.eval(&(&ast * b)) - psi.eval(&ast) * eps.eval(b) - eps.eval(&ast) * psi.eval(b);
        (lhs - etas[i].dotc(&etas[j])).norm()
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// The no-(GC) witness at N >= 3: two directions whose vectors give a
/// non-real Gram entry.
pub fn no_gc_witness(n: usize) -> QResult<(GaussCocycle, HermitianReport)> {
    if n < 3 {
        return Err(QError::Precondition("the witness needs N >= 3".into()));
    }
    let ctx = Ctx::new(n, Variant::SUq);
    let dim = directions(ctx).count();
    let mut vs = vec![DVector::from_element(2, Complex64::new(0.0, 0.0)); dim];
    vs[0][0] = Complex64::new(1.0, 0.0);
    vs[1][0] = Complex64::new(0.0, 1.0);
    let c = GaussCocycle::new(ctx, vs)?;
    let rep = is_hermitian_gaussian(&c, 1e-12);
    Ok((c, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::battery::{k1_battery, BatterySpec};
    use crate::hopf::structure::basis_extension;

    #[test]
    fn values_on_basis() {
        let c = Ctx::suq(3);
        let p = GaussParams { r: vec![0.5, -1.25], rr: vec![vec![2.0, 0.5], vec![0.5, 1.0]] };
        let psi = gaussian_functional(c, QPoint::half(), &p).unwrap();
        let d = basis_extension(c);
        for (a, x) in d.iter().enumerate() {
            assert!((psi.eval(x) - Complex64::new(p.r[a], 0.0)).norm() < 1e-15);
            for (b, y) in d.iter().enumerate() {
                assert!((psi.eval(&(x * y)) - Complex64::new(p.rr[a][b], 0.0)).norm() < 1e-15);
            }
        }
        assert_eq!(recover_params(&psi, 1e-14).unwrap(), p);
        assert!(psi.eval(&AlgElt::one(c)).norm() == 0.0);
    }

    #[test]
    fn drift_roundtrip() {
        let c = Ctx::suq(3);
        let psi = Functional::eps_prime(c, QPoint::half(), 2).unwrap();
        let p = recover_params(&psi, 1e-14).unwrap();
        assert_eq!(p, GaussParams { r: vec![1.0, 0.0], rr: vec![vec![0.0; 2]; 2] });
    }

    #[test]
    fn rejects_bad_matrices() {
        let c = Ctx::suq(3);
        let ns = GaussParams { r: vec![0.0; 2], rr: vec![vec![1.0, 0.5], vec![0.4, 1.0]] };
        assert!(gaussian_functional(c, QPoint::half(), &ns).is_err());
        let neg = GaussParams { r: vec![0.0; 2], rr: vec![vec![1.0, 2.0], vec![2.0, 1.0]] };
        assert!(gaussian_functional(c, QPoint::half(), &neg).is_err());
    }

    #[test]
    fn hermitian_cocycle_completes() {
        let c = Ctx::suq(3);
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let eta = GaussCocycle::new(c, vec![DVector::from_vec(vec![one, z]), DVector::from_vec(vec![z, one])]).unwrap();
        let rep = is_hermitian_gaussian(&eta, 1e-12);
        assert!(rep.hermitian);
        let psi = gaussian_functional(c, QPoint::half(), rep.completion.as_ref().unwrap()).unwrap();
        let b = k1_battery(c, &BatterySpec { max_degree: 2, generators: vec!["u[1,1]".into(), "u[2,2]".into(), "u*[3,3]".into(), "u[1,2]".into()], count: 0, seed: 0 }).unwrap();
        assert!(gaussian_triple_defect(&psi, &eta, &b) < 1e-12);
        let (_, bad) = no_gc_witness(3).unwrap();
        assert!(!bad.hermitian && (bad.max_imag - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_root_realizes_gram() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, -0.1, 0.3, 1.0, 0.2, -0.1, 0.2, 0.5]);
        let eta = GaussCocycle::from_psd(Ctx::suq(4), &m).unwrap();
        let g = eta.gram();
        for i in 0..3 {
            for j in 0..3 {
                assert!((g[(i, j)] - Complex64::new(m[(i, j)], 0.0)).norm() < 1e-12);
            }
        }
    }
}
