//! Resolvent limits of contractions.

use super::decompose::Dense;
use super::op::{kernel, Vector, C};
use crate::error::{QError, QResult};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct KeyLemmaRow {
    pub m: u32,
    pub p: f64,
    /// max over inputs of `||(I - a)(I - p a)^{-1} v - P_1 v||`
    pub error: f64,
    /// max over inputs of error / (2 (1 - p) ||y||)
    pub bound_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KeyLemmaReport {
    pub fixed_dim: usize,
    pub rows: Vec<KeyLemmaRow>,
    pub ok: bool,
}

/// Orthogonal projection onto the complement of `ker(I - a)`.
pub fn range_projection(a: &Dense, tol: f64) -> Dense {
    let n = a.nrows();
    let k = kernel(&(Dense::identity(n, n) - a), tol);
    Dense::identity(n, n) - &k * k.adjoint()
}

/// Runs `p_m = 1 - 2^{-m}` over `ms` for the vectors `v = (I - a) y`.
pub fn key_lemma_limit(a: &Dense, ys: &[Vector], ms: &[u32]) -> QResult<KeyLemmaReport> {
    let n = a.nrows();
    let norm = a.clone().singular_values().max();
    if norm > 1.0 + 1e-12 {
        return Err(QError::Precondition(format!("not a contraction: norm {}", norm)));
    }
    let id = Dense::identity(n, n);
    let p1 = range_projection(a, 1e-10);
    let fixed_dim = n - (p1.trace().re.round() as usize);
    let vs: Vec<Vector> = ys.iter().map(|y| (&id - a) * y).collect();
    let rows: Vec<KeyLemmaRow> = crate::par::map(ms, |&m| {
        let p = 1.0 - 0.5f64.powi(m as i32);
        let lu = (&id - a * C::new(p, 0.0)).lu();
        let mut error: f64 = 0.0;
        let mut ratio: f64 = 0.0;
        for (v, y) in vs.iter().zip(ys) {
            let x = lu.solve(v).unwrap_or_else(|| Vector::from_element(n, C::new(f64::NAN, 0.0)));
            let e = ((&id - a) * x - &p1 * v).norm();
            error = error.max(e);
            let b = 2.0 * (1.0 - p) * y.norm();
            ratio = ratio.max(if b > 0.0 { e / b } else if e == 0.0 { 0.0 } else { f64::INFINITY });
        }
        KeyLemmaRow { m, p, error, bound_ratio: ratio }
    });
    let ok = rows.iter().all(|r| r.bound_ratio <= 1.0 + 1e-9);
    Ok(KeyLemmaReport { fixed_dim, rows, ok })
}

fn random_complex(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Dense {
    DMatrix::from_fn(r, c, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `W (I_k + C) W*` with W a random unitary and `||C|| = c_norm < 1`.
pub fn engineered_contraction(n: usize, k: usize, c_norm: f64, seed: u64) -> Dense {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = random_complex(&mut rng, n, n).qr().q();
    let c = random_complex(&mut rng, n - k, n - k);
    let c = &c * C::new(c_norm / c.clone().singular_values().max(), 0.0);
    let mut mid = Dense::zeros(n, n);
    for i in 0..k {
        mid[(i, i)] = C::new(1.0, 0.0);
    }
    mid.view_mut((k, k), (n - k, n - k)).copy_from(&c);
    &w * mid * w.adjoint()
}

pub fn random_vectors(n: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_complex(&mut rng, n, 1).column(0).into_owned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_examples() {
        let zero = Dense::zeros(2, 2);
        let r = key_lemma_limit(&zero, &random_vectors(2, 3, 1), &[2, 8]).unwrap();
        assert!(r.rows.iter().all(|x| x.error < 1e-15));
        let a = Dense::from_diagonal(&Vector::from_vec(vec![C::new(1.0, 0.0), C::new(0.5, 0.0)]));
        let p1 = range_projection(&a, 1e-12);
        assert!((p1[(0, 0)].norm()) < 1e-15 && (p1[(1, 1)].re - 1.0).abs() < 1e-15);
        assert!(key_lemma_limit(&(a.clone() * C::new(2.0, 0.0)), &[], &[1]).is_err());
    }

    #[test]
    fn engineered_bound() {
        let a = engineered_contraction(20, 3, 0.95, 11);
        let r = key_lemma_limit(&a, &random_vectors(20, 5, 2), &(1..=16).collect::<Vec<_>>()).unwrap();
        assert_eq!(r.fixed_dim, 3);
        assert!(r.ok, "{:?}", r.rows);
    }
}
