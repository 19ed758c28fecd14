//! Convolution powers and the convolution exponential.
//!
//! For a fixed letter pattern (the word with its indices forgotten), the
//! values `psi(w_{J,K})` over all row multi-indices J and column multi-indices
//! K form a matrix `Psi`. The coproduct of the pattern is matrix
//! multiplication over the middle index, so `psi^{*n}(w_{J,K}) = (Psi^n)[J,K]`
//! and the convolution exponential is the matrix exponential.

use super::functional::{Flags, Functional};
use crate::algebra::{AlgElt, GenSym, Word};
use crate::error::{QError, QResult};
use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Clone, Copy, Debug)]
pub struct ConvExpConfig {
    pub max_order: usize,
    pub term_cap: usize,
    pub tol: f64,
}

impl Default for ConvExpConfig {
    fn default() -> Self {
        ConvExpConfig { max_order: 24, term_cap: 1_000_000, tol: 1e-15 }
    }
}

fn pattern_of(w: &[GenSym]) -> (Word, Vec<usize>, Vec<usize>) {
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let pat = w
        .iter()
        .map(|g| match *g {
            GenSym::U(j, k) => {
                rows.push(j as usize);
                cols.push(k as usize);
                GenSym::U(0, 0)
            }
            GenSym::Ustar(j, k) => {
                rows.push(j as usize);
                cols.push(k as usize);
                GenSym::Ustar(0, 0)
            }
            other => other,
        })
        .collect();
    (pat, rows, cols)
}

/// Multi-index with digits 1..=n, first letter least significant.
fn index_of(n: usize, digits: &[usize]) -> usize {
    digits.iter().rev().fold(0, |acc, d| acc * n + (d - 1))
}

fn instantiate(pat: &[GenSym], n: usize, row: usize, col: usize) -> Word {
    let mut r = row;
    let mut c = col;
    pat.iter()
        .map(|g| match g {
            GenSym::U(..) | GenSym::Ustar(..) => {
                let j = r % n + 1;
                let k = c % n + 1;
                r /= n;
                c /= n;
                if matches!(g, GenSym::U(..)) {
                    GenSym::u(j, k)
                } else {
                    GenSym::us(j, k)
                }
            }
            other => *other,
        })
        .collect()
}

/// Convolution semigroup generated by a functional.
pub struct ConvSemigroup {
    psi: Functional,
    cfg: ConvExpConfig,
    cache: Mutex<HashMap<Word, Arc<DMatrix<Complex64>>>>,
}

impl ConvSemigroup {
    pub fn new(psi: Functional, cfg: ConvExpConfig) -> Self {
        ConvSemigroup { psi, cfg, cache: Mutex::new(HashMap::new()) }
    }

    pub fn generator(&self) -> &Functional {
        &self.psi
    }

    fn matrix(&self, pat: &Word) -> QResult<Arc<DMatrix<Complex64>>> {
        if let Some(m) = self.cache.lock().unwrap().get(pat) {
            return Ok(m.clone());
        }
        let n = self.psi.ctx().n;
        let l = pat.iter().filter(|g| g.indices().is_some()).count() as u32;
        let dim = n.pow(l);
        if dim.saturating_mul(dim) > self.cfg.term_cap {
            return Err(QError::CapExceeded(format!("pattern matrix {}x{} exceeds term cap", dim, dim)));
        }
        let entries = crate::par::map_range(dim * dim, |e| {
            let (r, c) = (e / dim, e % dim);
            self.psi.eval_word(&instantiate(pat, n, r, c))
        });
        let m = Arc::new(DMatrix::from_row_slice(dim, dim, &entries));
        self.cache.lock().unwrap().insert(pat.clone(), m.clone());
        Ok(m)
    }

    fn locate(&self, w: &[GenSym]) -> QResult<(Arc<DMatrix<Complex64>>, usize, usize)> {
        let (pat, rows, cols) = pattern_of(w);
        let n = self.psi.ctx().n;
        let m = self.matrix(&pat)?;
        Ok((m, index_of(n, &rows), index_of(n, &cols)))
    }

    /// `psi^{*n}(w)`.
    pub fn power_word(&self, order: usize, w: &[GenSym]) -> QResult<Complex64> {
        let (m, r, c) = self.locate(w)?;
        let mut v = DVector::from_element(m.nrows(), Complex64::new(0.0, 0.0));
        v[c] = Complex64::new(1.0, 0.0);
        for _ in 0..order {
            v = &*m * v;
        }
        Ok(v[r])
    }

    /// `exp_*(t psi)(w)`, summed until the term norm drops below
    /// `tol * (|partial| + 1)`.
    pub fn value_word(&self, t: f64, w: &[GenSym]) -> QResult<Complex64> {
        let (m, r, c) = self.locate(w)?;
        let mut v = DVector::from_element(m.nrows(), Complex64::new(0.0, 0.0));
        v[c] = Complex64::new(1.0, 0.0);
        let mut sum = v.clone();
        if t == 0.0 {
            return Ok(sum[r]);
        }
        for order in 1..=self.cfg.max_order {
            v = (&*m * v).scale(t) / Complex64::new(order as f64, 0.0);
            sum += &v;
            let term = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if term < self.cfg.tol * (sum[r].norm() + 1.0) {
                return Ok(sum[r]);
            }
        }
        Err(QError::Convergence(format!(
            "convolution exponential did not settle within order {} (t = {})",
            self.cfg.max_order, t
        )))
    }

    pub fn value(&self, t: f64, a: &AlgElt) -> QResult<Complex64> {
        let q = self.psi.q0().value();
        let mut s = Complex64::new(0.0, 0.0);
        for (w, c) in a.terms() {
            s += c.eval_f64(q) * self.value_word(t, w)?;
        }
        Ok(s)
    }

    /// `phi_t` as a functional. Evaluation errors become NaN.
    pub fn state(self: &Arc<Self>, t: f64) -> Functional {
        let me = self.clone();
        Functional::new(
            self.psi.ctx(),
            self.psi.q0().clone(),
            format!("exp(t*{}) at t={}", self.psi.desc, t),
            Flags { hermitian: self.psi.flags.hermitian, ..Flags::default() },
            move |w| me.value_word(t, w).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ctx, QPoint};
    use crate::hopf::structure::counit;

    #[test]
    fn drift_exponential_is_character() {
        let c = Ctx::suq(2);
        let sg = ConvSemigroup::new(Functional::eps_prime(c, QPoint::half(), 2).unwrap(), ConvExpConfig::default());
        for t in [0.3, 1.0, -0.7] {
            let v = sg.value(t, &AlgElt::u(c, 2, 2)).unwrap();
            assert!((v - Complex64::from_polar(1.0, t)).norm() < 1e-13);
            let w = sg.value(t, &AlgElt::u(c, 1, 2)).unwrap();
            assert!(w.norm() < 1e-15);
        }
        for n in 0..5 {
            let v = sg.power_word(n, &[GenSym::u(2, 2)]).unwrap();
            assert!((v - Complex64::new(0.0, 1.0).powu(n as u32)).norm() < 1e-15);
        }
    }

    #[test]
    fn time_zero_is_counit() {
        let c = Ctx::suq(3);
        let sg = ConvSemigroup::new(Functional::eps_second(c, QPoint::half(), 2, 3).unwrap(), ConvExpConfig::default());
        let a = AlgElt::u(c, 1, 1) * AlgElt::u(c, 2, 3) + AlgElt::us(c, 3, 3);
        let v = sg.value(0.0, &a).unwrap();
        assert!((v - counit(&a, &QPoint::half())).norm() < 1e-15);
    }

    #[test]
    fn pattern_indexing_matches_coproduct() {
        let c = Ctx::suq(2);
        let psi = Functional::eps_second(c, QPoint::half(), 2, 2).unwrap().add(&Functional::eps_prime(c, QPoint::half(), 2).unwrap()).unwrap();
        let sq = psi.convolve(&psi).unwrap();
        let sg = ConvSemigroup::new(psi, ConvExpConfig::default());
        for w in [vec![GenSym::u(1, 2), GenSym::us(2, 2)], vec![GenSym::u(2, 1), GenSym::u(1, 1), GenSym::us(1, 2)]] {
            let a = sq.eval_word(&w);
            let b = sg.power_word(2, &w).unwrap();
            assert!((a - b).norm() < 1e-14, "{:?}", w);
        }
    }
}
