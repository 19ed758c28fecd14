//! Limits along `p_m = 1 - 2^{-m}` with Romberg extrapolation in `1 - p`.

use crate::error::{QError, QResult};
use crate::repkit::{MatRep, Op, Vector, C};
use crate::algebra::GenSym;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub m_min: u32,
    pub m_max: u32,
    /// Cauchy tolerance on successive extrapolants (relative to max(1, |value|)).
    pub tol: f64,
    /// Vector limits are judged on the basis vectors within this many raising
    /// steps of the deepest one; `None` uses the whole space.
    #[serde(default)]
    pub core: Option<u32>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { m_min: 6, m_max: 14, tol: 1e-8, core: None }
    }
}

impl Schedule {
    pub fn ms(&self) -> Vec<u32> {
        (self.m_min..=self.m_max).collect()
    }

    pub fn p(m: u32) -> f64 {
        1.0 - 0.5f64.powi(m as i32)
    }

    pub fn validate(&self) -> QResult<()> {
        if self.m_min == 0 || self.m_max < self.m_min + 1 || self.m_max > 52 {
            return Err(QError::Precondition(format!("bad p-schedule m = {}..{}", self.m_min, self.m_max)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    pub m: Vec<u32>,
    /// Norms of the raw values per m.
    pub raw: Vec<f64>,
    /// Distances between successive diagonal extrapolants.
    pub steps: Vec<f64>,
    pub converged: bool,
}

/// Romberg table on values at step sizes halving each time; returns the
/// last diagonal entry and the trace of diagonal differences.
pub fn romberg(ms: &[u32], seq: &[Vector], tol: f64) -> (Vector, Trace) {
    romberg_masked(ms, seq, None, tol)
}

/// Basis vectors counted by `Schedule::core`.
pub fn core_mask(depth: &[u32], core: Option<u32>) -> Option<Vec<bool>> {
    let c = core?;
    let top = depth.iter().cloned().filter(|&d| d != crate::repkit::DEEP).max().unwrap_or(0);
    Some(depth.iter().map(|&d| d == crate::repkit::DEEP || d + c >= top).collect())
}

fn masked_norm(v: &Vector, mask: Option<&[bool]>) -> f64 {
    match mask {
        None => v.norm(),
        Some(m) => v.iter().zip(m.iter().cycle()).filter(|(_, &k)| k).map(|(z, _)| z.norm_sqr()).sum::<f64>().sqrt(),
    }
}

/// As `romberg`, measuring differences only on the masked coordinates; the
/// mask is repeated when the vectors are stacked copies of the space.
pub fn romberg_masked(ms: &[u32], seq: &[Vector], mask: Option<&[bool]>, tol: f64) -> (Vector, Trace) {
    let n = seq.len();
    let mut prev: Vec<Vector> = Vec::new();
    let mut diag: Vec<Vector> = Vec::new();
    for (i, v) in seq.iter().enumerate() {
        let mut row = vec![v.clone()];
        for k in 1..=i {
            let f = 1.0 / ((1u64 << k) as f64 - 1.0);
            let t = &row[k - 1] + (&row[k - 1] - &prev[k - 1]) * C::new(f, 0.0);
            row.push(t);
        }
        diag.push(row[i].clone());
        prev = row;
    }
    let steps: Vec<f64> = diag.windows(2).map(|w| masked_norm(&(&w[1] - &w[0]), mask)).collect();
    let last = diag[n - 1].clone();
    let scale = masked_norm(&last, mask).max(1.0);
    let converged = steps.last().map(|&s| s <= tol * scale).unwrap_or(false);
    let trace = Trace { m: ms.to_vec(), raw: seq.iter().map(|v| masked_norm(v, mask)).collect(), steps, converged };
    (last, trace)
}

pub fn romberg_scalar(ms: &[u32], seq: &[C], tol: f64) -> (C, Trace) {
    let vs: Vec<Vector> = seq.iter().map(|&c| Vector::from_element(1, c)).collect();
    let (v, t) = romberg(ms, &vs, tol);
    (v[0], t)
}

/// `f_p = -(I - p pi(u_NN))^{-1} eta_NN`.
pub fn f_p(pi: &MatRep, top: usize, eta_nn: &Vector, p: f64) -> QResult<Vector> {
    let a = pi.image(GenSym::u(top, top));
    let m = Op::identity(pi.dim).sub(&a.scale(C::new(p, 0.0)));
    Ok(-m.solve(eta_nn)?)
}

/// The family `f_p` over the schedule.
pub fn f_family(pi: &MatRep, top: usize, eta_nn: &Vector, sched: &Schedule) -> QResult<Vec<(u32, Vector)>> {
    sched.validate()?;
    let ms = sched.ms();
    let out = crate::par::map(&ms, |&m| f_p(pi, top, eta_nn, Schedule::p(m)).map(|f| (m, f)));
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn romberg_polynomial_is_exact() {
        let ms: Vec<u32> = (3..=7).collect();
        let seq: Vec<C> = ms
            .iter()
            .map(|&m| {
                let h = 0.5f64.powi(m as i32);
                C::new(2.0 + 3.0 * h - h * h + 0.5 * h * h * h, 0.0)
            })
            .collect();
        let (v, t) = romberg_scalar(&ms, &seq, 1e-12);
        assert!((v.re - 2.0).abs() < 1e-13);
        assert!(t.converged);
    }

    #[test]
    fn resolvent_limit_on_irrep() {
        let pi = MatRep::suq2_irrep(4096, crate::algebra::QPoint::half()).unwrap();
        let mut e0 = Vector::from_element(pi.dim, C::new(0.0, 0.0));
        e0[0] = C::new(1.0, 0.0);
        let sched = Schedule::default();
        let fam = f_family(&pi, 2, &e0, &sched).unwrap();
        // eta_p(u_22) = (alpha* - 1) f_p tends to e_0
        let ms: Vec<u32> = fam.iter().map(|x| x.0).collect();
        let vals: Vec<Vector> = fam
            .iter()
            .map(|(_, f)| pi.image(GenSym::u(2, 2)).matvec(f) - f)
            .collect();
        let (_, t) = romberg(&ms, &vals, 1e-10);
        assert!(!t.converged);
        let mask = core_mask(&pi.depth, Some(32)).unwrap();
        let (lim, t) = romberg_masked(&ms, &vals, Some(&mask), 1e-10);
        assert!(t.converged, "{:?}", t);
        assert!(masked_norm(&(&lim - &e0), Some(&mask)) < 1e-10);
    }
}
