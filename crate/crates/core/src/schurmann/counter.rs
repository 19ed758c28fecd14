//! A top value `eta(u_33)` on the product of the two SU_q(2) blocks of
//! SU_q(3) that belongs to no cocycle.

use super::cocycle::{coboundary, cocycle_from_eta_nn, Method};
use super::plimit::{f_p, Schedule};
use crate::algebra::{GenSym, QPoint};
use crate::error::{QError, QResult};
use crate::repkit::{MatRep, Vector, C};
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize)]
pub struct Oracle {
    /// `x_k = prod_{l <= k} sqrt(1 - q^{2l})`.
    pub x: Vec<f64>,
    /// `sum_{k < K} x_k^2` for K = 1..M.
    pub partial_sums: Vec<f64>,
    /// Predicted `||eta_p(u_11)||` per schedule entry.
    pub norms: Vec<f64>,
}

/// Independent prediction: `eta_p(u_11) = e_0 (x) sum_k p^k x_k e_k`.
pub fn recursion_oracle(m: usize, q: f64, ms: &[u32]) -> Oracle {
    let mut x = Vec::with_capacity(m);
    let mut acc = 1.0;
    for k in 0..m {
        if k > 0 {
            acc *= (1.0 - q.powi(2 * k as i32)).sqrt();
        }
        x.push(acc);
    }
    let partial_sums = x
        .iter()
        .scan(0.0, |s, v| {
            *s += v * v;
            Some(*s)
        })
        .collect();
    let norms = ms
        .iter()
        .map(|&mm| {
            let p = Schedule::p(mm);
            x.iter().enumerate().map(|(k, v)| p.powi(2 * k as i32) * v * v).sum::<f64>().sqrt()
        })
        .collect();
    Oracle { x, partial_sums, norms }
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterReport {
    pub dim: usize,
    pub m: Vec<u32>,
    pub norms: Vec<f64>,
    pub oracle: Oracle,
    pub oracle_defect: f64,
    pub monotone: bool,
    pub ratio: f64,
    pub oracle_ratio: f64,
    /// `||eta(u_11)||` of the limit on the half-size truncation and on this one.
    pub truncation_norms: (f64, f64),
    pub plimit_error: Option<String>,
    pub control_converged: bool,
    pub control_distance: f64,
    pub verdict: String,
}

fn product_rep(m: usize, q0: &QPoint) -> QResult<MatRep> {
    let rho = MatRep::suq2_irrep(m, q0.clone())?;
    let b1 = MatRep::block_embed(&rho, 3, 0)?;
    let b2 = MatRep::block_embed(&rho, 3, 1)?;
    MatRep::conv_product(&b1, &b2)
}

fn e00(dim: usize) -> Vector {
    let mut v = Vector::from_element(dim, C::new(0.0, 0.0));
    v[0] = C::new(1.0, 0.0);
    v
}

/// `||(pi(u_11) - 1) f_p||` along the schedule with `eta(u_33) = e_0 (x) e_0`.
fn candidate_norms(pi: &MatRep, ms: &[u32]) -> QResult<Vec<f64>> {
    let eta = e00(pi.dim);
    let u11 = pi.image(GenSym::u(1, 1));
    let out = crate::par::map(ms, |&mm| {
        let f = f_p(pi, 3, &eta, Schedule::p(mm))?;
        Ok((u11.matvec(&f) - &f).norm())
    });
    out.into_iter().collect()
}

/// `||eta(u_11)||` of the p-limit cocycle, or the value at the finest p with
/// the error when the limit does not settle.
fn limit_norm(pi: &Arc<MatRep>, sched: &Schedule) -> QResult<(f64, Option<String>)> {
    let eta = e00(pi.dim);
    match cocycle_from_eta_nn(pi.clone(), &eta, Method::PLimit, &Schedule { core: None, ..sched.clone() }) {
        Ok(c) => Ok((c.value(GenSym::u(1, 1)).norm(), None)),
        Err(e) => Ok((*candidate_norms(pi, &[sched.m_max])?.last().unwrap(), Some(e.to_string()))),
    }
}

pub fn counterexample_n3(m: usize, q0: QPoint, sched: &Schedule) -> QResult<CounterReport> {
    if m < 16 {
        return Err(QError::Precondition("counterexample needs M >= 16".into()));
    }
    sched.validate()?;
    let ms = sched.ms();
    let oracle = recursion_oracle(m, q0.value(), &ms);

    let pi = Arc::new(product_rep(m, &q0)?);
    let norms = candidate_norms(&pi, &ms)?;
    let oracle_defect = norms.iter().zip(&oracle.norms).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let monotone = norms.windows(2).all(|w| w[1] > w[0]);
    let ratio = norms[norms.len() - 1] / norms[0];
    let oracle_ratio = oracle.norms[oracle.norms.len() - 1] / oracle.norms[0];

    // on a finite truncation the limit exists; its size grows with M
    let half = Arc::new(product_rep(m / 2, &q0)?);
    let lim_half = limit_norm(&half, sched)?;
    let lim_full = limit_norm(&pi, sched)?;
    let truncation_norms = (lim_half.0, lim_full.0);
    let plimit_error = lim_full.1;

    // control: a top value in the range of pi(u_33) - 1
    let g = e00(pi.dim);
    let a = pi.image(GenSym::u(3, 3));
    let eta_ctl = a.matvec(&g) - &g;
    let (control_converged, control_distance) = match cocycle_from_eta_nn(pi.clone(), &eta_ctl, Method::PLimit, sched) {
        Ok(c) => (true, c.max_distance(&coboundary(pi.clone(), &g)?)),
        Err(_) => (false, f64::INFINITY),
    };

    let grows = truncation_norms.1 > 1.2 * truncation_norms.0;
    let divergent = monotone && grows;
    Ok(CounterReport {
        dim: pi.dim,
        m: ms,
        norms,
        oracle,
        oracle_defect,
        monotone,
        ratio,
        oracle_ratio,
        truncation_norms,
        plimit_error,
        control_converged,
        control_distance,
        verdict: if divergent { "divergent" } else { "inconclusive" }.into(),
    })
}
