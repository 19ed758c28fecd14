//! Sampled test of the generating-functional conditions.

use super::functional::Functional;
use crate::algebra::AlgElt;
use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct GeneratingReport {
    pub psi_one: f64,
    pub hermitian_defect: f64,
    pub gram_min_eig: f64,
    pub battery_size: usize,
    pub ok: bool,
}

/// Gram matrix `[phi(a_i* a_j)]`.
pub fn gram(phi: &Functional, battery: &[AlgElt]) -> DMatrix<Complex64> {
    let n = battery.len();
    let adj: Vec<AlgElt> = battery.iter().map(|a| a.adjoint()).collect();
    let vals = crate::par::map_range(n * n, |e| phi.eval(&(&adj[e / n] * &battery[e % n])));
    DMatrix::from_row_slice(n, n, &vals)
}

/// Smallest eigenvalue of the hermitian part.
pub fn min_eig(g: &DMatrix<Complex64>) -> f64 {
    if g.nrows() == 0 {
        return 0.0;
    }
    let h = (g + g.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn is_generating(psi: &Functional, battery: &[AlgElt], tol: f64) -> GeneratingReport {
    let psi_one = psi.eval(&AlgElt::one(psi.ctx())).norm();
    let hermitian_defect = psi.hermitian_defect(battery);
    let gram_min_eig = min_eig(&gram(psi, battery));
    GeneratingReport {
        psi_one,
        hermitian_defect,
        gram_min_eig,
        battery_size: battery.len(),
        ok: psi_one <= tol && hermitian_defect <= tol && gram_min_eig >= -tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ctx, QPoint};
    use crate::hopf::battery::{k1_battery, BatterySpec};

    #[test]
    fn drift_and_negated_gaussian() {
        let c = Ctx::suq(3);
        let q0 = QPoint::half();
        let b = k1_battery(c, &BatterySpec::new(2)).unwrap();
        let drift = Functional::eps_prime(c, q0.clone(), 2).unwrap();
        let r = is_generating(&drift, &b, 1e-10);
        assert!(r.ok && r.gram_min_eig.abs() < 1e-12);
        let g = Functional::eps_second(c, q0.clone(), 2, 2).unwrap().scale(Complex64::new(0.5, 0.0));
        assert!(is_generating(&g, &b, 1e-10).ok);
        let neg = g.scale(Complex64::new(-1.0, 0.0));
        assert!(!is_generating(&neg, &b, 1e-10).ok);
    }
}
