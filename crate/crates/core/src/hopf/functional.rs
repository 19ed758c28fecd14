//! Linear functionals on the coordinate algebra, evaluated word by word.

use super::structure::{
    basis_extension, coproduct_word, counit_word, directions, eps_prime_word, eps_second_word,
};
use crate::algebra::{AlgElt, Ctx, GenSym, QPoint};
use crate::error::{QError, QResult};
use num::complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

pub type WordFn = dyn Fn(&[GenSym]) -> Complex64 + Send + Sync;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub hermitian: bool,
    pub zero_normalized: bool,
    pub drift: bool,
    pub gaussian: bool,
    pub generating_candidate: bool,
}

impl Flags {
    pub fn drift() -> Self {
        Flags { hermitian: true, zero_normalized: true, drift: true, gaussian: true, generating_candidate: true }
    }

    pub fn gaussian() -> Self {
        Flags { hermitian: true, zero_normalized: true, drift: false, gaussian: true, generating_candidate: true }
    }

    pub fn generating() -> Self {
        Flags { hermitian: true, zero_normalized: true, drift: false, gaussian: false, generating_candidate: true }
    }

    fn meet(self, o: Flags) -> Flags {
        Flags {
            hermitian: self.hermitian && o.hermitian,
            zero_normalized: self.zero_normalized && o.zero_normalized,
            drift: self.drift && o.drift,
            gaussian: self.gaussian && o.gaussian,
            generating_candidate: self.generating_candidate && o.generating_candidate,
        }
    }
}

/// A linear functional given by its values on words.
#[derive(Clone)]
pub struct Functional {
    ctx: Ctx,
    q0: QPoint,
    f: Arc<WordFn>,
    pub flags: Flags,
    pub desc: String,
}

impl std::fmt::Debug for Functional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Functional({}, {:?})", self.desc, self.ctx)
    }
}

impl Functional {
    pub fn new<F>(ctx: Ctx, q0: QPoint, desc: impl Into<String>, flags: Flags, f: F) -> Self
    where
        F: Fn(&[GenSym]) -> Complex64 + Send + Sync + 'static,
    {
        Functional { ctx, q0, f: Arc::new(f), flags, desc: desc.into() }
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn q0(&self) -> &QPoint {
        &self.q0
    }

    pub fn eval_word(&self, w: &[GenSym]) -> Complex64 {
        (self.f)(w)
    }

    pub fn eval(&self, a: &AlgElt) -> Complex64 {
        let q = self.q0.value();
        a.terms().map(|(w, c)| c.eval_f64(q) * (self.f)(w)).sum()
    }

    pub fn try_eval(&self, a: &AlgElt) -> QResult<Complex64> {
        if a.ctx() != self.ctx {
            return Err(QError::ContextMismatch(format!("{:?} vs {:?}", a.ctx(), self.ctx)));
        }
        Ok(self.eval(a))
    }

    pub fn zero(ctx: Ctx, q0: QPoint) -> Self {
        Functional::new(ctx, q0, "0", Flags::drift(), |_| Complex64::new(0.0, 0.0))
    }

    pub fn counit(ctx: Ctx, q0: QPoint) -> Self {
        let flags = Flags { hermitian: true, ..Flags::default() };
        Functional::new(ctx, q0, "eps", flags, |w| Complex64::new(counit_word(w), 0.0))
    }

    pub fn eps_prime(ctx: Ctx, q0: QPoint, j: usize) -> QResult<Self> {
        check_direction(ctx, j)?;
        Ok(Functional::new(ctx, q0, format!("eps'_{}", j), Flags::drift(), move |w| eps_prime_word(ctx, w, j)))
    }

    pub fn eps_second(ctx: Ctx, q0: QPoint, j: usize, k: usize) -> QResult<Self> {
        check_direction(ctx, j)?;
        check_direction(ctx, k)?;
        let flags = Flags { hermitian: true, zero_normalized: true, ..Flags::default() };
        Ok(Functional::new(ctx, q0, format!("eps''_{}{}", j, k), flags, move |w| eps_second_word(ctx, w, j, k)))
    }

    pub fn add(&self, o: &Functional) -> QResult<Functional> {
        self.same_ctx(o)?;
        let (f, g) = (self.f.clone(), o.f.clone());
        Ok(Functional {
            ctx: self.ctx,
            q0: self.q0.clone(),
            f: Arc::new(move |w: &[GenSym]| f(w) + g(w)),
            flags: self.flags.meet(o.flags),
            desc: format!("({} + {})", self.desc, o.desc),
        })
    }

    pub fn scale(&self, c: Complex64) -> Functional {
        let f = self.f.clone();
        let real = c.im == 0.0;
        let mut flags = self.flags;
        flags.hermitian &= real;
        flags.generating_candidate &= real && c.re >= 0.0;
        flags.drift &= real;
        Functional {
            ctx: self.ctx,
            q0: self.q0.clone(),
            f: Arc::new(move |w: &[GenSym]| c * f(w)),
            flags,
            desc: format!("{}*{}", c, self.desc),
        }
    }

    /// Convolution `(self (x) o) o Delta`.
    pub fn convolve(&self, o: &Functional) -> QResult<Functional> {
        self.same_ctx(o)?;
        let (f, g) = (self.f.clone(), o.f.clone());
        let n = self.ctx.n;
        Ok(Functional {
            ctx: self.ctx,
            q0: self.q0.clone(),
            f: Arc::new(move |w: &[GenSym]| coproduct_word(n, w).iter().map(|(x, y)| f(x) * g(y)).sum()),
            flags: Flags::default(),
            desc: format!("({} * {})", self.desc, o.desc),
        })
    }

    /// `self o P` with the projection onto K_2.
    pub fn compose_p(&self) -> Functional {
        let ctx = self.ctx;
        let q = self.q0.value();
        let f = self.f.clone();
        let one = f(&[]);
        let on_d: Vec<Complex64> = basis_extension(ctx)
            .iter()
            .map(|d| d.terms().map(|(w, c)| c.eval_f64(q) * f(w)).sum())
            .collect();
        Functional {
            ctx,
            q0: self.q0.clone(),
            f: Arc::new(move |w: &[GenSym]| {
                let mut v = f(w) - one * counit_word(w);
                for (k, j) in directions(ctx).enumerate() {
                    v -= on_d[k] * eps_prime_word(ctx, w, j);
                }
                v
            }),
            flags: Flags { zero_normalized: true, ..self.flags },
            desc: format!("{} o P", self.desc),
        }
    }

    /// `max |phi(a*) - conj(phi(a))|` over the given elements.
    pub fn hermitian_defect(&self, battery: &[AlgElt]) -> f64 {
        crate::par::map(battery, |a| (self.eval(&a.adjoint()) - self.eval(a).conj()).norm())
            .into_iter()
            .fold(0.0, f64::max)
    }

    fn same_ctx(&self, o: &Functional) -> QResult<()> {
        if self.ctx != o.ctx {
            return Err(QError::ContextMismatch(format!("{:?} vs {:?}", self.ctx, o.ctx)));
        }
        Ok(())
    }
}

fn check_direction(ctx: Ctx, j: usize) -> QResult<()> {
    if !directions(ctx).contains(&j) {
        return Err(QError::InvalidIndex(format!("direction {} not in {:?}", j, directions(ctx))));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_elt;

    #[test]
    fn counit_is_convolution_unit() {
        let c = Ctx::suq(2);
        let q0 = QPoint::half();
        let psi = Functional::eps_prime(c, q0.clone(), 2).unwrap().add(&Functional::eps_second(c, q0.clone(), 2, 2).unwrap()).unwrap();
        let e = Functional::counit(c, q0);
        let l = e.convolve(&psi).unwrap();
        let r = psi.convolve(&e).unwrap();
        for s in ["u[1,1]*u[2,2]", "u[1,2]*u*[1,2]", "u[2,2]^3 - 2*u*[1,1]", "1"] {
            let a = parse_elt(c, s).unwrap();
            assert!((l.eval(&a) - psi.eval(&a)).norm() < 1e-14);
            assert!((r.eval(&a) - psi.eval(&a)).norm() < 1e-14);
        }
    }

    #[test]
    fn derivation_rule() {
        let c = Ctx::suq(3);
        let q0 = QPoint::half();
        let d = Functional::eps_prime(c, q0.clone(), 3).unwrap();
        let e = Functional::counit(c, q0);
        let xs = ["u[1,1]", "u*[2,2]*u[3,3]", "u[1,2] + u[3,3]", "u[2,2]*u[2,2] - 3"];
        for x in xs {
            for y in xs {
                let a = parse_elt(c, x).unwrap();
                let b = parse_elt(c, y).unwrap();
                let lhs = d.eval(&(&a * &b));
                let rhs = d.eval(&a) * e.eval(&b) + e.eval(&a) * d.eval(&b);
                assert!((lhs - rhs).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn compose_p_kills_basis() {
        let c = Ctx::suq(3);
        let q0 = QPoint::half();
        let psi = Functional::eps_prime(c, q0.clone(), 2).unwrap().add(&Functional::counit(c, q0)).unwrap();
        let p = psi.compose_p();
        assert!(p.eval(&AlgElt::one(c)).norm() < 1e-15);
        for d in basis_extension(c) {
            assert!(p.eval(&d).norm() < 1e-15);
        }
    }
}
