//! U_q(N) through SU_q(N+1): lifting along `t_N`, pushing functionals back
//! through a section, and the decomposition pipeline.

use crate::algebra::{reduce, AlgElt, Ctx, GenSym, QCoeff, QPoint, Variant, Word};
use crate::error::{QError, QResult};
use crate::gauss::{no_gc_witness, GaussParams, HermitianReport};
use crate::hopf::battery::words_up_to;
use crate::hopf::{proj_p, Functional, Morphism};
use crate::repkit::{MatRep, C};
use crate::schurmann::{hunt_decompose, EtaSpec, HuntDecomposition, HuntOptions};
use serde::Serialize;

fn need_uq(ctx: Ctx) -> QResult<usize> {
    if ctx.variant != Variant::Uq {
        return Err(QError::Precondition(format!("expected a U_q context, got {:?}", ctx)));
    }
    Ok(ctx.n)
}

/// `pi o t_N`, a representation of SU_q(N+1).
pub fn lift_rep(pi: &MatRep) -> QResult<MatRep> {
    let n = need_uq(pi.ctx)?;
    pi.pullback(&Morphism::t(n)?)
}

/// `psi o t_N`.
pub fn lift_functional(psi: &Functional) -> QResult<Functional> {
    let n = need_uq(psi.ctx())?;
    let t = Morphism::t(n)?;
    let big = Ctx::suq(n + 1);
    let inner = psi.clone();
    Ok(Functional::new(big, psi.q0().clone(), format!("{} o t_{}", psi.desc, n), psi.flags, move |w| {
        match t.apply(&AlgElt::word(big, w.to_vec(), QCoeff::one())) {
            Ok(a) => inner.eval(&a),
            Err(_) => C::new(f64::NAN, f64::NAN),
        }
    }))
}

/// Right inverse of `t_N` on words: `Dinv -> u_{N+1,N+1}`.
pub fn section_word(n: usize, w: &[GenSym]) -> Word {
    w.iter()
        .map(|&g| match g {
            GenSym::Dinv => GenSym::u(n + 1, n + 1),
            GenSym::DinvStar => GenSym::us(n + 1, n + 1),
            other => other,
        })
        .collect()
}

/// `psi_hat o section` on U_q(N). Only meaningful when `psi_hat` kills the
/// kernel of `t_N`; see `kernel_residual`.
pub fn push_functional(psi_hat: &Functional, n: usize) -> QResult<Functional> {
    if psi_hat.ctx() != Ctx::suq(n + 1) {
        return Err(QError::ContextMismatch(format!("push to U_q({}) needs an SU_q({}) functional", n, n + 1)));
    }
    let inner = psi_hat.clone();
    Ok(Functional::new(Ctx::uq(n), psi_hat.q0().clone(), format!("{} o section", psi_hat.desc), psi_hat.flags, move |w| {
        inner.eval_word(&section_word(n, w))
    }))
}

/// Largest `|psi_hat(a r b)|` over kernel generators r of `t_N` and words
/// a, b of degree at most `deg` (one of them empty).
pub fn kernel_residual(psi_hat: &Functional, n: usize, deg: usize) -> QResult<f64> {
    let big = Ctx::suq(n + 1);
    let ker = Morphism::t(n)?.kernel_generators()?;
    let mut sides = vec![AlgElt::one(big)];
    sides.extend(words_up_to(&big.generators(true), deg).into_iter().map(|w| AlgElt::word(big, w, QCoeff::one())));
    let mut items = Vec::new();
    for r in &ker {
        for s in &sides {
            items.push(r * s);
            items.push(s * r);
        }
    }
    Ok(crate::par::map(&items, |x| psi_hat.eval(x).norm()).into_iter().fold(0.0, f64::max))
}

/// Free real parameters of a gaussian generating functional on U_q(N).
pub fn gaussian_parameter_count(n: usize) -> usize {
    n + n * (n + 1) / 2
}

pub struct UqHunt {
    pub n: usize,
    pub lifted: HuntDecomposition,
    pub psi: Functional,
    pub psi_g: Functional,
    pub kernel_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UqLevel {
    /// Level on the SU_q(N+1) side.
    pub n: usize,
    /// The U_q group it lives on, `n - 1`.
    pub uq: usize,
    pub dim: usize,
}

impl UqHunt {
    pub fn levels(&self) -> Vec<UqLevel> {
        self.lifted.levels.iter().map(|l| UqLevel { n: l.n, uq: l.n - 1, dim: l.dim }).collect()
    }

    pub fn parameter_count(&self) -> usize {
        let d = self.lifted.gauss.dim();
        d + d * (d + 1) / 2
    }
}

/// Runs the SU_q(N+1) pipeline on the lift of `pi` and pushes the result
/// back to U_q(N). Level indices in `spec` refer to SU_q(N+1).
pub fn uq_hunt(n: usize, q0: QPoint, pi: Option<&MatRep>, spec: &EtaSpec, gauss: &GaussParams, opts: &HuntOptions) -> QResult<UqHunt> {
    let lifted_pi = match pi {
        Some(p) => {
            if p.ctx != Ctx::uq(n) {
                return Err(QError::ContextMismatch(format!("representation of {:?} for U_q({})", p.ctx, n)));
            }
            Some(lift_rep(p)?)
        }
        None => None,
    };
    let big = Ctx::suq(n + 1);
    let lifted = hunt_decompose(big, q0, lifted_pi.as_ref(), spec, gauss, opts)?;
    let kres = kernel_residual(&lifted.psi, n, 1)?;
    if kres > opts.tol {
        return Err(QError::Numeric(format!("lifted functional does not vanish on ker t_{} ({:.3e})", n, kres)));
    }
    let psi = push_functional(&lifted.psi, n)?;
    let psi_g = push_functional(&lifted.psi_g, n)?;
    Ok(UqHunt { n, lifted, psi, psi_g, kernel_residual: kres })
}

/// Pairs of composites that must agree:
/// `t-breve_n o s-breve_{n,N}` and `s_{n,N} o t-breve_N`, both U_q(N) -> SU_q(n).
pub fn compatibility_pair(n: usize, big: usize) -> QResult<(Morphism, Morphism)> {
    let lhs = Morphism::s_breve_chain(n, big)?.then(&Morphism::t_breve(n)?)?;
    let rhs = Morphism::t_breve(big)?.then(&Morphism::s_chain(n, big)?)?;
    Ok((lhs, rhs))
}

/// Number of battery words on which two morphisms disagree after reduction.
pub fn morphism_disagreements(a: &Morphism, b: &Morphism, deg: usize) -> QResult<usize> {
    if a.source() != b.source() || a.target() != b.target() {
        return Err(QError::ContextMismatch(format!("{} vs {}", a.name, b.name)));
    }
    let src = a.source();
    let words = words_up_to(&src.generators(true), deg);
    let r = crate::par::map(&words, |w| -> QResult<bool> {
        let x = AlgElt::word(src, w.clone(), QCoeff::one());
        Ok(!reduce(&(a.apply(&x)? - b.apply(&x)?))?.is_zero())
    });
    r.into_iter().try_fold(0, |n, x| x.map(|bad| n + bad as usize))
}

/// Number of battery elements where `P o m` and `m o P` differ exactly.
pub fn projection_disagreements(m: &Morphism, battery: &[AlgElt]) -> QResult<usize> {
    let r = crate::par::map(battery, |a| -> QResult<bool> {
        let lhs = proj_p(&m.apply(a)?);
        let rhs = m.apply(&proj_p(a))?;
        Ok(!reduce(&(lhs - rhs))?.is_zero())
    });
    r.into_iter().try_fold(0, |n, x| x.map(|bad| n + bad as usize))
}

/// Failure of (GC) on U_q(N), N >= 2, read on SU_q(N+1).
pub fn uq_no_gc_witness(n: usize) -> QResult<HermitianReport> {
    if n < 2 {
        return Err(QError::Precondition("U_q(1) = U(1) has (GC)".into()));
    }
    Ok(no_gc_witness(n + 1)?.1)
}
