//! Quantum subgroup morphisms between the coordinate algebras.

use super::structure::counit_exact;
use crate::algebra::{reduce, relation_catalog, AlgElt, Ctx, GenSym};
use crate::error::{QError, QResult};

/// Elementary surjective *-homomorphisms, given by generator substitutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// SU_q(n) -> SU_q(n-1): drop the last row and column, `u_nn -> 1`.
    S(usize),
    /// SU_q(n+1) -> U_q(n): `u_{n+1,n+1} -> Dinv`, other border entries to 0.
    T(usize),
    /// U_q(n) -> SU_q(n): `Dinv -> 1`.
    TBreve(usize),
    /// SU_q(n) -> torus of rank n-1: `u_jk -> delta_jk u_jj`.
    Torus(usize),
}

impl Step {
    pub fn source(self) -> Ctx {
        match self {
            Step::S(n) | Step::Torus(n) => Ctx::suq(n),
            Step::T(n) => Ctx::suq(n + 1),
            Step::TBreve(n) => Ctx::uq(n),
        }
    }

    pub fn target(self) -> Ctx {
        match self {
            Step::S(n) => Ctx::suq(n - 1),
            Step::T(n) => Ctx::uq(n),
            Step::TBreve(n) => Ctx::suq(n),
            Step::Torus(n) => Ctx::torus(n),
        }
    }

    fn image_unstarred(self, g: GenSym) -> AlgElt {
        let tgt = self.target();
        let (j, k) = match g {
            GenSym::U(j, k) => (j as usize, k as usize),
            GenSym::Dinv => return AlgElt::one(tgt),
            _ => unreachable!(),
        };
        match self {
            Step::S(n) => {
                if j < n && k < n {
                    AlgElt::u(tgt, j, k)
                } else if j == k {
                    AlgElt::one(tgt)
                } else {
                    AlgElt::zero(tgt)
                }
            }
            Step::T(n) => {
                if j <= n && k <= n {
                    AlgElt::u(tgt, j, k)
                } else if j == k {
                    AlgElt::gen(tgt, GenSym::Dinv).unwrap()
                } else {
                    AlgElt::zero(tgt)
                }
            }
            Step::TBreve(_) => AlgElt::u(tgt, j, k),
            Step::Torus(_) => {
                if j == k {
                    AlgElt::u(tgt, j, j)
                } else {
                    AlgElt::zero(tgt)
                }
            }
        }
    }

    pub fn image(self, g: GenSym) -> AlgElt {
        if g.is_starred() {
            self.image_unstarred(g.star()).adjoint()
        } else {
            self.image_unstarred(g)
        }
    }
}

/// A composite of elementary steps, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub steps: Vec<Step>,
}

impl Morphism {
    fn single(name: String, s: Step) -> Self {
        Morphism { name, steps: vec![s] }
    }

    /// s_N : SU_q(N) -> SU_q(N-1).
    pub fn s(n: usize) -> QResult<Self> {
        if n < 2 {
            return Err(QError::Precondition("s_N needs N >= 2".into()));
        }
        Ok(Self::single(format!("s_{}", n), Step::S(n)))
    }

    /// s_{n,N} = s_{n+1} o ... o s_N : SU_q(N) -> SU_q(n).
    pub fn s_chain(n: usize, big: usize) -> QResult<Self> {
        if n == 0 || n > big {
            return Err(QError::Precondition(format!("s_{{{},{}}} needs 1 <= n <= N", n, big)));
        }
        Ok(Morphism { name: format!("s_{{{},{}}}", n, big), steps: (n + 1..=big).rev().map(Step::S).collect() })
    }

    /// t_N : SU_q(N+1) -> U_q(N).
    pub fn t(n: usize) -> QResult<Self> {
        if n == 0 {
            return Err(QError::Precondition("t_N needs N >= 1".into()));
        }
        Ok(Self::single(format!("t_{}", n), Step::T(n)))
    }

    /// t-breve_N : U_q(N) -> SU_q(N).
    pub fn t_breve(n: usize) -> QResult<Self> {
        if n == 0 {
            return Err(QError::Precondition("t-breve_N needs N >= 1".into()));
        }
        Ok(Self::single(format!("tb_{}", n), Step::TBreve(n)))
    }

    /// s-breve_{n,N} : U_q(N) -> U_q(n), the composite of
    /// s-breve_m = t_{m-1} o t-breve_m for m = N down to n+1.
    pub fn s_breve_chain(n: usize, big: usize) -> QResult<Self> {
        if n == 0 || n > big {
            return Err(QError::Precondition(format!("sb_{{{},{}}} needs 1 <= n <= N", n, big)));
        }
        let mut steps = Vec::new();
        for m in (n + 1..=big).rev() {
            steps.push(Step::TBreve(m));
            steps.push(Step::T(m - 1));
        }
        Ok(Morphism { name: format!("sb_{{{},{}}}", n, big), steps })
    }

    /// Torus map SU_q(N) -> T^{N-1}.
    pub fn torus(n: usize) -> QResult<Self> {
        Ok(Self::single(format!("tau_{}", n), Step::Torus(n)))
    }

    pub fn then(&self, o: &Morphism) -> QResult<Morphism> {
        if self.target() != o.source() {
            return Err(QError::ContextMismatch(format!("{} then {}", self.name, o.name)));
        }
        let mut steps = self.steps.clone();
        steps.extend(o.steps.iter().copied());
        Ok(Morphism { name: format!("{} o {}", o.name, self.name), steps })
    }

    pub fn source(&self) -> Ctx {
        self.steps.first().map(|s| s.source()).expect("nonempty morphism")
    }

    pub fn target(&self) -> Ctx {
        self.steps.last().map(|s| s.target()).expect("nonempty morphism")
    }

    /// Substitutes generators and expands, without reducing.
    pub fn apply(&self, a: &AlgElt) -> QResult<AlgElt> {
        if a.ctx() != self.source() {
            return Err(QError::ContextMismatch(format!("{} applied to {:?}", self.name, a.ctx())));
        }
        let mut cur = a.clone();
        for &s in &self.steps {
            cur = cur.substitute(s.target(), |g| Ok(s.image(g)))?;
        }
        Ok(cur)
    }

    /// Checks that every catalog relation of the source maps to zero and that
    /// the counit is preserved on generators. Returns the relations checked.
    pub fn verify(&self) -> QResult<usize> {
        let src = self.source();
        let mut count = 0;
        for r in relation_catalog(src) {
            let img = self.apply(&r.elt)?;
            if !reduce(&img)?.is_zero() {
                return Err(QError::Numeric(format!("{}: relation {} does not map to 0", self.name, r.name)));
            }
            count += 1;
        }
        for g in src.generators(true) {
            let a = AlgElt::gen(src, g)?;
            if counit_exact(&a) != counit_exact(&self.apply(&a)?) {
                return Err(QError::Numeric(format!("{}: counit not preserved on {}", self.name, g)));
            }
        }
        Ok(count)
    }

    /// Elements generating the kernel as an ideal: the generators whose image
    /// is a scalar, shifted by that scalar.
    pub fn kernel_generators(&self) -> QResult<Vec<AlgElt>> {
        let src = self.source();
        let mut out = Vec::new();
        for g in src.generators(false) {
            let a = AlgElt::gen(src, g)?;
            let img = reduce(&self.apply(&a)?)?;
            if img.degree() == 0 {
                out.push(a - AlgElt::scalar(src, img.coeff(&[])));
            }
        }
        Ok(out)
    }
}
