use super::gen::{Ctx, GenSym, Variant, Word};
use super::qcoeff::QCoeff;
use crate::error::{QError, QResult};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Formal linear combination of words. No relation is applied by the
/// arithmetic here; see `normal_form` for that.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgElt {
    ctx: Ctx,
    terms: BTreeMap<Word, QCoeff>,
}

impl AlgElt {
    pub fn zero(ctx: Ctx) -> Self {
        AlgElt { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: Ctx) -> Self {
        AlgElt::scalar(ctx, QCoeff::one())
    }

    pub fn scalar(ctx: Ctx, c: QCoeff) -> Self {
        let mut a = AlgElt::zero(ctx);
        a.add_term(Vec::new(), c);
        a
    }

    /// A single generator. In SU_q contexts `Dinv` and its adjoint are 1.
    pub fn gen(ctx: Ctx, g: GenSym) -> QResult<Self> {
        ctx.check(g)?;
        if ctx.variant == Variant::SUq && matches!(g, GenSym::Dinv | GenSym::DinvStar) {
            return Ok(AlgElt::one(ctx));
        }
        Ok(AlgElt::word(ctx, vec![g], QCoeff::one()))
    }

    pub fn u(ctx: Ctx, j: usize, k: usize) -> Self {
        AlgElt::gen(ctx, GenSym::u(j, k)).expect("index in range")
    }

    pub fn us(ctx: Ctx, j: usize, k: usize) -> Self {
        AlgElt::gen(ctx, GenSym::us(j, k)).expect("index in range")
    }

    /// Word with coefficient, trusted to be valid for the context.
    pub fn word(ctx: Ctx, w: Word, c: QCoeff) -> Self {
        let mut a = AlgElt::zero(ctx);
        let w = if ctx.variant == Variant::SUq {
            w.into_iter().filter(|g| !matches!(g, GenSym::Dinv | GenSym::DinvStar)).collect()
        } else {
            w
        };
        a.add_term(w, c);
        a
    }

    pub fn from_terms(ctx: Ctx, terms: impl IntoIterator<Item = (Word, QCoeff)>) -> Self {
        let mut a = AlgElt::zero(ctx);
        for (w, c) in terms {
            a.add_term(w, c);
        }
        a
    }

    pub fn validate(&self) -> QResult<()> {
        for w in self.terms.keys() {
            for &g in w {
                self.ctx.check(g)?;
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    /// Same terms reinterpreted in another context (no validation).
    pub fn with_ctx(&self, ctx: Ctx) -> Self {
        AlgElt { ctx, terms: self.terms.clone() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QCoeff)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, QCoeff> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[GenSym]) -> QCoeff {
        self.terms.get(w).cloned().unwrap_or_else(QCoeff::zero)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn has_star(&self) -> bool {
        self.terms.keys().any(|w| w.iter().any(|g| g.is_starred()))
    }

    pub fn add_term(&mut self, w: Word, c: QCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn same_ctx(&self, o: &AlgElt) -> QResult<()> {
        if self.ctx != o.ctx {
            return Err(QError::ContextMismatch(format!("{} vs {}", self.ctx, o.ctx)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &AlgElt) -> QResult<AlgElt> {
        self.same_ctx(o)?;
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_mul(&self, o: &AlgElt) -> QResult<AlgElt> {
        self.same_ctx(o)?;
        let mut r = AlgElt::zero(self.ctx);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.add_term(w, c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &QCoeff) -> AlgElt {
        if c.is_zero() {
            return AlgElt::zero(self.ctx);
        }
        AlgElt {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Flips stars, reverses words and conjugates coefficients (q is real).
    pub fn adjoint(&self) -> AlgElt {
        let mut r = AlgElt::zero(self.ctx);
        for (w, c) in &self.terms {
            let aw: Word = w.iter().rev().map(|g| g.star()).collect();
            r.add_term(aw, c.conj());
        }
        r
    }

    pub fn pow(&self, e: u32) -> AlgElt {
        let mut r = AlgElt::one(self.ctx);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Linear extension of a word map.
    pub fn map_words<F>(&self, target: Ctx, mut f: F) -> QResult<AlgElt>
    where
        F: FnMut(&[GenSym]) -> QResult<AlgElt>,
    {
        let mut r = AlgElt::zero(target);
        for (w, c) in &self.terms {
            let img = f(w)?;
            if img.ctx != target {
                return Err(QError::ContextMismatch("word image context".into()));
            }
            for (w2, c2) in img.terms {
                r.add_term(w2, c * &c2);
            }
        }
        Ok(r)
    }

    /// Multiplicative extension of a generator substitution.
    pub fn substitute<F>(&self, target: Ctx, mut f: F) -> QResult<AlgElt>
    where
        F: FnMut(GenSym) -> QResult<AlgElt>,
    {
        self.map_words(target, |w| {
            let mut acc = AlgElt::one(target);
            for &g in w {
                acc = acc.try_mul(&f(g)?)?;
                if acc.is_zero() {
                    break;
                }
            }
            Ok(acc)
        })
    }
}

impl Add for &AlgElt {
    type Output = AlgElt;
    fn add(self, o: &AlgElt) -> AlgElt {
        self.try_add(o).expect("context mismatch in add")
    }
}

impl Sub for &AlgElt {
    type Output = AlgElt;
    fn sub(self, o: &AlgElt) -> AlgElt {
        self.try_add(&-o).expect("context mismatch in sub")
    }
}

impl Mul for &AlgElt {
    type Output = AlgElt;
    fn mul(self, o: &AlgElt) -> AlgElt {
        self.try_mul(o).expect("context mismatch in mul")
    }
}

impl Neg for &AlgElt {
    type Output = AlgElt;
    fn neg(self) -> AlgElt {
        self.scale(&QCoeff::from_int(-1))
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgElt> for AlgElt {
            type Output = AlgElt;
            fn $m(self, o: AlgElt) -> AlgElt {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a AlgElt> for AlgElt {
            type Output = AlgElt;
            fn $m(self, o: &AlgElt) -> AlgElt {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<AlgElt> for &'a AlgElt {
            type Output = AlgElt;
            fn $m(self, o: AlgElt) -> AlgElt {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for AlgElt {
    type Output = AlgElt;
    fn neg(self) -> AlgElt {
        -&self
    }
}

impl fmt::Display for AlgElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.is_laurent() { format!("({})", c) } else { c.to_string() };
            if w.is_empty() {
                write!(f, "{}", cs)?;
            } else if c.is_one() {
                let ws: Vec<String> = w.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", ws.join("*"))?;
            } else {
                let ws: Vec<String> = w.iter().map(|g| g.to_string()).collect();
                write!(f, "{}*{}", cs, ws.join("*"))?;
            }
        }
        Ok(())
    }
}
