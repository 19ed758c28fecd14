use crate::error::{QError, QResult};
use num::rational::BigRational;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Generator alphabet. The derived order puts every `U` before any starred or
/// determinant letter and orders `U(j,k)` row-major, which is the normal order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GenSym {
    U(u8, u8),
    Ustar(u8, u8),
    Dinv,
    DinvStar,
}

impl GenSym {
    pub fn star(self) -> GenSym {
        match self {
            GenSym::U(j, k) => GenSym::Ustar(j, k),
            GenSym::Ustar(j, k) => GenSym::U(j, k),
            GenSym::Dinv => GenSym::DinvStar,
            GenSym::DinvStar => GenSym::Dinv,
        }
    }

    pub fn is_starred(self) -> bool {
        matches!(self, GenSym::Ustar(..) | GenSym::DinvStar)
    }

    pub fn indices(self) -> Option<(usize, usize)> {
        match self {
            GenSym::U(j, k) | GenSym::Ustar(j, k) => Some((j as usize, k as usize)),
            _ => None,
        }
    }

    pub fn is_diagonal(self) -> bool {
        match self {
            GenSym::U(j, k) | GenSym::Ustar(j, k) => j == k,
            _ => true,
        }
    }

    /// Counit value; every generator is sent to 0 or 1.
    pub fn counit(self) -> bool {
        self.is_diagonal()
    }

    pub fn u(j: usize, k: usize) -> GenSym {
        GenSym::U(j as u8, k as u8)
    }

    pub fn us(j: usize, k: usize) -> GenSym {
        GenSym::Ustar(j as u8, k as u8)
    }
}

impl fmt::Display for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSym::U(j, k) => write!(f, "u[{},{}]", j, k),
            GenSym::Ustar(j, k) => write!(f, "u*[{},{}]", j, k),
            GenSym::Dinv => write!(f, "Dinv"),
            GenSym::DinvStar => write!(f, "Dinv*"),
        }
    }
}

pub type Word = Vec<GenSym>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Quantum matrix bialgebra, no involution.
    Mq,
    SUq,
    Uq,
    /// Commutative algebra of the maximal torus of SU_q(N).
    Torus,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Ctx {
    pub n: usize,
    pub variant: Variant,
}

impl Ctx {
    pub fn new(n: usize, variant: Variant) -> Self {
        assert!(n >= 1 && n <= 16, "N out of range");
        Ctx { n, variant }
    }

    pub fn suq(n: usize) -> Self {
        Ctx::new(n, Variant::SUq)
    }

    pub fn uq(n: usize) -> Self {
        Ctx::new(n, Variant::Uq)
    }

    pub fn mq(n: usize) -> Self {
        Ctx::new(n, Variant::Mq)
    }

    pub fn torus(n: usize) -> Self {
        Ctx::new(n, Variant::Torus)
    }

    pub fn check(&self, g: GenSym) -> QResult<()> {
        match g {
            GenSym::U(j, k) | GenSym::Ustar(j, k) => {
                let (j, k) = (j as usize, k as usize);
                if j == 0 || k == 0 || j > self.n || k > self.n {
                    return Err(QError::InvalidIndex(format!("{} in N={}", g, self.n)));
                }
                if self.variant == Variant::Torus && j != k {
                    return Err(QError::InvalidIndex(format!("{} is not a torus letter", g)));
                }
                if self.variant == Variant::Mq && g.is_starred() {
                    return Err(QError::Precondition("M_q(N) has no involution".into()));
                }
                Ok(())
            }
            GenSym::Dinv | GenSym::DinvStar => {
                if matches!(self.variant, Variant::Uq | Variant::SUq) {
                    Ok(())
                } else {
                    Err(QError::Precondition(format!("{} needs a U_q context", g)))
                }
            }
        }
    }

    /// Number of torus directions carrying dual functionals: N-1 for SU_q(N),
    /// N for U_q(N) (the extra one is the determinant direction).
    pub fn torus_rank(&self) -> usize {
        match self.variant {
            Variant::Uq => self.n,
            _ => self.n - 1,
        }
    }

    /// All generators, unstarred first.
    pub fn generators(&self, with_stars: bool) -> Vec<GenSym> {
        let mut v = Vec::new();
        for j in 1..=self.n {
            for k in 1..=self.n {
                if self.variant == Variant::Torus && j != k {
                    continue;
                }
                v.push(GenSym::u(j, k));
            }
        }
        if self.variant == Variant::Uq {
            v.push(GenSym::Dinv);
        }
        if with_stars && self.variant != Variant::Mq {
            let s: Vec<GenSym> = v.iter().map(|g| g.star()).collect();
            v.extend(s);
        }
        v
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.variant {
            Variant::Mq => "M_q",
            Variant::SUq => "SU_q",
            Variant::Uq => "U_q",
            Variant::Torus => "T",
        };
        write!(f, "{}({})", v, self.n)
    }
}

/// Rational specialization point `q0` in (0,1).
#[derive(Clone, PartialEq, Debug)]
pub struct QPoint {
    exact: BigRational,
    value: f64,
}

impl QPoint {
    pub fn new(num: i64, den: i64) -> QResult<Self> {
        if den == 0 {
            return Err(QError::Precondition("q denominator is zero".into()));
        }
        QPoint::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: BigRational) -> QResult<Self> {
        if r <= BigRational::zero() || r >= BigRational::one() {
            return Err(QError::Precondition(format!("q0 = {} not in (0,1)", r)));
        }
        let value = num::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN);
        Ok(QPoint { exact: r, value })
    }

    pub fn half() -> Self {
        QPoint::new(1, 2).unwrap()
    }

    pub fn parse(s: &str) -> QResult<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        if d == "1" && n.contains('.') {
            let v: f64 = n.parse().map_err(|_| QError::Parse(format!("bad q '{}'", s)))?;
            let r = BigRational::from_float(v).ok_or_else(|| QError::Parse(format!("bad q '{}'", s)))?;
            return QPoint::from_rational(r);
        }
        let n: i64 = n.parse().map_err(|_| QError::Parse(format!("bad q '{}'", s)))?;
        let d: i64 = d.parse().map_err(|_| QError::Parse(format!("bad q '{}'", s)))?;
        QPoint::new(n, d)
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact)
    }
}
