//! Exact rational functions in the deformation parameter `q`.
//!
//! Coefficients live in the Gaussian rationals so that elements such as
//! `(u - u*)/2i` stay exact. A value is stored as `num / den` where `num` is a
//! Laurent polynomial and `den` is a monic polynomial with nonzero constant
//! term, coprime to `num`. In practice `den == 1` almost always, and that case
//! never touches the gcd machinery.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::Complex;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Gaussian rational.
pub type Gq = Complex<BigRational>;

pub fn gq_int(n: i64) -> Gq {
    Gq::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn gq_ratio(n: i64, d: i64) -> Gq {
    Gq::new(
        BigRational::new(BigInt::from(n), BigInt::from(d)),
        BigRational::zero(),
    )
}

pub fn gq_to_c64(z: &Gq) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn gq_is_zero(z: &Gq) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

fn gq_mul(a: &Gq, b: &Gq) -> Gq {
    if a.im.is_zero() && b.im.is_zero() {
        return Gq::new(&a.re * &b.re, BigRational::zero());
    }
    a * b
}

fn gq_inv(a: &Gq) -> Gq {
    if a.im.is_zero() {
        return Gq::new(a.re.recip(), BigRational::zero());
    }
    let n = &a.re * &a.re + &a.im * &a.im;
    Gq::new(&a.re / &n, -(&a.im / &n))
}

/// Laurent polynomial `sum c[k] q^(low + k)`, trimmed at both ends.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LPoly {
    low: i32,
    c: Vec<Gq>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { low: 0, c: Vec::new() }
    }

    pub fn constant(z: Gq) -> Self {
        LPoly::monomial(z, 0)
    }

    pub fn monomial(z: Gq, e: i32) -> Self {
        if gq_is_zero(&z) {
            return LPoly::zero();
        }
        LPoly { low: e, c: vec![z] }
    }

    fn from_parts(low: i32, c: Vec<Gq>) -> Self {
        let mut p = LPoly { low, c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(gq_is_zero) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|z| gq_is_zero(z)).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i32;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.c.len() as i32 - 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Gq)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, z)| !gq_is_zero(z))
            .map(move |(k, z)| (self.low + k as i32, z))
    }

    fn lead(&self) -> &Gq {
        self.c.last().expect("nonzero polynomial")
    }

    fn shifted(&self, by: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LPoly { low: self.low + by, c: self.c.clone() }
    }

    fn scale(&self, z: &Gq) -> Self {
        if gq_is_zero(z) {
            return LPoly::zero();
        }
        LPoly::from_parts(self.low, self.c.iter().map(|c| gq_mul(c, z)).collect())
    }

    pub fn add(&self, o: &LPoly) -> LPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut c = vec![Gq::zero(); (high - low + 1) as usize];
        for (k, z) in self.c.iter().enumerate() {
            c[(self.low - low) as usize + k] += z;
        }
        for (k, z) in o.c.iter().enumerate() {
            c[(o.low - low) as usize + k] += z;
        }
        LPoly::from_parts(low, c)
    }

    pub fn neg(&self) -> LPoly {
        LPoly { low: self.low, c: self.c.iter().map(|z| -z.clone()).collect() }
    }

    pub fn mul(&self, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        let mut c = vec![Gq::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if gq_is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += gq_mul(a, b);
            }
        }
        LPoly::from_parts(self.low + o.low, c)
    }

    pub fn conj(&self) -> LPoly {
        LPoly { low: self.low, c: self.c.iter().map(|z| z.conj()).collect() }
    }

    pub fn eval_exact(&self, q: &BigRational) -> Gq {
        let mut acc = Gq::zero();
        for z in self.c.iter().rev() {
            acc = Gq::new(&acc.re * q, &acc.im * q) + z;
        }
        let qp = pow_rat(q, self.low);
        Gq::new(acc.re * &qp, acc.im * qp)
    }

    pub fn eval_f64(&self, q: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for z in self.c.iter().rev() {
            acc = acc * q + gq_to_c64(z);
        }
        acc * q.powi(self.low)
    }

    fn dense(&self) -> Vec<Gq> {
        debug_assert!(self.low >= 0);
        let mut v = vec![Gq::zero(); self.low.max(0) as usize];
        v.extend(self.c.iter().cloned());
        v
    }

    /// Remainder of ordinary polynomial division (both with `low == 0`).
    fn rem(&self, d: &LPoly) -> LPoly {
        let mut r = self.dense();
        let dv = d.dense();
        let dl = gq_inv(d.lead());
        let dn = dv.len();
        while r.len() >= dn {
            let top = r.pop().unwrap();
            if gq_is_zero(&top) {
                continue;
            }
            let f = gq_mul(&top, &dl);
            let off = r.len() + 1 - dn;
            for k in 0..dn - 1 {
                let t = gq_mul(&f, &dv[k]);
                r[off + k] -= t;
            }
        }
        LPoly::from_parts(0, r)
    }

    /// Exact quotient of ordinary polynomials; `d` must divide `self`.
    fn quo(&self, d: &LPoly) -> LPoly {
        let mut r = self.dense();
        let dv = d.dense();
        let dl = gq_inv(d.lead());
        let dn = dv.len();
        if r.len() < dn {
            return LPoly::zero();
        }
        let mut qv = vec![Gq::zero(); r.len() + 1 - dn];
        while r.len() >= dn {
            let top = r.pop().unwrap();
            let off = r.len() + 1 - dn;
            if gq_is_zero(&top) {
                continue;
            }
            let f = gq_mul(&top, &dl);
            for k in 0..dn - 1 {
                let t = gq_mul(&f, &dv[k]);
                r[off + k] -= t;
            }
            qv[off] = f;
        }
        LPoly::from_parts(0, qv)
    }

    fn monic(&self) -> (LPoly, Gq) {
        let l = self.lead().clone();
        let il = gq_inv(&l);
        (self.scale(&il), l)
    }

    fn gcd(a: &LPoly, b: &LPoly) -> LPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic().0
    }
}

fn pow_rat(q: &BigRational, e: i32) -> BigRational {
    let mut r = BigRational::one();
    let base = if e < 0 { q.recip() } else { q.clone() };
    for _ in 0..e.unsigned_abs() {
        r *= &base;
    }
    r
}

/// Exact element of `Q(i)(q)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QCoeff {
    num: LPoly,
    den: LPoly,
}

impl QCoeff {
    pub fn zero() -> Self {
        QCoeff { num: LPoly::zero(), den: LPoly::constant(Gq::one()) }
    }

    pub fn one() -> Self {
        QCoeff::from_gq(Gq::one())
    }

    pub fn from_int(n: i64) -> Self {
        QCoeff::from_gq(gq_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QCoeff::from_gq(gq_ratio(n, d))
    }

    pub fn from_gq(z: Gq) -> Self {
        QCoeff { num: LPoly::constant(z), den: LPoly::constant(Gq::one()) }
    }

    pub fn from_rational(r: BigRational) -> Self {
        QCoeff::from_gq(Gq::new(r, BigRational::zero()))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        QCoeff::from_gq(Gq::new(BigRational::zero(), BigRational::one()))
    }

    /// `q^m`.
    pub fn q_pow(m: i32) -> Self {
        QCoeff { num: LPoly::monomial(Gq::one(), m), den: LPoly::constant(Gq::one()) }
    }

    /// `c * q^m`.
    pub fn mono(c: i64, m: i32) -> Self {
        QCoeff { num: LPoly::monomial(gq_int(c), m), den: LPoly::constant(Gq::one()) }
    }

    /// `(-q)^m`.
    pub fn neg_q_pow(m: i32) -> Self {
        let s = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        QCoeff::mono(s, m)
    }

    /// `1/q - q`.
    pub fn q_gap() -> Self {
        QCoeff::q_pow(-1) - QCoeff::q_pow(1)
    }

    pub fn from_laurent(num: LPoly) -> Self {
        QCoeff { num, den: LPoly::constant(Gq::one()) }
    }

    pub fn numer(&self) -> &LPoly {
        &self.num
    }

    pub fn denom(&self) -> &LPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    fn build(num: LPoly, den: LPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return QCoeff::zero();
        }
        // Pull the q-power out of the denominator.
        let shift = den.low;
        let num = num.shifted(-shift);
        let den = den.shifted(-shift);
        if den.c.len() == 1 {
            let inv = gq_inv(&den.c[0]);
            return QCoeff { num: num.scale(&inv), den: LPoly::constant(Gq::one()) };
        }
        let core = num.shifted(-num.low);
        let g = LPoly::gcd(&core, &den);
        let (num, den) = if g.c.len() > 1 {
            (core.quo(&g).shifted(num.low), den.quo(&g))
        } else {
            (num, den)
        };
        let (den, l) = den.monic();
        let num = num.scale(&gq_inv(&l));
        QCoeff { num, den }
    }

    pub fn conj(&self) -> Self {
        QCoeff { num: self.num.conj(), den: self.den.conj() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(QCoeff::build(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = QCoeff::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Exact value at a rational `q0`; `None` when the denominator vanishes.
    pub fn eval_exact(&self, q0: &BigRational) -> Option<Gq> {
        let d = self.den.eval_exact(q0);
        if gq_is_zero(&d) {
            return None;
        }
        let n = self.num.eval_exact(q0);
        Some(gq_mul(&n, &gq_inv(&d)))
    }

    pub fn eval_f64(&self, q0: f64) -> Complex64 {
        if self.den.is_one() {
            return self.num.eval_f64(q0);
        }
        self.num.eval_f64(q0) / self.den.eval_f64(q0)
    }

    /// Value as a plain Gaussian rational when it does not depend on `q`.
    pub fn as_constant(&self) -> Option<Gq> {
        if self.is_zero() {
            return Some(Gq::zero());
        }
        if self.den.is_one() && self.num.low == 0 && self.num.c.len() == 1 {
            return Some(self.num.c[0].clone());
        }
        None
    }
}

impl Default for QCoeff {
    fn default() -> Self {
        QCoeff::zero()
    }
}

impl<'a> Add<&'a QCoeff> for &'a QCoeff {
    type Output = QCoeff;
    fn add(self, o: &QCoeff) -> QCoeff {
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if num.is_zero() {
                return QCoeff::zero();
            }
            if self.den.is_one() {
                return QCoeff { num, den: self.den.clone() };
            }
            return QCoeff::build(num, self.den.clone());
        }
        QCoeff::build(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
}

impl<'a> Sub<&'a QCoeff> for &'a QCoeff {
    type Output = QCoeff;
    fn sub(self, o: &QCoeff) -> QCoeff {
        self + &(-o)
    }
}

impl<'a> Mul<&'a QCoeff> for &'a QCoeff {
    type Output = QCoeff;
    fn mul(self, o: &QCoeff) -> QCoeff {
        if self.is_zero() || o.is_zero() {
            return QCoeff::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return QCoeff { num: self.num.mul(&o.num), den: LPoly::constant(Gq::one()) };
        }
        QCoeff::build(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        QCoeff { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QCoeff> for QCoeff {
            type Output = QCoeff;
            fn $m(self, o: QCoeff) -> QCoeff {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QCoeff> for QCoeff {
            type Output = QCoeff;
            fn $m(self, o: &QCoeff) -> QCoeff {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        -&self
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_gq(z: &Gq) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => fmt_rat(&z.re),
        (true, false) => {
            if z.im.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rat(&z.im))
            }
        }
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}*i)", fmt_rat(&z.re), sign, fmt_rat(&z.im.abs()))
        }
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, z) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let (neg, mag) = if z.im.is_zero() && z.re.is_negative() {
                (true, Gq::new(-z.re.clone(), BigRational::zero()))
            } else {
                (false, z.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let qpart = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{}", e),
            };
            if qpart.is_empty() {
                write!(f, "{}", fmt_gq(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", qpart)?;
            } else {
                write!(f, "{}*{}", fmt_gq(&mag), qpart)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl PartialOrd for QCoeff {
    fn partial_cmp(&self, _: &Self) -> Option<Ordering> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QCoeff {
        QCoeff::q_pow(1)
    }

    #[test]
    fn gap_times_q() {
        let g = QCoeff::q_gap() * q();
        assert_eq!(g, QCoeff::one() - q() * q());
    }

    #[test]
    fn rational_function_cancels() {
        let one = QCoeff::one();
        let a = (&one - &q()).inv().unwrap();
        let b = &a * &(&one - &q());
        assert!(b.is_one());
        let c = (&one - &(&q() * &q())) * (&one - &q()).inv().unwrap();
        assert_eq!(c, &one + &q());
        assert!(c.is_laurent());
    }

    #[test]
    fn exact_eval_half() {
        let half = BigRational::new(1.into(), 2.into());
        let v = QCoeff::q_gap().eval_exact(&half).unwrap();
        assert_eq!(v, gq_ratio(3, 2));
        let w = (QCoeff::one() - q()).inv().unwrap().eval_exact(&half).unwrap();
        assert_eq!(w, gq_int(2));
    }

    #[test]
    fn display() {
        assert_eq!(QCoeff::q_gap().to_string(), "-q + q^-1");
        assert_eq!(QCoeff::neg_q_pow(1).to_string(), "-q");
        let r = (QCoeff::one() - q()).inv().unwrap();
        assert_eq!(r.to_string(), "(-1)/(q - 1)");
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        assert_eq!(QCoeff::i() * QCoeff::i(), QCoeff::from_int(-1));
        assert_eq!(QCoeff::i().conj(), -QCoeff::i());
    }
}
