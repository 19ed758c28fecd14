//! Text syntax: `u[j,k]`, `u*[j,k]`, `Dinv`, `Dinv*`, `q`, `i`, integers,
//! `+ - * / ^` and parentheses. Division is by scalars only; `^` takes an
//! integer exponent (negative only for invertible scalars).

use super::elt::AlgElt;
use super::gen::{Ctx, GenSym};
use super::qcoeff::QCoeff;
use crate::error::{QError, QResult};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    ctx: Ctx,
}

fn perr<T>(msg: impl Into<String>) -> QResult<T> {
    Err(QError::Parse(msg.into()))
}

impl<'a> Parser<'a> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> QResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            perr(format!("expected '{}' at {}", c as char, self.pos))
        }
    }

    fn int(&mut self) -> QResult<i64> {
        self.ws();
        let neg = self.eat(b'-');
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return perr(format!("expected integer at {}", start));
        }
        let v: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| QError::Parse("integer overflow".into()))?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> QResult<AlgElt> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.try_add(&-self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> QResult<AlgElt> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.try_mul(&self.factor()?)?;
            } else if self.eat(b'/') {
                let d = self.factor()?;
                let c = scalar_of(&d).ok_or_else(|| QError::Parse("division by a non-scalar".into()))?;
                let inv = c.inv().ok_or_else(|| QError::Parse("division by zero".into()))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> QResult<AlgElt> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        if self.eat(b'+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.int()?;
            if e >= 0 {
                return Ok(base.pow(e as u32));
            }
            let c = scalar_of(&base).ok_or_else(|| QError::Parse("negative power of a non-scalar".into()))?;
            let inv = c.inv().ok_or_else(|| QError::Parse("zero to a negative power".into()))?;
            return Ok(AlgElt::scalar(self.ctx, inv.pow(e.unsigned_abs() as u32)));
        }
        Ok(base)
    }

    fn index_pair(&mut self) -> QResult<(usize, usize)> {
        self.expect(b'[')?;
        let j = self.int()?;
        self.expect(b',')?;
        let k = self.int()?;
        self.expect(b']')?;
        if j <= 0 || k <= 0 {
            return perr("indices start at 1");
        }
        Ok((j as usize, k as usize))
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        let b = kw.as_bytes();
        if self.s[self.pos..].starts_with(b) {
            let after = self.s.get(self.pos + b.len()).copied();
            if after.is_some_and(|c| c.is_ascii_alphanumeric()) {
                return false;
            }
            self.pos += b.len();
            true
        } else {
            false
        }
    }

    fn atom_follows(&self, mut at: usize) -> bool {
        while at < self.s.len() && self.s[at].is_ascii_whitespace() {
            at += 1;
        }
        matches!(self.s.get(at), Some(c) if c.is_ascii_alphanumeric() || *c == b'(')
    }

    fn atom(&mut self) -> QResult<AlgElt> {
        let ctx = self.ctx;
        match self.peek() {
            None => perr("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                Ok(AlgElt::scalar(ctx, QCoeff::from_int(v)))
            }
            Some(_) => {
                if self.keyword("Dinv") {
                    // `Dinv*` is the adjoint unless the star is a product sign
                    let g = if self.peek() == Some(b'*') && !self.atom_follows(self.pos + 1) {
                        self.pos += 1;
                        GenSym::DinvStar
                    } else {
                        GenSym::Dinv
                    };
                    return AlgElt::gen(ctx, g);
                }
                if self.keyword("q") {
                    return Ok(AlgElt::scalar(ctx, QCoeff::q_pow(1)));
                }
                if self.keyword("i") {
                    return Ok(AlgElt::scalar(ctx, QCoeff::i()));
                }
                self.ws();
                if self.s[self.pos..].starts_with(b"u*") {
                    self.pos += 2;
                    let (j, k) = self.index_pair()?;
                    return AlgElt::gen(ctx, GenSym::us(j, k));
                }
                if self.s[self.pos..].starts_with(b"u") {
                    self.pos += 1;
                    let (j, k) = self.index_pair()?;
                    return AlgElt::gen(ctx, GenSym::u(j, k));
                }
                perr(format!("unexpected input at {}", self.pos))
            }
        }
    }
}

fn scalar_of(a: &AlgElt) -> Option<QCoeff> {
    if a.is_zero() {
        return Some(QCoeff::zero());
    }
    if a.len() == 1 && a.degree() == 0 {
        return Some(a.coeff(&[]));
    }
    None
}

pub fn parse_elt(ctx: Ctx, text: &str) -> QResult<AlgElt> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, ctx };
    let e = p.expr()?;
    if p.peek().is_some() {
        return perr(format!("trailing input at {}", p.pos));
    }
    Ok(e)
}
