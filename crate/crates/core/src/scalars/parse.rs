//! Parser for the canonical textual form of scalars and Laurent polynomials:
//! rationals `p/q`, roots of unity `zN` (alias `i` for `z4`), variables `tK`,
//! with `+ - * ^` and parentheses. No decimal syntax.

use num::bigint::BigInt;

use super::{CycScalar, LaurentPoly, Rat, ScalarError};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

pub fn parse_laurent(src: &str, nvars: usize) -> Result<LaurentPoly, ScalarError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, nvars };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ScalarError::Parse(format!("unexpected input at byte {}", p.pos)));
    }
    Ok(value)
}

pub fn parse_scalar(src: &str) -> Result<CycScalar, ScalarError> {
    let p = parse_laurent(src, 0)?;
    p.as_constant().ok_or_else(|| ScalarError::Parse("expected a constant".into()))
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<LaurentPoly, ScalarError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = acc.checked_mul(&self.factor()?)?;
                }
                Some(b'/') => {
                    self.bump();
                    let d = self.factor()?;
                    let c = d
                        .as_constant()
                        .ok_or_else(|| ScalarError::Parse("can only divide by scalars".into()))?;
                    acc = acc.scale(&c.inv()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly, ScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.bump();
                Ok(-&self.factor()?)
            }
            _ => {
                let base = self.atom()?;
                if self.peek() == Some(b'^') {
                    self.bump();
                    let e = self.integer()?;
                    return self.power(base, e);
                }
                Ok(base)
            }
        }
    }

    fn power(&self, base: LaurentPoly, e: i64) -> Result<LaurentPoly, ScalarError> {
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        // Negative powers only for single monomials (units of the ring).
        let mut terms = base.terms();
        match (terms.next(), terms.next()) {
            (Some((exp, c)), None) => {
                let inv_exp = exp.neg();
                let inv = LaurentPoly::monomial(inv_exp, c.inv()?);
                Ok(inv.pow((-e) as u32))
            }
            _ => Err(ScalarError::Parse("negative power of a non-monomial".into())),
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(ScalarError::Parse("expected ')'".into()));
                }
                Ok(inner)
            }
            Some(b'i') => {
                self.bump();
                Ok(LaurentPoly::constant(self.nvars, CycScalar::zeta(4)))
            }
            Some(b'z') => {
                self.bump();
                let n = self.integer()?;
                if n < 1 {
                    return Err(ScalarError::Parse("root of unity order must be >= 1".into()));
                }
                Ok(LaurentPoly::constant(self.nvars, CycScalar::zeta(n as u32)))
            }
            Some(b't') => {
                self.bump();
                let k = self.integer()?;
                if k < 1 || k as usize > self.nvars {
                    return Err(ScalarError::Parse(format!(
                        "variable t{k} out of range (nvars = {})",
                        self.nvars
                    )));
                }
                Ok(LaurentPoly::var(self.nvars, k as usize - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(LaurentPoly::constant(
                    self.nvars,
                    CycScalar::from_rat(Rat::from_integer(BigInt::from(n))),
                ))
            }
            other => Err(ScalarError::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn integer(&mut self) -> Result<i64, ScalarError> {
        self.skip_ws();
        let mut sign = 1i64;
        if self.src.get(self.pos) == Some(&b'-') {
            sign = -1;
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ScalarError::Parse("expected an integer".into()));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits
            .parse::<i64>()
            .map(|v| sign * v)
            .map_err(|e| ScalarError::Parse(e.to_string()))
    }
}
