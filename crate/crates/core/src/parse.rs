//! Text syntax for polynomials: `2*a1*a3 - D{1,2,3}^2 + (a1 + a2)^2`.

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::monomial::{Generator, Monomial};
use crate::polynomial::Polynomial;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

pub fn parse_polynomial(text: &str, n: usize) -> Result<Polynomial> {
    crate::index_set::check_n(n)?;
    let mut p = Parser { src: text.as_bytes(), pos: 0, n };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat(b'-') { -&self.term()? } else { self.term()? };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.number()?;
            if e > 64 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                let v = i64::try_from(v).map_err(|_| self.err("number too large"))?;
                Ok(Polynomial::monomial(Monomial::one(), v))
            }
            Some(b'a') => {
                self.pos += 1;
                self.eat(b'_');
                let at = self.pos;
                let i = self.number()? as usize;
                let g = Generator::a(self.n, i).map_err(|e| Error::Parse { pos: at, msg: e.to_string() })?;
                Ok(Polynomial::generator(g))
            }
            Some(b'D') => {
                self.pos += 1;
                self.eat(b'_');
                let at = self.pos;
                if !self.eat(b'{') {
                    return Err(self.err("expected '{'"));
                }
                let mut elems = vec![self.number()? as usize];
                while self.eat(b',') {
                    elems.push(self.number()? as usize);
                }
                if !self.eat(b'}') {
                    return Err(self.err("expected '}'"));
                }
                let set = IndexSet::new(self.n, elems.iter().copied())
                    .map_err(|e| Error::Parse { pos: at, msg: e.to_string() })?;
                if set.len() != elems.len() {
                    return Err(Error::Parse { pos: at, msg: "repeated element".into() });
                }
                let g = Generator::d(set).map_err(|e| Error::Parse { pos: at, msg: e.to_string() })?;
                Ok(Polynomial::generator(g))
            }
            _ => Err(self.err("expected a generator, number or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_rendering() {
        for s in ["2*a1*a2 - D{1,2,3}^2", "a1*a3*D{1,2,3,4}^2", "0", "-3", "a2*a3"] {
            let n = if s.contains("D{1,2,3,4}") { 7 } else { 6 };
            assert_eq!(parse_polynomial(s, n).unwrap().render(), s);
        }
    }

    #[test]
    fn arithmetic() {
        let p = parse_polynomial("(D{1,2,3,4} + D_{2,3,4})^2 + a_2*a_3", 6).unwrap();
        let q = parse_polynomial(
            "D{1,2,3,4}^2 + 2*D{1,2,3,4}*D{2,3,4} + D{2,3,4}^2 + a2*a3",
            6,
        )
        .unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_polynomial("a4", 6), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("D{4,5,6}", 6), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("a1 +", 6), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("a1 a2", 6), Err(Error::Parse { .. })));
    }
}
