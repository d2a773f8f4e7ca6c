//! Recursive-descent parser for the polynomial grammar:
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*'? factor)*
//! factor   := base ('^' uint)?
//! base     := rational | varname | '(' expr ')'
//! rational := uint ('/' uint)?
//! varname  := 'x'uint | 'a'uint | 'b'uint | 'g{'uint','uint'}' | 't' | 'xi'uint
//! ```
//!
//! Whitespace is insignificant; multiplication may be written by
//! juxtaposition (`2x1`, `(x1+1)x2`). Gamma names accept either index order
//! and normalize `g{j2,j1}` to `-g{j1,j2}`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::vars::VarTable;

pub fn parse_poly(text: &str, table: &Arc<VarTable>) -> Result<MultiPoly> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        table,
    };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    table: &'a Arc<VarTable>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        let mut negate = false;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            negate = c == b'-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                // juxtaposition
                Some(c) if c == b'(' || c.is_ascii_digit() || c.is_ascii_alphabetic() => {
                    acc = acc.mul(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.base()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            let e: u32 = e.try_into().map_err(|_| Error::ExponentOverflow)?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den_pos = self.pos;
                    let den = self.uint()?;
                    if den == 0u32.into() {
                        return Err(Error::Parse {
                            pos: den_pos,
                            msg: "zero denominator".to_string(),
                        });
                    }
                    Ok(MultiPoly::constant(self.table, Rational::new(num, den)))
                } else {
                    Ok(MultiPoly::constant(self.table, Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => self.varname(),
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an unsigned integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small_uint(&mut self) -> Result<usize> {
        let at = self.pos;
        let v = self.uint()?;
        v.try_into().map_err(|_| Error::Parse {
            pos: at,
            msg: "index too large".to_string(),
        })
    }

    fn varname(&mut self) -> Result<MultiPoly> {
        let start = self.pos;
        let c = self.bump().unwrap();
        match c {
            b'g' => {
                self.expect(b'{')?;
                self.skip_ws();
                let j1 = self.small_uint()?;
                self.skip_ws();
                self.expect(b',')?;
                self.skip_ws();
                let j2 = self.small_uint()?;
                self.skip_ws();
                self.expect(b'}')?;
                match self.table.gamma_signed(j1, j2) {
                    Some((v, sign)) => {
                        let p = MultiPoly::var(self.table, v);
                        Ok(if sign < 0 { p.neg() } else { p })
                    }
                    None => Err(Error::UnknownVariable(format!("g{{{j1},{j2}}}"))),
                }
            }
            b't' => match self.peek() {
                Some(d) if d.is_ascii_alphanumeric() => {
                    self.pos = start;
                    Err(self.err("unknown variable"))
                }
                _ => Ok(MultiPoly::var(self.table, self.table.time())),
            },
            b'x' if self.peek() == Some(b'i') => {
                self.pos += 1;
                let k = self.small_uint()?;
                if k >= 1 && k <= self.table.chart_var_count() {
                    Ok(MultiPoly::var(self.table, self.table.xi(k)))
                } else {
                    Err(Error::UnknownVariable(format!("xi{k}")))
                }
            }
            b'x' | b'a' | b'b' => {
                let j = self.small_uint()?;
                if j > self.table.n() {
                    return Err(Error::UnknownVariable(format!("{}{j}", c as char)));
                }
                let v = match c {
                    b'x' => self.table.x(j),
                    b'a' => self.table.alpha(j),
                    _ => self.table.beta(j),
                };
                Ok(MultiPoly::var(self.table, v))
            }
            _ => {
                self.pos = start;
                Err(self.err("unknown variable"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn table() -> Arc<VarTable> {
        VarTable::new(3, 1)
    }

    #[test]
    fn displayed_generators_parse() {
        let t = table();
        let p = parse_poly("-x1^2", &t).unwrap();
        assert_eq!(p.canonical_string(), "-x1^2");
        let q = parse_poly("x2^2 - 2*x1*x3 - 1", &t).unwrap();
        assert_eq!(q.canonical_string(), "x2^2 - 2*x1*x3 - 1");
        let r = parse_poly("x1^2 - 1", &t).unwrap();
        assert_eq!(r.term_count(), 2);
    }

    #[test]
    fn juxtaposition_and_rationals() {
        let t = table();
        assert_eq!(
            parse_poly("2x1", &t).unwrap(),
            parse_poly("2*x1", &t).unwrap()
        );
        assert_eq!(
            parse_poly("(x1+1)x2", &t).unwrap(),
            parse_poly("x1*x2 + x2", &t).unwrap()
        );
        assert_eq!(
            parse_poly("1/2 x1", &t).unwrap(),
            parse_poly("x1", &t)
                .unwrap()
                .scale(&crate::rational::rat(1, 2))
        );
        assert_eq!(
            parse_poly("x1 x3", &t).unwrap(),
            parse_poly("x1*x3", &t).unwrap()
        );
    }

    #[test]
    fn gamma_names_normalize() {
        let t = table();
        let p = parse_poly("g{3,2}", &t).unwrap();
        assert_eq!(p, parse_poly("-g{2,3}", &t).unwrap());
        assert!(parse_poly("g{2,2}", &t).is_err());
    }

    #[test]
    fn parse_print_roundtrip() {
        let t = table();
        for text in [
            "x2^2 - 2*x1*x3 - 1",
            "-x1^5",
            "x2*g{1,2} - g{0,1}",
            "3/4*x1*xi1 + t - 2",
        ] {
            let p = parse_poly(text, &t).unwrap();
            let printed = p.canonical_string();
            let q = parse_poly(&printed, &t).unwrap();
            assert_eq!(p, q, "roundtrip failed for {text}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        let t = table();
        match parse_poly("x1 + ", &t) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_poly("x9", &t),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(parse_poly("y1", &t), Err(Error::Parse { .. })));
        assert!(parse_poly("x1^(2)", &t).is_err());
    }

    #[test]
    fn exponent_overflow_is_a_hard_error() {
        let t = table();
        assert!(matches!(
            parse_poly("x1^99999999999999999999", &t),
            Err(Error::ExponentOverflow)
        ));
    }

    #[test]
    fn unary_minus_binds_term() {
        let t = table();
        let p = parse_poly("-x1^2 + 1", &t).unwrap();
        assert_eq!(
            p,
            MultiPoly::one(&t)
                .sub(&parse_poly("x1", &t).unwrap().pow(2).unwrap())
                .unwrap()
        );
        assert_eq!(
            parse_poly("(-1)", &t).unwrap(),
            MultiPoly::constant(&t, int(-1))
        );
    }
}
