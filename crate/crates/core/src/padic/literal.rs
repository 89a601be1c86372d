//! Scalar literals.
//!
//! Grammar: integers, `+ - * / ^`, parentheses, `w` (the generator, `w^2 = c`),
//! `phi` (fixed generator of the roots of unity), `i`, `p`, digit strings
//! `v:d0d1d2...` meaning `p^v (d0 + d1 p + ...)`, and the functions `sqrt`,
//! `teich`, `exp`, `log`, `sin`, `cos`, `arcsin`.

use super::context::ExtContext;
use super::ext::ExtScalar;
use super::residue::Residue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i128),
    Ident(String),
    Digits(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[start..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("integer too large: {t}")))?));
            if i < cs.len() && cs[i] == ':' {
                i += 1;
                let start = i;
                while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::Parse("empty digit string after ':'".into()));
                }
                out.push(Tok::Digits(cs[start..i].iter().collect()));
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'static ExtContext,
    toks: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExtScalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExtScalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                acc = acc.try_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ExtScalar> {
        if self.eat('-') {
            if let (Some(Tok::Num(v)), Some(Tok::Digits(d))) = (self.toks.get(self.pos), self.toks.get(self.pos + 1)) {
                let (v, d) = (*v, d.clone());
                self.pos += 2;
                return self.digit_literal(-v, &d);
            }
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExtScalar> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek() {
                Some(Tok::Num(e)) => {
                    let e = *e as i64;
                    self.pos += 1;
                    return base.pow(if neg { -e } else { e });
                }
                _ => return Err(Error::Parse("exponent must be an integer".into())),
            }
        }
        Ok(base)
    }

    fn digit_literal(&self, v: i128, digits: &str) -> Result<ExtScalar> {
        let p = self.ctx.p();
        let mut ds = Vec::new();
        for ch in digits.chars() {
            let d = ch.to_digit(36).ok_or_else(|| Error::Parse(format!("bad digit '{ch}'")))?;
            if d >= p {
                return Err(Error::Parse(format!("digit '{ch}' is not below {p}")));
            }
            ds.push(Residue { x: d, y: 0 });
        }
        Ok(ExtScalar::from_digits(self.ctx, v as i32, &ds))
    }

    fn atom(&mut self) -> Result<ExtScalar> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => {
                if let Some(Tok::Digits(d)) = self.peek().cloned() {
                    self.pos += 1;
                    return self.digit_literal(n, &d);
                }
                Ok(ExtScalar::from_i128(self.ctx, n))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                let k = self.ctx;
                match name.as_str() {
                    "w" => return Ok(ExtScalar::omega(k)),
                    "phi" => return Ok(k.phi()),
                    "i" => return Ok(k.i_value()),
                    "p" => return Ok(ExtScalar::from_i64(k, k.p() as i64)),
                    _ => {}
                }
                if !self.eat('(') {
                    return Err(Error::Parse(format!("unknown name '{name}'")));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                match name.as_str() {
                    "sqrt" => arg.sqrt(),
                    "teich" => arg.teichmuller(),
                    "exp" => arg.exp(),
                    "log" => arg.log(),
                    "sin" => arg.sin(),
                    "cos" => arg.cos(),
                    "arcsin" => arg.arcsin(),
                    _ => Err(Error::Parse(format!("unknown function '{name}'"))),
                }
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parse a scalar literal in the given context.
pub fn parse_scalar(ctx: &'static ExtContext, s: &str) -> Result<ExtScalar> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty literal".into()));
    }
    let mut p = Parser { ctx, toks: &toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input in '{s}'")));
    }
    Ok(v)
}
