//! Canonical text form for ring elements, and a parser for the same grammar.
//!
//! Terms print in the monomial order of [`super::Mono`], so a value has one
//! canonical rendering: `4 + 18*h`, `h + h^-1`, `-2*i`, `(1+2*i)*A^-3`.

use super::{Ring, RingElement};
use crate::{Error, Result};
use num_traits::{Signed, Zero};

pub(super) fn render_element(e: &RingElement) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let ring = e.ring().clone();
    let mut out = String::new();
    let mut first = true;
    for (m, c) in e.terms() {
        let neg = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
        let abs = if neg { c.neg() } else { c.clone() };
        let mut parts: Vec<String> = Vec::new();
        for (i, ex) in m.vexp.iter().enumerate() {
            if *ex == 0 {
                continue;
            }
            let name = &ring.vars()[i].name;
            if *ex == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{ex}"));
            }
        }
        for (i, ex) in m.gexp.iter().enumerate() {
            if *ex == 0 {
                continue;
            }
            let name = &ring.group()[i].name;
            if *ex == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{ex}"));
            }
        }
        let mixed = !abs.re.is_zero() && !abs.im.is_zero();
        let body = if parts.is_empty() {
            if mixed {
                format!("({})", abs.render())
            } else {
                abs.render()
            }
        } else {
            let mono = parts.join("*");
            if abs.is_one() {
                mono
            } else {
                let cs = abs.render();
                if mixed {
                    format!("({cs})*{mono}")
                } else {
                    format!("{cs}*{mono}")
                }
            }
        };
        if first {
            if neg {
                out.push('-');
            }
            out.push_str(&body);
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

impl std::fmt::Display for RingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_element(self))
    }
}

struct Parser<'a> {
    ring: &'a Ring,
    chars: Vec<char>,
    pos: usize,
}

pub(super) fn parse_element(ring: &Ring, input: &str) -> Result<RingElement> {
    let mut p = Parser { ring, chars: input.chars().collect(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("unexpected input at offset {}", p.pos)));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut negate = false;
        if self.peek() == Some('-') {
            self.bump();
            negate = true;
        } else if self.peek() == Some('+') {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_add(&t)?;
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.bump();
            let f = self.factor()?;
            acc = acc.try_mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RingElement> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.signed_int()?;
            return base.pow_signed(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RingElement> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(Error::Parse("expected `)`".into()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.unsigned_int()?;
                if self.peek() == Some('/') {
                    self.bump();
                    let den = self.unsigned_int()?;
                    if den == 0 {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    self.ring.rat(num, den)
                } else {
                    Ok(self.ring.int(num))
                }
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.ident();
                if self.ring.vars().iter().any(|v| v.name == name) {
                    self.ring.var(&name)
                } else if self.ring.group().iter().any(|g| g.name == name) {
                    self.ring.gen(&name)
                } else if name == "i" {
                    self.ring.imag()
                } else {
                    Err(Error::Parse(format!("unknown name `{name}`")))
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn unsigned_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse("expected a number".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| Error::Parse(format!("number out of range: {s}")))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some('-') {
            self.bump();
            true
        } else {
            false
        };
        let n = self.unsigned_int()?;
        Ok(if neg { -n } else { n })
    }
}
