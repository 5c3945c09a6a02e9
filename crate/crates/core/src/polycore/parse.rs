//! Recursive-descent reader for polynomial expressions.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'sqrt' '(' integer ')' | variable | '(' expr ')'
//! ```
//!
//! Division is only allowed by non-zero constants.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Coeff, FieldSpec, Poly, Vars, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};

/// Parse an expression in `q1..qn, p1..pn`.
pub fn parse(text: &str, n: usize, field: FieldSpec) -> Result<Poly<Coeff>> {
    parse_in(text, Vars::principal(n), field)
}

/// Parse an expression over an arbitrary variable layout.
pub fn parse_in(text: &str, vars: Vars, field: FieldSpec) -> Result<Poly<Coeff>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars, field };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

/// Parse a constant expression such as `3/4` or `1 - sqrt(3)`.
pub fn parse_constant(text: &str, field: FieldSpec) -> Result<Coeff> {
    let p = parse_in(text, Vars::plain(0), field)?;
    Ok(p.constant_term())
}

/// Parse a point: comma-separated constants, optionally wrapped in parentheses or brackets.
pub fn parse_point(text: &str, field: FieldSpec) -> Result<Vec<Coeff>> {
    let t = text.trim();
    let (inner, offset) = match (t.chars().next(), t.chars().last()) {
        (Some('('), Some(')')) | (Some('['), Some(']')) => (&t[1..t.len() - 1], 1),
        _ => (t, 0),
    };
    if inner.trim().is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty point".into() });
    }
    let mut out = Vec::new();
    let mut start = 0;
    for piece in inner.split(',') {
        let c = parse_constant(piece, field).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + start + offset, msg },
            other => other,
        })?;
        out.push(c);
        start += piece.len() + 1;
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vars,
    field: FieldSpec,
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

    fn expect(&mut self, ch: u8) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", ch as char)))
        }
    }

    fn expr(&mut self) -> Result<Poly<Coeff>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<Coeff>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                    self.check_degree(&acc)?;
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if !rhs.is_constant() {
                        return Err(Error::Parse { pos: at, msg: "division by a non-constant".into() });
                    }
                    let inv = rhs
                        .constant_term()
                        .inv()
                        .ok_or(Error::Parse { pos: at, msg: "division by zero".into() })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<Coeff>> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<Coeff>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse { pos: at, msg: "exponent too large".into() })?;
            let deg = base.degree().unwrap_or(0).saturating_mul(e);
            if deg > DEFAULT_DEGREE_CAP {
                return Err(Error::DegreeCapExceeded { degree: deg, cap: DEFAULT_DEGREE_CAP });
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn check_degree(&self, p: &Poly<Coeff>) -> Result<()> {
        let deg = p.degree().unwrap_or(0);
        if deg > DEFAULT_DEGREE_CAP {
            return Err(Error::DegreeCapExceeded { degree: deg, cap: DEFAULT_DEGREE_CAP });
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    fn atom(&mut self) -> Result<Poly<Coeff>> {
        let Some(ch) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        if ch == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        if ch.is_ascii_digit() || ch == b'.' {
            return self.number();
        }
        if ch.is_ascii_alphabetic() {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            if name == "sqrt" {
                return self.radical(start);
            }
            return self.variable(name, start);
        }
        Err(self.err(&format!("unexpected character `{}`", ch as char)))
    }

    fn number(&mut self) -> Result<Poly<Coeff>> {
        let start = self.pos;
        let mut digits = String::new();
        let mut frac_len = 0u32;
        let mut seen_dot = false;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_digit() {
                digits.push(c as char);
                if seen_dot {
                    frac_len += 1;
                }
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(Error::Parse { pos: start, msg: "malformed number".into() });
        }
        let num: BigInt = digits.parse().unwrap();
        let den = num_traits::pow(BigInt::from(10), frac_len as usize);
        let c = Coeff::rational(BigRational::new(num, den));
        Ok(Poly::constant(self.vars, c))
    }

    fn radical(&mut self, start: usize) -> Result<Poly<Coeff>> {
        self.expect(b'(')?;
        self.skip_ws();
        let d = self.integer()?;
        self.expect(b')')?;
        match self.field {
            FieldSpec::Sqrt(fd) if fd as u64 == d => Ok(Poly::constant(self.vars, Coeff::sqrt_of(fd))),
            FieldSpec::Sqrt(fd) => Err(Error::RadicalMismatch {
                pos: start,
                msg: format!("sqrt({d}) in a document over sqrt{fd}"),
            }),
            FieldSpec::Rational => Err(Error::RadicalMismatch {
                pos: start,
                msg: format!("sqrt({d}) in a rational document"),
            }),
        }
    }

    fn variable(&mut self, name: &str, start: usize) -> Result<Poly<Coeff>> {
        if let Some(i) = self.vars.index_of(name) {
            return Ok(Poly::var(self.vars, i));
        }
        let looks_indexed = name.len() > 1
            && name[1..].bytes().all(|b| b.is_ascii_digit())
            && matches!(&name[..1], "q" | "p" | "x" | "w" | "y" | "t");
        if looks_indexed {
            Err(Error::VariableOutOfRange { name: name.to_string(), pos: start })
        } else {
            Err(Error::Parse { pos: start, msg: format!("unknown identifier `{name}`") })
        }
    }
}

/// Integer-coefficient helper used by builders: `c * prod x_i^e_i`.
pub fn monomial_term(vars: Vars, exps: &[(usize, u16)], c: Coeff) -> Poly<Coeff> {
    let mut e = vec![0u16; vars.count()];
    for &(i, k) in exps {
        e[i] += k;
    }
    Poly::from_terms(vars, [(e, c)])
}
