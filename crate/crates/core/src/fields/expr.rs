//! Parser for the plain-text field syntax, e.g. `(-B*y/2, B*x/2, 0)`.
//!
//! Grammar:
//!
//! ```text
//! vector := '(' expr ',' expr ',' expr ')'
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | identifier | '(' expr ')'
//! ```
//!
//! Numbers are exact: `0.25` and `2.5e-1` both parse to `1/4`. Identifiers are
//! the coordinates `x`, `y`, `z` or named rational constants supplied by the
//! caller. Division is only allowed by nonzero constants.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use super::config::PolyVec;
use super::poly::Polynomial;
use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ExprError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Named constants available to expressions.
pub type Constants = BTreeMap<String, Rational>;

const MAX_DECIMAL_EXPONENT: i32 = 24;
const MAX_POWER: u32 = 12;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column_offset: usize,
    consts: &'a Constants,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            line: self.line,
            column: self.column_offset + at + 1,
            message: message.into(),
        })
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

    fn expect(&mut self, ch: u8) -> Result<(), ExprError> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(self.pos, format!("expected '{}', found '{}'", ch as char, c as char)),
            None => self.err(self.pos, format!("expected '{}', found end of input", ch as char)),
        }
    }

    fn finish(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
        }
    }

    fn vector(&mut self) -> Result<PolyVec, ExprError> {
        self.expect(b'(')?;
        let a = self.expr()?;
        self.expect(b',')?;
        let b = self.expr()?;
        self.expect(b',')?;
        let c = self.expr()?;
        self.expect(b')')?;
        Ok(PolyVec::new([a, b, c]))
    }

    fn expr(&mut self) -> Result<Polynomial, ExprError> {
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

    fn term(&mut self) -> Result<Polynomial, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let divisor = self.unary()?;
                    match divisor.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(Rational::one() / c),
                        Some(_) => return self.err(at, "division by zero"),
                        None => return self.err(at, "division by a non-constant expression"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ExprError> {
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

    fn power(&mut self) -> Result<Polynomial, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err(start, "expected a nonnegative integer exponent");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: u32 = match text.parse() {
                Ok(n) if n <= MAX_POWER => n,
                _ => return self.err(start, format!("exponent must be at most {MAX_POWER}")),
            };
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number().map(Polynomial::constant),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "x" => Ok(Polynomial::coordinate(0)),
                    "y" => Ok(Polynomial::coordinate(1)),
                    "z" => Ok(Polynomial::coordinate(2)),
                    other => match self.consts.get(other) {
                        Some(v) => Ok(Polynomial::constant(*v)),
                        None => self.err(start, format!("unknown identifier '{other}'")),
                    },
                }
            }
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
            None => self.err(self.pos, "unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Rational, ExprError> {
        let start = self.pos;
        let mut digits = String::new();
        let mut frac_len = 0i32;
        let mut seen_point = false;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                digits.push(c as char);
                if seen_point {
                    frac_len += 1;
                }
            } else if c == b'.' && !seen_point {
                seen_point = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits.is_empty() {
            return self.err(start, "malformed number");
        }
        let mut exp10 = -frac_len;
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            let mut sign = 1;
            match self.src.get(self.pos) {
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                Some(b'+') => self.pos += 1,
                _ => {}
            }
            let es = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if es == self.pos {
                return self.err(mark, "malformed exponent");
            }
            let e: i32 = std::str::from_utf8(&self.src[es..self.pos])
                .unwrap()
                .parse()
                .unwrap_or(i32::MAX);
            exp10 = exp10.saturating_add(sign * e);
        }
        let digits = digits.trim_start_matches('0');
        let mantissa: i128 = if digits.is_empty() {
            0
        } else {
            match digits.parse() {
                Ok(m) => m,
                Err(_) => return self.err(start, "number has too many digits"),
            }
        };
        if exp10.abs() > MAX_DECIMAL_EXPONENT {
            return self.err(start, "number out of exactly representable range");
        }
        let p = 10i128.pow(exp10.unsigned_abs());
        let value = if exp10 >= 0 {
            match mantissa.checked_mul(p) {
                Some(v) => Rational::from_integer(v),
                None => return self.err(start, "number out of exactly representable range"),
            }
        } else {
            Rational::new(mantissa, p)
        };
        Ok(value)
    }
}

fn parser<'a>(src: &'a str, consts: &'a Constants, line: usize, column_offset: usize) -> Parser<'a> {
    Parser {
        src: src.as_bytes(),
        pos: 0,
        line,
        column_offset,
        consts,
    }
}

/// Parses a scalar expression. `line`/`column_offset` locate `src` inside a
/// larger document for error messages.
pub fn parse_scalar_at(
    src: &str,
    consts: &Constants,
    line: usize,
    column_offset: usize,
) -> Result<Polynomial, ExprError> {
    let mut p = parser(src, consts, line, column_offset);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_vector_at(src: &str, consts: &Constants, line: usize, column_offset: usize) -> Result<PolyVec, ExprError> {
    let mut p = parser(src, consts, line, column_offset);
    let v = p.vector()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_scalar(src: &str, consts: &Constants) -> Result<Polynomial, ExprError> {
    parse_scalar_at(src, consts, 1, 0)
}

pub fn parse_vector(src: &str, consts: &Constants) -> Result<PolyVec, ExprError> {
    parse_vector_at(src, consts, 1, 0)
}

/// Parses a constant-valued expression (used for `B = 1/2` style bindings).
pub fn parse_constant_at(
    src: &str,
    consts: &Constants,
    line: usize,
    column_offset: usize,
) -> Result<Rational, ExprError> {
    let p = parse_scalar_at(src, consts, line, column_offset)?;
    p.as_constant().ok_or_else(|| ExprError {
        line,
        column: column_offset + 1,
        message: "expected a constant expression".into(),
    })
}
