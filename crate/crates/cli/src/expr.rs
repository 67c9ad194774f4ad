//! Expressions over the generators:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := factor ('^' int)?
//! factor := atom | '(' expr ')' | '[' expr ',' expr ']' | int | 's' | 't'
//! atom   := ('u' | 'theta') '(' int ',' int ')'
//! ```
//!
//! `s` and `t` stand for sigma and sigma-bar. Division is only allowed by
//! scalars.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    U(i64, i64),
    Theta(i64, i64),
    Int(u64),
    Sigma,
    SigmaBar,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Comm(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input after the expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> SyntaxError {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        SyntaxError { line, column, message: message.to_string() }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), SyntaxError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.term()?;
        loop {
            if self.eat(b'+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat(b'-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.unary()?;
        loop {
            if self.eat(b'*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.factor()?;
        if self.eat(b'^') {
            return Ok(Expr::Pow(Box::new(base), self.int()?));
        }
        Ok(base)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(Expr::Comm(Box::new(a), Box::new(b)))
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                digits.parse().map(Expr::Int).map_err(|_| {
                    self.pos = start;
                    self.error("integer literal too large")
                })
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"s" => Ok(Expr::Sigma),
                    b"t" => Ok(Expr::SigmaBar),
                    name @ (b"u" | b"theta") => {
                        let is_u = name == b"u";
                        self.expect(b'(')?;
                        let r = self.int()?;
                        self.expect(b',')?;
                        let d = self.int()?;
                        self.expect(b')')?;
                        Ok(if is_u { Expr::U(r, d) } else { Expr::Theta(r, d) })
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error("unknown identifier; expected u, theta, s or t"))
                    }
                }
            }
            Some(_) => Err(self.error("expected an atom, a scalar, '(' or '['")),
        }
    }

    fn int(&mut self) -> Result<i64, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos] == b'-' {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("integer out of range")
        })
    }
}

/// Binding strength used by the renderer.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

struct Wrap<'a>(&'a Expr, bool);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::U(r, d) => write!(f, "u({r},{d})"),
            Expr::Theta(r, d) => write!(f, "theta({r},{d})"),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Sigma => write!(f, "s"),
            Expr::SigmaBar => write!(f, "t"),
            Expr::Neg(a) => write!(f, "-{}", Wrap(a, level(a) < 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", a, Wrap(b, level(b) <= 1)),
            Expr::Sub(a, b) => write!(f, "{} - {}", a, Wrap(b, level(b) <= 1)),
            Expr::Mul(a, b) => write!(f, "{} * {}", Wrap(a, level(a) < 2), Wrap(b, level(b) <= 2)),
            Expr::Div(a, b) => write!(f, "{} / {}", Wrap(a, level(a) < 2), Wrap(b, level(b) <= 2)),
            Expr::Pow(a, k) => write!(f, "{}^{k}", Wrap(a, level(a) < 5)),
            Expr::Comm(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}
