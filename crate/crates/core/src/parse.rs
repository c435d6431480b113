//! Literal grammars for polynomials, sections and operators.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := number ('/' number)? | variable | '(' expr ')'
//!          | dx | dy | ...            (operators only)
//!          | '[' expr ']'             (operators: multiplication)
//!          | '[' '[' row ']' (',' '[' row ']')* ']'   (operator matrix)
//! ```
//!
//! Variables `x, y, z, w` are axes 0..3; `x0, x1, ...` name axes directly.
//! In operator literals `*` is composition and a polynomial factor stands
//! for multiplication by it.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::diffop::OperatorExpr;
use crate::error::{Error, Result};
use crate::ring::{PolyMatrix, Polynomial, Section};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let text = &src[start..i];
                out.push((Tok::Num(parse_decimal(text, start)?), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn parse_decimal(text: &str, pos: usize) -> Result<Rational> {
    let bad = || Error::Parse {
        pos,
        message: format!("malformed number {text:?}"),
    };
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(Rational::new(num, den))
}

/// Axis named by a variable identifier, if it is one.
fn variable_axis(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        _ => name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse().ok()),
    }
}

/// Smallest dimension in which every variable or `d`-generator of the
/// literal is defined (at least 1).
pub fn infer_nvars(src: &str) -> usize {
    lex(src)
        .map(|toks| {
            toks.iter()
                .filter_map(|(t, _)| match t {
                    Tok::Ident(name) => variable_axis(name)
                        .or_else(|| name.strip_prefix('d').and_then(variable_axis)),
                    _ => None,
                })
                .map(|a| a + 1)
                .max()
                .unwrap_or(1)
        })
        .unwrap_or(1)
        .max(1)
}

/// Values an expression literal can denote.
trait Node: Sized + Clone {
    fn number(nvars: usize, c: Rational) -> Self;
    fn variable(nvars: usize, axis: usize) -> Self;
    fn add(self, rhs: Self, pos: usize) -> Result<Self>;
    fn mul(self, rhs: Self, pos: usize) -> Result<Self>;
    fn neg(self) -> Self;
    fn one_like(&self, nvars: usize) -> Self;
    /// Grammar extensions beyond polynomial atoms.
    fn extra_atom(p: &mut Parser<'_>) -> Option<Result<Self>>;
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() != Tok::End {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn expr<N: Node>(&mut self) -> Result<N> {
        let mut acc = self.term::<N>()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term::<N>()?;
                    acc = acc.add(rhs, pos)?;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term::<N>()?;
                    acc = acc.add(rhs.neg(), pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<N: Node>(&mut self) -> Result<N> {
        let mut acc = self.unary::<N>()?;
        while *self.peek() == Tok::Star {
            let pos = self.pos();
            self.bump();
            let rhs = self.unary::<N>()?;
            acc = acc.mul(rhs, pos)?;
        }
        Ok(acc)
    }

    fn unary<N: Node>(&mut self) -> Result<N> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary::<N>()?.neg());
        }
        self.power()
    }

    fn power<N: Node>(&mut self) -> Result<N> {
        let base = self.atom::<N>()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let k = match self.bump() {
            Tok::Num(r) if r.is_integer() => r
                .to_integer()
                .try_into()
                .map_err(|_| Error::Parse {
                    pos,
                    message: "exponent too large".into(),
                })?,
            _ => {
                return Err(Error::Parse {
                    pos,
                    message: "expected a non-negative integer exponent".into(),
                })
            }
        };
        let k: u32 = k;
        let mut acc = base.one_like(self.nvars);
        for _ in 0..k {
            acc = acc.mul(base.clone(), pos)?;
        }
        Ok(acc)
    }

    fn atom<N: Node>(&mut self) -> Result<N> {
        if let Some(r) = N::extra_atom(self) {
            return r;
        }
        let pos = self.pos();
        match self.bump() {
            Tok::Num(r) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Tok::Num(d) if !d.is_zero() => Ok(N::number(self.nvars, r / d)),
                        Tok::Num(_) => Err(Error::Parse {
                            pos: dpos,
                            message: "division by zero".into(),
                        }),
                        _ => Err(Error::Parse {
                            pos: dpos,
                            message: "expected a denominator".into(),
                        }),
                    }
                } else {
                    Ok(N::number(self.nvars, r))
                }
            }
            Tok::Ident(name) => match variable_axis(&name) {
                Some(axis) if axis < self.nvars => Ok(N::variable(self.nvars, axis)),
                Some(_) => Err(Error::Parse {
                    pos,
                    message: format!("variable {name} not available in {} dimensions", self.nvars),
                }),
                None => Err(Error::Parse {
                    pos,
                    message: format!("unknown identifier {name:?}"),
                }),
            },
            Tok::LParen => {
                let inner = self.expr::<N>()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(Error::Parse {
                pos,
                message: "expected a number, variable or '('".into(),
            }),
        }
    }
}

impl Node for Polynomial<Rational> {
    fn number(nvars: usize, c: Rational) -> Self {
        Polynomial::constant(nvars, c)
    }

    fn variable(nvars: usize, axis: usize) -> Self {
        Polynomial::var(nvars, axis)
    }

    fn add(self, rhs: Self, _pos: usize) -> Result<Self> {
        Ok(&self + &rhs)
    }

    fn mul(self, rhs: Self, _pos: usize) -> Result<Self> {
        Ok(&self * &rhs)
    }

    fn neg(self) -> Self {
        -&self
    }

    fn one_like(&self, nvars: usize) -> Self {
        Polynomial::one(nvars)
    }

    fn extra_atom(_p: &mut Parser<'_>) -> Option<Result<Self>> {
        None
    }
}

impl Node for OperatorExpr<Rational> {
    fn number(nvars: usize, c: Rational) -> Self {
        OperatorExpr::multiply(Polynomial::constant(nvars, c))
    }

    fn variable(nvars: usize, axis: usize) -> Self {
        OperatorExpr::multiply(Polynomial::var(nvars, axis))
    }

    fn add(self, rhs: Self, pos: usize) -> Result<Self> {
        OperatorExpr::sum(self, rhs).map_err(|e| at(pos, e))
    }

    fn mul(self, rhs: Self, pos: usize) -> Result<Self> {
        OperatorExpr::compose(self, rhs).map_err(|e| at(pos, e))
    }

    fn neg(self) -> Self {
        OperatorExpr::Scale(-Rational::one(), Box::new(self))
    }

    fn one_like(&self, nvars: usize) -> Self {
        OperatorExpr::Multiply(PolyMatrix::identity(nvars, self.input_rank()))
    }

    fn extra_atom(p: &mut Parser<'_>) -> Option<Result<Self>> {
        match p.peek().clone() {
            Tok::Ident(name) => {
                let axis = name.strip_prefix('d').and_then(variable_axis)?;
                let pos = p.pos();
                p.bump();
                if axis >= p.nvars {
                    return Some(Err(Error::Parse {
                        pos,
                        message: format!("{name} not available in {} dimensions", p.nvars),
                    }));
                }
                Some(Ok(OperatorExpr::partial(p.nvars, axis)))
            }
            Tok::LBracket => {
                p.bump();
                if *p.peek() == Tok::LBracket {
                    Some(block(p))
                } else {
                    let r = p.expr::<Polynomial<Rational>>().and_then(|f| {
                        p.expect(Tok::RBracket, "']'")?;
                        Ok(OperatorExpr::multiply(f))
                    });
                    Some(r)
                }
            }
            _ => None,
        }
    }
}

/// Rank and typing errors raised while building an expression become
/// position-annotated parse errors.
fn at(pos: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            pos,
            message: other.to_string(),
        },
    }
}

/// Rows of a bracketed operator matrix; the opening `[` is consumed.
fn block(p: &mut Parser<'_>) -> Result<OperatorExpr<Rational>> {
    let start = p.pos();
    let mut rows = Vec::new();
    loop {
        p.expect(Tok::LBracket, "'['")?;
        let mut row = vec![p.expr::<OperatorExpr<Rational>>()?];
        while *p.peek() == Tok::Comma {
            p.bump();
            row.push(p.expr::<OperatorExpr<Rational>>()?);
        }
        p.expect(Tok::RBracket, "']'")?;
        rows.push(row);
        if *p.peek() == Tok::Comma {
            p.bump();
        } else {
            break;
        }
    }
    p.expect(Tok::RBracket, "']'")?;
    OperatorExpr::block(rows).map_err(|e| at(start, e))
}

fn run<N: Node>(src: &str, nvars: usize) -> Result<N> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        nvars,
    };
    let v = p.expr::<N>()?;
    p.finish()?;
    Ok(v)
}

/// Parses a polynomial literal such as `3/2*x^2*y - x + 1`.
pub fn parse_poly(src: &str, nvars: usize) -> Result<Polynomial<Rational>> {
    run(src, nvars)
}

/// Parses an operator literal such as `x^2*dx^2 + dx*dy` or
/// `[[dx, [x]], [0, dy]]`.
pub fn parse_operator(src: &str, nvars: usize) -> Result<OperatorExpr<Rational>> {
    run(src, nvars)
}

/// Parses a comma-separated list of polynomials, optionally parenthesized.
pub fn parse_section(src: &str, nvars: usize) -> Result<Section<Rational>> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        nvars,
    };
    let mut comps = vec![p.expr::<Polynomial<Rational>>()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        comps.push(p.expr::<Polynomial<Rational>>()?);
    }
    p.finish()?;
    Section::new(nvars, comps)
}

/// Parses a polynomial matrix `[[a, b], [c, d]]`; a bare polynomial is a
/// `1 × 1` matrix.
pub fn parse_poly_matrix(src: &str, nvars: usize) -> Result<PolyMatrix<Rational>> {
    let op = parse_operator(src, nvars)?.normalize()?;
    match op.order() {
        None => Ok(PolyMatrix::zero(nvars, op.output_rank(), op.input_rank())),
        Some(0) => Ok(op.zero_order_part()),
        Some(_) => Err(Error::Parse {
            pos: 0,
            message: "expected a matrix of polynomials, found a differential operator".into(),
        }),
    }
}

/// Parses an exact rational `a/b`, an integer, or a decimal.
pub fn parse_rational(src: &str) -> Result<Rational> {
    let s = src.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let r = match body.split_once('/') {
        Some((a, b)) => {
            let a = parse_decimal(a.trim(), 0)?;
            let b = parse_decimal(b.trim(), a.to_string().len() + 1)?;
            if b.is_zero() {
                return Err(Error::Parse {
                    pos: 0,
                    message: "zero denominator".into(),
                });
            }
            a / b
        }
        None => parse_decimal(body, 0)?,
    };
    Ok(if neg { -r } else { r })
}
