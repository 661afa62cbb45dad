//! The shared expression grammar.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary | "/" unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" "-"? INT)?
//! atom   := INT | IDENT | "(" expr ")"
//! ```
//!
//! Identifiers are `[A-Za-z][A-Za-z0-9_]*`. Division is only accepted between
//! integer literals, for rational coefficients such as `3/2*a`. Negative
//! exponents parse but are rejected by every evaluator except group words.
//! Each domain supplies an [`Evaluator`] that turns the tree into values.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

/// Byte offset into the source text.
pub type Pos = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at position {pos}: {message}")]
pub struct ExprError {
    pub pos: Pos,
    pub message: String,
}

impl ExprError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ExprError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt, Pos),
    Ident(String, Pos),
    Neg(Box<Expr>, Pos),
    Add(Box<Expr>, Box<Expr>, Pos),
    Sub(Box<Expr>, Box<Expr>, Pos),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i64, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int(_, p)
            | Expr::Ident(_, p)
            | Expr::Neg(_, p)
            | Expr::Add(_, _, p)
            | Expr::Sub(_, _, p)
            | Expr::Mul(_, _, p)
            | Expr::Div(_, _, p)
            | Expr::Pow(_, _, p) => *p,
        }
    }

    /// All identifiers in source order.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Int(..) => {}
            Expr::Ident(s, _) => out.push(s),
            Expr::Neg(a, _) | Expr::Pow(a, _, _) => a.collect_idents(out),
            Expr::Add(a, b, _) | Expr::Sub(a, b, _) | Expr::Mul(a, b, _) | Expr::Div(a, b, _) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n, _) => write!(f, "{n}"),
            Expr::Ident(s, _) => write!(f, "{s}"),
            Expr::Neg(a, _) => write!(f, "(-{a})"),
            Expr::Add(a, b, _) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b, _) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b, _) => write!(f, "({a} * {b})"),
            Expr::Div(a, b, _) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e, _) => write!(f, "({a}^{e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or(c);
            return Err(ExprError::new(i, format!("unexpected character `{ch}`")));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?), pos);
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?), pos);
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                match self.peek() {
                    Tok::Int(_) | Tok::Ident(_) | Tok::Sym('(') => {
                        return Err(ExprError::new(pos, "expected `*` between factors"))
                    }
                    _ => return Ok(lhs),
                }
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?), pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let epos = self.pos();
        match self.bump() {
            (Tok::Int(n), _) => {
                let e: i64 = n
                    .try_into()
                    .map_err(|_| ExprError::new(epos, "exponent too large"))?;
                if *self.peek() == Tok::Sym('^') {
                    return Err(ExprError::new(self.pos(), "chained exponents need parentheses"));
                }
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, pos))
            }
            _ => Err(ExprError::new(epos, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.bump() {
            (Tok::Int(n), p) => Ok(Expr::Int(n, p)),
            (Tok::Ident(s), p) => Ok(Expr::Ident(s, p)),
            (Tok::Sym('('), _) => {
                let inner = self.expr()?;
                let p = self.pos();
                if !self.eat(')') {
                    return Err(ExprError::new(p, "expected `)`"));
                }
                Ok(inner)
            }
            (Tok::End, p) => Err(ExprError::new(p, "unexpected end of input")),
            (Tok::Sym(c), p) => Err(ExprError::new(p, format!("unexpected `{c}`"))),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::Sym(')') => Err(ExprError::new(p.pos(), "unbalanced `)`")),
        _ => Err(ExprError::new(p.pos(), "unexpected trailing input")),
    }
}

/// A target domain for expression evaluation.
pub trait Evaluator {
    type Value: Clone;

    fn integer(&self, n: &BigInt, pos: Pos) -> Result<Self::Value, ExprError>;
    fn rational(&self, num: &BigInt, den: &BigInt, pos: Pos) -> Result<Self::Value, ExprError>;
    fn ident(&self, name: &str, pos: Pos) -> Result<Self::Value, ExprError>;
    fn add(&self, a: Self::Value, b: Self::Value, pos: Pos) -> Result<Self::Value, ExprError>;
    fn neg(&self, a: Self::Value, pos: Pos) -> Result<Self::Value, ExprError>;
    fn mul(&self, a: Self::Value, b: Self::Value, pos: Pos) -> Result<Self::Value, ExprError>;
    fn pow(&self, a: Self::Value, e: i64, pos: Pos) -> Result<Self::Value, ExprError>;

    fn sub(&self, a: Self::Value, b: Self::Value, pos: Pos) -> Result<Self::Value, ExprError> {
        let nb = self.neg(b, pos)?;
        self.add(a, nb, pos)
    }
}

fn int_literal(e: &Expr) -> Option<BigInt> {
    match e {
        Expr::Int(n, _) => Some(n.clone()),
        Expr::Neg(a, _) => int_literal(a).map(|n| -n),
        _ => None,
    }
}

pub fn evaluate<E: Evaluator>(expr: &Expr, ev: &E) -> Result<E::Value, ExprError> {
    match expr {
        Expr::Int(n, p) => ev.integer(n, *p),
        Expr::Ident(s, p) => ev.ident(s, *p),
        Expr::Neg(a, p) => {
            let v = evaluate(a, ev)?;
            ev.neg(v, *p)
        }
        Expr::Add(a, b, p) => {
            let (x, y) = (evaluate(a, ev)?, evaluate(b, ev)?);
            ev.add(x, y, *p)
        }
        Expr::Sub(a, b, p) => {
            let (x, y) = (evaluate(a, ev)?, evaluate(b, ev)?);
            ev.sub(x, y, *p)
        }
        Expr::Mul(a, b, p) => {
            let (x, y) = (evaluate(a, ev)?, evaluate(b, ev)?);
            ev.mul(x, y, *p)
        }
        Expr::Div(a, b, p) => match (int_literal(a), int_literal(b)) {
            (Some(n), Some(d)) => ev.rational(&n, &d, *p),
            _ => Err(ExprError::new(*p, "division is only allowed between integer literals")),
        },
        Expr::Pow(a, e, p) => {
            let v = evaluate(a, ev)?;
            ev.pow(v, *e, *p)
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_str<E: Evaluator>(src: &str, ev: &E) -> Result<E::Value, ExprError> {
    evaluate(&parse(src)?, ev)
}
