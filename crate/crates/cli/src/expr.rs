//! Integrand expressions: `+ - * / ^`, unary minus, parentheses, `x`, `pi`, numbers and
//! `exp`, `sin`, `cos`, `abs`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    /// Zero-based character offset.
    pub pos: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Call(f, e) => f.apply(e.eval(x)),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x), b.eval(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Call(func, e) => write!(f, "{}({e})", format!("{func:?}").to_lowercase()),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| ParseError {
                pos: start,
                message: format!("malformed number {s:?}"),
            })?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(ParseError {
                        pos: i,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            };
            out.push((tok, i));
            i += 1;
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    pi: f64,
}

const UNARY_BP: u8 = 25;

fn infix_bp(op: char) -> (u8, u8) {
    match op {
        '+' | '-' => (10, 11),
        '*' | '/' => (20, 21),
        '^' => (31, 30),
        _ => unreachable!("operator set is closed"),
    }
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos, message: message.into() })
    }

    fn expect_rparen(&mut self, open: usize) -> Result<(), ParseError> {
        match self.next() {
            (Tok::RParen, _) => Ok(()),
            (_, pos) => Self::error(pos, format!("expected ')' to close '(' at position {open}")),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let (tok, pos) = self.next();
        let mut lhs = match tok {
            Tok::Num(v) => Expr::Num(v),
            Tok::Op('-') => Expr::Neg(Box::new(self.expr(UNARY_BP)?)),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect_rparen(pos)?;
                e
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Expr::X,
                "pi" => Expr::Num(self.pi),
                _ => match Func::lookup(&name) {
                    Some(f) => match self.next() {
                        (Tok::LParen, open) => {
                            let arg = self.expr(0)?;
                            self.expect_rparen(open)?;
                            Expr::Call(f, Box::new(arg))
                        }
                        (_, p) => return Self::error(p, format!("expected '(' after function {name}")),
                    },
                    None => return Self::error(pos, format!("unknown identifier {name:?}")),
                },
            },
            Tok::RParen => return Self::error(pos, "unbalanced ')'"),
            Tok::End => return Self::error(pos, "unexpected end of input"),
            Tok::Op(c) => return Self::error(pos, format!("operator {c:?} needs a left operand")),
        };
        loop {
            let (tok, pos) = self.peek().clone();
            let op = match tok {
                Tok::Op(c) => c,
                Tok::End | Tok::RParen => break,
                _ => return Self::error(pos, "expected an operator"),
            };
            let (l_bp, r_bp) = infix_bp(op);
            if l_bp < min_bp {
                break;
            }
            self.next();
            let rhs = self.expr(r_bp)?;
            let op = match op {
                '+' => BinOp::Add,
                '-' => BinOp::Sub,
                '*' => BinOp::Mul,
                '/' => BinOp::Div,
                _ => BinOp::Pow,
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with_pi(text, std::f64::consts::PI)
}

/// Parses with the constant `pi` bound to `pi`.
pub fn parse_with_pi(text: &str, pi: f64) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError { pos: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks: tokenize(text)?, at: 0, pi };
    let e = p.expr(0)?;
    match p.peek() {
        (Tok::End, _) => Ok(e),
        (Tok::RParen, pos) => Err(ParseError { pos: *pos, message: "unbalanced ')'".into() }),
        (_, pos) => Err(ParseError { pos: *pos, message: "unexpected trailing input".into() }),
    }
}
