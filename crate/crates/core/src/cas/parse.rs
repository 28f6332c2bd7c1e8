//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer ("/" integer)? | ident | "(" expr ")"
//! ```
//!
//! Juxtaposition is not multiplication: `2x` and `x y` are errors.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{Poly, Ring};
use super::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Token { tok: t, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[s..i].iter().collect();
            col += i - s;
            let v: BigInt = digits.parse().expect("digit run");
            out.push(Token { tok: Tok::Int(v), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - s;
            out.push(Token { tok: Tok::Ident(chars[s..i].iter().collect()), line: l0, column: c0 });
            continue;
        }
        return Err(ParseError { line: l0, column: c0, message: format!("unexpected character '{c}'") });
    }
    out.push(Token { tok: Tok::End, line, column: col });
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(Q),
    Var(String, usize, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: t.line, column: t.column, message: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Int(ref v) => match u32::try_from(v) {
                Ok(e) => Ok(Expr::Pow(Box::new(base), e)),
                Err(_) => self.err(&t, "exponent too large"),
            },
            Tok::Minus => self.err(&t, "negative exponents are not allowed"),
            _ => self.err(&t, "expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        let e = match t.tok {
            Tok::Int(n) => {
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let d = self.bump();
                    match d.tok {
                        Tok::Int(den) if !den.is_zero() => Expr::Num(Q::new(n, den)),
                        Tok::Int(_) => return self.err(&d, "division by zero"),
                        _ => return self.err(&d, "'/' is only allowed between integer literals"),
                    }
                } else {
                    Expr::Num(Q::from_integer(n))
                }
            }
            Tok::Ident(name) => Expr::Var(name, t.line, t.column),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return self.err(&close, "expected ')'");
                }
                inner
            }
            Tok::End => return self.err(&t, "unexpected end of input"),
            ref other => return self.err(&t, format!("unexpected token {}", describe(other))),
        };
        if let Tok::Int(_) | Tok::Ident(_) | Tok::LParen = self.peek().tok {
            let n = self.peek().clone();
            return self.err(&n, "implicit multiplication is not allowed; use '*'");
        }
        Ok(e)
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::End => "end of input",
    }
}

fn collect_vars(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(n, _, _) => {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::Neg(a) | Expr::Pow(a, _) => collect_vars(a, out),
    }
}

fn eval(e: &Expr, ring: &Arc<Ring>) -> Result<Poly, ParseError> {
    Ok(match e {
        Expr::Num(q) => Poly::constant(ring, q.clone()),
        Expr::Var(n, line, column) => match ring.index_of(n) {
            Some(i) => Poly::var(ring, i),
            None => {
                return Err(ParseError { line: *line, column: *column, message: format!("unknown variable '{n}'") })
            }
        },
        Expr::Add(a, b) => eval(a, ring)? + eval(b, ring)?,
        Expr::Sub(a, b) => eval(a, ring)? - eval(b, ring)?,
        Expr::Mul(a, b) => eval(a, ring)? * eval(b, ring)?,
        Expr::Neg(a) => -eval(a, ring)?,
        Expr::Pow(a, k) => eval(a, ring)?.pow(*k),
    })
}

fn parse_ast(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, format!("unexpected {}", describe(&t.tok)));
    }
    Ok(e)
}

/// Orders identifiers so that embedded numbers compare numerically (`x2 < x10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let digit = bytes[i].is_ascii_digit();
            let st = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() == digit {
                i += 1;
            }
            out.push((digit, &s[st..i]));
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(cb.iter()) {
        let o = match (x.0, y.0) {
            (true, true) => {
                let (tx, ty) = (x.1.trim_start_matches('0'), y.1.trim_start_matches('0'));
                tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty)).then_with(|| x.1.len().cmp(&y.1.len()))
            }
            _ => x.1.cmp(y.1),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    ca.len().cmp(&cb.len())
}

/// Parses `text` in the given ring; unknown identifiers are errors.
pub fn parse_in(text: &str, ring: &Arc<Ring>) -> Result<Poly, ParseError> {
    eval(&parse_ast(text)?, ring)
}

/// Parses `text`, creating a ring from its identifiers in natural order.
pub fn parse(text: &str) -> Result<Poly, ParseError> {
    let ast = parse_ast(text)?;
    let mut vars = Vec::new();
    collect_vars(&ast, &mut vars);
    vars.sort_by(|a, b| natural_cmp(a, b));
    eval(&ast, &Ring::new(&vars))
}

/// Identifiers occurring in `text`, in order of first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>, ParseError> {
    let mut vars = Vec::new();
    collect_vars(&parse_ast(text)?, &mut vars);
    Ok(vars)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cusp() {
        let p = parse("x^2 - y^3").unwrap();
        assert_eq!(p.ring().vars(), &["x".to_string(), "y".to_string()]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "-y^3 + x^2");
    }

    #[test]
    fn rational_literals_and_precedence() {
        let p = parse("-1/2*x^2 + 3").unwrap();
        assert_eq!(p.to_string(), "-1/2*x^2 + 3");
        let q = parse("-(x+1)^2").unwrap();
        assert_eq!(q.to_string(), "-x^2 - 2*x - 1");
    }

    #[test]
    fn rejects_negative_exponent_with_position() {
        let e = parse("x^-1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(e.message.contains("negative"));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        assert!(parse("2x").is_err());
        assert!(parse("x y").is_err());
        assert!(parse("(x)(y)").is_err());
    }

    #[test]
    fn reports_line_and_column() {
        let e = parse("x +\n  * y").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
    }

    #[test]
    fn unknown_variable_in_declared_ring() {
        let r = Ring::new(&["x"]);
        let e = parse_in("x + z", &r).unwrap_err();
        assert_eq!(e.column, 5);
    }

    #[test]
    fn natural_variable_order() {
        let p = parse("x10 + x2 + x1").unwrap();
        assert_eq!(p.ring().vars(), &["x1", "x2", "x10"]);
    }
}
