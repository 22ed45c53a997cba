//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' uint)?
//! atom   := 'D' | 't' | uint ('/' uint)? | '(' expr ')'
//! ```
//!
//! `*` is the noncommutative product and must be written out. `3/4` is a
//! rational literal; any other `/` divides on the right by a factor of degree
//! zero, as in `(t^2+1)/(t-1)`. A divisor never absorbs a following `/`, so
//! `t/2/3` is `t/6`.

use std::fmt;

use fadel_core::{DifferentialField, Op, RatFun, Rational, Ring};
use thiserror::Error;

/// Parse tree. `Product` keeps its factors in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Sum(Vec<(Sign, Expr)>),
    Product(Vec<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, u32),
    AtomD,
    AtomT,
    AtomRational(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("can only divide by an expression of degree zero, not by {0}")]
    NonScalarDivisor(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    D,
    T,
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Unknown(char),
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::D => f.write_str("'D'"),
            Token::T => f.write_str("'t'"),
            Token::Int(s) => write!(f, "'{s}'"),
            Token::Plus => f.write_str("'+'"),
            Token::Minus => f.write_str("'-'"),
            Token::Star => f.write_str("'*'"),
            Token::Slash => f.write_str("'/'"),
            Token::Caret => f.write_str("'^'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
            Token::Unknown(c) => write!(f, "{c:?}"),
            Token::End => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        let (l, col) = (line, column);
        column += 1;
        let token = match c {
            '\n' => {
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => continue,
            'D' => Token::D,
            't' => Token::T,
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c if c.is_ascii_digit() => {
                let mut digits = c.to_string();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    chars.next();
                    column += 1;
                }
                Token::Int(digits)
            }
            other => Token::Unknown(other),
        };
        out.push(Spanned { token, line: l, column: col });
    }
    out.push(Spanned { token: Token::End, line, column });
    out
}

const ATOM: [&str; 4] = ["'D'", "'t'", "an integer", "'('"];

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].token.clone();
        if t != Token::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let here = &self.tokens[self.pos];
        ParseError { line: here.line, column: here.column, expected: expected.to_vec(), found: here.token.to_string() }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Sign::Plus;
        if *self.peek() == Token::Minus {
            self.bump();
            sign = Sign::Minus;
        }
        loop {
            terms.push((sign, self.term()?));
            sign = match self.peek() {
                Token::Plus => Sign::Plus,
                Token::Minus => Sign::Minus,
                _ => break,
            };
            self.bump();
        }
        Ok(match &terms[..] {
            [(Sign::Plus, _)] => terms.pop().expect("one term").1,
            _ => Expr::Sum(terms),
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor(true)?;
        let mut product = Vec::new();
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    product.push(acc);
                    acc = self.factor(true)?;
                }
                Token::Slash => {
                    self.bump();
                    let divisor = self.factor(false)?;
                    product.push(acc);
                    let numerator = if product.len() == 1 {
                        product.pop().expect("one factor")
                    } else {
                        Expr::Product(std::mem::take(&mut product))
                    };
                    acc = Expr::Quotient(Box::new(numerator), Box::new(divisor));
                }
                Token::D | Token::T | Token::Int(_) | Token::LParen => {
                    return Err(self.error(&["'*'", "'/'", "'+'", "'-'", "')'", "end of input"]));
                }
                _ => break,
            }
        }
        if product.is_empty() {
            Ok(acc)
        } else {
            product.push(acc);
            Ok(Expr::Product(product))
        }
    }

    fn factor(&mut self, literal: bool) -> Result<Expr, ParseError> {
        let atom = self.atom(literal)?;
        if *self.peek() != Token::Caret {
            return Ok(atom);
        }
        self.bump();
        match self.peek().clone() {
            Token::Int(digits) => match digits.parse::<u32>() {
                Ok(k) => {
                    self.bump();
                    Ok(Expr::Power(Box::new(atom), k))
                }
                Err(_) => Err(self.error(&["an exponent below 2^32"])),
            },
            _ => Err(self.error(&["an exponent"])),
        }
    }

    fn atom(&mut self, literal: bool) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Token::D => {
                self.bump();
                Ok(Expr::AtomD)
            }
            Token::T => {
                self.bump();
                Ok(Expr::AtomT)
            }
            Token::Int(digits) => {
                self.bump();
                let mut q: Rational = digits.parse().expect("digits form an integer");
                if literal && *self.peek() == Token::Slash {
                    if let Some(Token::Int(den)) = self.tokens.get(self.pos + 1).map(|s| &s.token) {
                        let den: Rational = den.parse().expect("digits form an integer");
                        if !den.is_zero() {
                            q = q / den;
                            self.pos += 2;
                        }
                    }
                }
                Ok(Expr::AtomRational(q))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["'+'", "'-'", "'*'", "'/'", "')'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(&ATOM)),
        }
    }
}

pub fn parse_operator(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { tokens: lex(text), pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Token::End {
        return Err(p.error(&["'+'", "'-'", "'*'", "'/'", "end of input"]));
    }
    Ok(e)
}

/// Normal form of a parse tree, products expanded with `δa = aδ + a'`.
pub fn normalize(e: &Expr) -> Result<Op, NormalizeError> {
    Ok(match e {
        Expr::Sum(terms) => {
            let mut acc = Op::zero();
            for (sign, t) in terms {
                let v = normalize(t)?;
                acc = match sign {
                    Sign::Plus => acc.add_op(&v),
                    Sign::Minus => acc.sub_op(&v),
                };
            }
            acc
        }
        Expr::Product(factors) => {
            let mut acc = Op::one();
            for f in factors {
                acc = acc.compose(&normalize(f)?);
            }
            acc
        }
        Expr::Quotient(num, den) => {
            let d = normalize(den)?;
            let scalar = d.as_scalar().ok_or_else(|| NormalizeError::NonScalarDivisor(d.to_string()))?;
            let inv = scalar.inv().ok_or(NormalizeError::DivisionByZero)?;
            normalize(num)?.compose(&Op::embed(inv))
        }
        Expr::Power(base, k) => {
            let b = normalize(base)?;
            (0..*k).fold(Op::one(), |acc, _| acc.compose(&b))
        }
        Expr::AtomD => Op::delta(),
        Expr::AtomT => Op::embed(RatFun::t()),
        Expr::AtomRational(q) => Op::embed(RatFun::from_rational(q.clone())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Normalize(#[from] NormalizeError),
    #[error("expected a rational function, found the operator {0}")]
    NotScalar(String),
    #[error("expected a rational constant, found {0}")]
    NotConstant(String),
}

pub fn parse_op(text: &str) -> Result<Op, InputError> {
    Ok(normalize(&parse_operator(text)?)?)
}

/// A degree-zero expression, read as an element of `ℚ(t)`.
pub fn parse_ratfun(text: &str) -> Result<RatFun, InputError> {
    let op = parse_op(text)?;
    op.as_scalar().ok_or_else(|| InputError::NotScalar(op.to_string()))
}

pub fn parse_rational(text: &str) -> Result<Rational, InputError> {
    let f = parse_ratfun(text)?;
    f.as_constant().ok_or_else(|| InputError::NotConstant(f.to_string()))
}

/// Splits a comma-separated list at commas outside parentheses. Blank
/// entries are rejected by the element parser.
pub fn split_list(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Unicode rendering of printed operators: `δ`, superscript exponents, `·`.
pub fn unicode(ascii: &str) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::with_capacity(ascii.len());
    let mut chars = ascii.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            'D' => out.push('δ'),
            '*' => out.push('·'),
            '^' => {
                while let Some(d) = chars.peek().and_then(|d| d.to_digit(10)) {
                    out.push(SUP[d as usize]);
                    chars.next();
                }
            }
            other => out.push(other),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str) -> Op {
        parse_op(s).unwrap()
    }

    #[test]
    fn commutation() {
        assert_eq!(op("D*t"), Op::new(vec![RatFun::one(), RatFun::t()]));
        assert_eq!(op("t*D"), Op::monomial(RatFun::t(), 1));
        assert_eq!(op("D*t").to_string(), "t*D + 1");
    }

    #[test]
    fn juxtaposition_is_rejected() {
        let err = parse_operator("D t").unwrap_err();
        assert_eq!((err.line, err.column, err.found.as_str()), (1, 3, "'t'"));
        assert!(err.expected.contains(&"'*'"));
    }

    #[test]
    fn positions_across_lines() {
        let err = parse_operator("t +\n  * D").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = parse_operator("(t + 1").unwrap_err();
        assert_eq!((err.line, err.column, err.found.as_str()), (1, 7, "end of input"));
        assert_eq!(parse_operator("t # 1").unwrap_err().found, "'#'");
    }

    #[test]
    fn rationals_and_quotients() {
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::new((-3).into(), 4.into()));
        let f = parse_ratfun("(t^2+1)/(t-1)").unwrap();
        assert_eq!(f.to_string(), "(t^2+1)/(t-1)");
        assert_eq!(parse_op("D/0"), Err(InputError::Normalize(NormalizeError::DivisionByZero)));
        assert!(matches!(parse_op("t/D"), Err(InputError::Normalize(NormalizeError::NonScalarDivisor(_)))));
        // Division is on the right: D·(1/t) = (1/t)·D − 1/t².
        assert_eq!(op("D/t"), op("1/t*D - 1/t^2"));
    }

    #[test]
    fn literals_are_atoms() {
        assert_eq!(parse_operator("3/4").unwrap(), Expr::AtomRational(Rational::new(3.into(), 4.into())));
        assert_eq!(op("2/3^2"), op("4/9"));
        assert_eq!(op("t/2/3"), op("1/6*t"));
        assert_eq!(op("1/2/3"), op("1/6"));
        assert_eq!(op("3/(t-1)"), Op::embed(&RatFun::from_int(3) * &RatFun::from_ints(&[-1, 1]).inv().unwrap()));
    }

    #[test]
    fn powers_bind_tightest() {
        assert_eq!(op("2*D^2"), Op::monomial(RatFun::from_int(2), 2));
        assert_eq!(op("(D+t)^2"), op("(D+t)*(D+t)"));
        assert!(parse_operator("D^-1").is_err());
        assert!(parse_operator("D^2^2").is_err());
    }

    #[test]
    fn examples_from_the_docs() {
        assert_eq!(op("(t^2+1)*D^2 + t*D + 3").theta(), fadel_core::Theta::Finite(2));
        assert_eq!(op("D^2*t"), op("t*D^2 + 2*D"));
    }

    #[test]
    fn lists_split_at_top_level() {
        assert_eq!(split_list("1, (t,1), D"), vec!["1", " (t,1)", " D"]);
    }

    #[test]
    fn unicode_rendering() {
        assert_eq!(unicode("(t^2+1)*D^12 - 3"), "(t²+1)·δ¹² - 3");
    }
}
