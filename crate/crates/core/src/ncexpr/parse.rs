//! Recursive-descent parser for noncommutative rational expressions.
//!
//! Grammar:
//!   expr   := term (('+'|'-') term)*
//!   term   := factor ('*' factor)*
//!   factor := atom ['^' '-'? integer]
//!   atom   := rational-literal | 'x' index | '(' expr ')' | '-' atom
//!
//! Multiplication is always explicit; `f^-1` parses as an inverse node and
//! `f^k` (k >= 1) as a repeated product. Other exponents are rejected.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use super::{Node, RatExpr};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown variable x{index} at position {pos} (expression has {nvars} variables)")]
    UnknownVariable {
        pos: usize,
        index: usize,
        nvars: usize,
    },
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn next_token(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((start, Tok::End));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                return Ok((start, Tok::Int(text.parse().unwrap())));
            }
            b'x' => {
                let mut end = self.pos + 1;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                if end == self.pos + 1 {
                    return Err(ParseError::SyntaxError {
                        pos: start,
                        msg: "variable needs an index, e.g. x1".into(),
                    });
                }
                let text = std::str::from_utf8(&self.src[self.pos + 1..end]).unwrap();
                self.pos = end;
                let idx: usize = text.parse().map_err(|_| ParseError::SyntaxError {
                    pos: start,
                    msg: "variable index out of range".into(),
                })?;
                return Ok((start, Tok::Var(idx)));
            }
            other => {
                return Err(ParseError::SyntaxError {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok((start, tok))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::SyntaxError {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(Node::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        if terms.len() == 1 {
            Ok(terms.pop().unwrap())
        } else {
            Ok(Node::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            acc = Node::Product(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let exp = match self.bump() {
            Tok::Int(v) => v,
            _ => return Err(self.err("expected an integer exponent")),
        };
        if negative {
            if exp != BigInt::from(1) {
                return Err(self.err("only ^-1 is supported for negative exponents"));
            }
            return Ok(Node::Inverse(Box::new(base)));
        }
        if exp.is_zero() {
            return Err(self.err("exponent 0 is not supported"));
        }
        let k = u32::try_from(&exp).map_err(|_| self.err("exponent too large"))?;
        let mut acc = base.clone();
        for _ in 1..k {
            acc = Node::Product(Box::new(acc), Box::new(base.clone()));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(num) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Int(den) if !den.is_zero() => Ok(Node::Const(BigRational::new(num, den))),
                        _ => Err(self.err("expected a nonzero integer denominator")),
                    }
                } else {
                    Ok(Node::Const(BigRational::from_integer(num)))
                }
            }
            Tok::Var(idx) => {
                if idx == 0 || idx > self.nvars {
                    Err(ParseError::UnknownVariable {
                        pos,
                        index: idx,
                        nvars: self.nvars,
                    })
                } else {
                    Ok(Node::Var(idx - 1))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    Err(ParseError::SyntaxError {
                        pos,
                        msg: "unclosed parenthesis".into(),
                    })
                } else {
                    Ok(inner)
                }
            }
            // exponents bind tighter than unary minus
            Tok::Minus => Ok(Node::Neg(Box::new(self.factor()?))),
            _ => Err(ParseError::SyntaxError {
                pos,
                msg: "expected a literal, variable, `(` or `-`".into(),
            }),
        }
    }
}

/// Parses `text` as an expression in variables x1..xm.
pub fn parse(text: &str, m: usize) -> Result<RatExpr, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let end = t.1 == Tok::End;
        toks.push(t);
        if end {
            break;
        }
    }
    let mut p = Parser {
        toks,
        at: 0,
        nvars: m,
    };
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.err("trailing input"));
    }
    Ok(RatExpr::new(m, node))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polynomial_example() {
        let e = parse("x1^2 + x1*x2 - x2*x1 - x1 + 2", 2).unwrap();
        match &e.node {
            Node::Sum(terms) => assert_eq!(terms.len(), 5),
            other => panic!("expected a sum, got {other:?}"),
        }
        assert!(!e.contains_inverse());
    }

    #[test]
    fn parses_rational_example() {
        let e = parse("(x1*x2^-1*x1 - x2)^-1 - x2^-1", 2).unwrap();
        assert!(e.contains_inverse());
    }

    #[test]
    fn trailing_star_is_rejected_with_position() {
        match parse("x1*", 1) {
            Err(ParseError::SyntaxError { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_variable_is_reported() {
        match parse("x3 + 1", 2) {
            Err(ParseError::UnknownVariable { index, nvars, .. }) => {
                assert_eq!(index, 3);
                assert_eq!(nvars, 2);
            }
            other => panic!("expected unknown-variable error, got {other:?}"),
        }
    }

    #[test]
    fn exponent_rules() {
        // x1^3 desugars to products
        let e = parse("x1^3", 1).unwrap();
        match &e.node {
            Node::Product(_, _) => {}
            other => panic!("expected product, got {other:?}"),
        }
        assert!(parse("x1^0", 1).is_err());
        assert!(parse("x1^-2", 1).is_err());
        // precedence: inversion binds tighter than unary minus
        let e = parse("-x1^-1", 1).unwrap();
        match &e.node {
            Node::Neg(inner) => assert!(matches!(**inner, Node::Inverse(_))),
            other => panic!("expected neg(inverse), got {other:?}"),
        }
    }

    #[test]
    fn rational_literals() {
        let e = parse("1/2 * x1", 1).unwrap();
        match &e.node {
            Node::Product(a, _) => match &**a {
                Node::Const(c) => {
                    assert_eq!(*c, BigRational::new(BigInt::from(1), BigInt::from(2)))
                }
                other => panic!("expected constant, got {other:?}"),
            },
            other => panic!("expected product, got {other:?}"),
        }
        assert!(parse("1/0", 1).is_err());
    }
}
