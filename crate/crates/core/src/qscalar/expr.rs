//! A small infix expression language shared by every text format.
//!
//! Grammar (juxtaposition multiplies, `^` takes a signed integer):
//!
//! ```text
//! expr  := ['+'|'-'] term (('+'|'-') term)*
//! term  := unary (('*'|'/') unary | power)*
//! unary := '-' unary | power
//! power := atom ['^' ['-'|'+'] INT]
//! atom  := INT | IDENT ['(' expr ')'] | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::QRational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Call(String, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|(_, c)| c).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let e = match self.peek() {
            Some(Tok::Int(n)) => {
                let n = i64::try_from(n.clone()).or_else(|_| self.fail("exponent out of range"))?;
                self.at += 1;
                if neg {
                    -n
                } else {
                    n
                }
            }
            _ => return self.fail("expected an integer exponent"),
        };
        if paren && !self.eat(')') {
            return self.fail("expected ')'");
        }
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return self.fail("expected ')'");
                    }
                    Ok(Expr::Call(name, Box::new(arg)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.fail("expected ')'");
                }
                Ok(inner)
            }
            _ => self.fail("expected a number, a name or '('"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, at: 0, end: text.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

/// Evaluates into `Q(q)` with the variable spelled `var`.
pub(crate) fn parse_scalar(text: &str, var: &str) -> Result<QRational> {
    let e = parse(text)?;
    eval_scalar(&e, var)
}

pub(crate) fn eval_scalar(e: &Expr, var: &str) -> Result<QRational> {
    Ok(match e {
        Expr::Int(n) => QRational::from(n.clone()),
        Expr::Var(v) if v == var => QRational::q_pow(1),
        Expr::Var(v) => return Err(Error::Parse { pos: 0, msg: format!("unknown variable {v}") }),
        Expr::Call(f, _) => return Err(Error::Parse { pos: 0, msg: format!("unknown function {f}") }),
        Expr::Neg(a) => -eval_scalar(a, var)?,
        Expr::Add(a, b) => eval_scalar(a, var)? + eval_scalar(b, var)?,
        Expr::Sub(a, b) => eval_scalar(a, var)? - eval_scalar(b, var)?,
        Expr::Mul(a, b) => eval_scalar(a, var)? * eval_scalar(b, var)?,
        Expr::Div(a, b) => {
            let d = eval_scalar(b, var)?;
            eval_scalar(a, var)? * d.inv()?
        }
        Expr::Pow(a, k) => eval_scalar(a, var)?.pow(*k)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("-q^2 + 3/2*q x1 x2^-2").unwrap();
        match e {
            Expr::Add(lhs, _) => assert!(matches!(*lhs, Expr::Neg(_))),
            _ => panic!("unexpected shape {e:?}"),
        }
        assert!(parse("q^").is_err());
        assert!(parse("(q").is_err());
        assert!(parse("q $").is_err());
    }

    #[test]
    fn scalars() {
        let a = parse_scalar("(q^2-1)/(2*q)", "q").unwrap();
        let b = parse_scalar("1/2*q - 1/2*q^-1", "q").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_scalar("2q", "q").unwrap(), parse_scalar("2*q", "q").unwrap());
        assert!(parse_scalar("1/(q-q)", "q").is_err());
    }
}
