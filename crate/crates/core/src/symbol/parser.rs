//! Recursive-descent parser for multiplier symbols.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-' | '+') factor | power
//! power  := atom ('^' factor)?
//! atom   := number | 'k' | 'i' | 'pi' | param | func '(' expr ')' | '(' expr ')'
//! func   := 'abs' | 'sgn'
//! ```
//!
//! Exponents must be real constants. A non-integer exponent is only accepted
//! on a base that is statically nonnegative (e.g. `abs(k)`).

use std::collections::HashMap;

use num_complex::Complex64;

use super::expr::{Node, SymbolExpr};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let done = t.0 == Tok::End;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return Ok((Tok::Ident(name.to_string()), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Op(c as char), start));
        }
        Err(Error::Syntax {
            offset: start,
            message: format!("unexpected character `{}`", c as char),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let s = self.src;
        while self.pos < s.len() && (s[self.pos].is_ascii_digit() || s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < s.len() && (s[p] == b'+' || s[p] == b'-') {
                p += 1;
            }
            if p < s.len() && s[p].is_ascii_digit() {
                while p < s.len() && s[p].is_ascii_digit() {
                    p += 1;
                }
                self.pos = p;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map(|v| (Tok::Num(v), start))
            .map_err(|_| Error::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })
    }
}

struct Parser<'p> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    params: &'p HashMap<String, f64>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Tok::Op(o) if *o == c => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("expected `{c}`"))),
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        let found = match self.peek() {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        };
        Error::Syntax {
            offset: self.offset(),
            message: format!("{what}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Node::add(lhs, self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Node::mul(lhs, self.factor()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Node::neg(self.factor()?))
            }
            Tok::Op('+') => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base_offset = self.offset();
        let base = self.atom()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let exp_offset = self.offset();
            let exponent = self.factor()?;
            if exponent.depends_on_k() {
                return Err(Error::Syntax {
                    offset: exp_offset,
                    message: "exponent must not depend on k".into(),
                });
            }
            let e = exponent.eval_raw(0.0);
            if e.im != 0.0 || !e.re.is_finite() {
                return Err(Error::Syntax {
                    offset: exp_offset,
                    message: "exponent must be a finite real constant".into(),
                });
            }
            let e = e.re;
            if e.fract() != 0.0 && !base.is_nonnegative() {
                return Err(Error::SignChangingBase {
                    offset: base_offset,
                });
            }
            return Ok(Node::pow(base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Node::real(v))
            }
            Tok::Op('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "k" => Ok(Node::K),
                    "i" => Ok(Node::Const(Complex64::i())),
                    "pi" => Ok(Node::real(std::f64::consts::PI)),
                    "abs" | "sgn" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        Ok(if name == "abs" {
                            Node::abs(arg)
                        } else {
                            Node::sgn(arg)
                        })
                    }
                    _ => match self.params.get(&name) {
                        Some(&v) => Ok(Node::real(v)),
                        None => Err(Error::UnknownIdentifier { name, offset }),
                    },
                }
            }
            _ => Err(self.unexpected("expected an operand")),
        }
    }
}

/// Parses a symbol without named parameters.
pub fn parse_symbol(text: &str) -> Result<SymbolExpr> {
    parse_symbol_with(text, &HashMap::new())
}

/// Parses a symbol, resolving free identifiers from `params`.
pub fn parse_symbol_with(text: &str, params: &HashMap<String, f64>) -> Result<SymbolExpr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    if let Some(pos) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(Error::Syntax {
            offset: pos,
            message: "non-ASCII input".into(),
        });
    }
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        params,
    };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected an operator"));
    }
    SymbolExpr::new(text, root)
}
