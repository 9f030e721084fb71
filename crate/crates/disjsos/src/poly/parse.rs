//! Text parser for human-readable polynomials like
//! `x1^4*x2^2 - 3*x1^2*x2^2*x3^2 + x3^6`.

use super::{MultiIndex, PolyError, Polynomial};
use crate::scalar::Coeff;

/// Parses an expression over variables `x1..xn`. When `nvars` is `None`, the
/// dimension is the largest variable index that appears.
pub fn parse_polynomial<T: Coeff>(input: &str, nvars: Option<usize>) -> Result<Polynomial<T>, PolyError> {
    let mut p = Parser { input: input.as_bytes(), pos: 0 };
    let expr = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("unexpected trailing input"));
    }
    let needed = expr.max_var();
    let n = match nvars {
        Some(n) => {
            if needed > n {
                return Err(PolyError::Parse {
                    line: 1,
                    col: 1,
                    msg: format!("variable x{needed} exceeds declared dimension {n}"),
                });
            }
            n
        }
        None => needed,
    };
    Ok(expr.into_polynomial(n))
}

// Small AST evaluated directly into sparse terms.
enum Node<T: Coeff> {
    Const(T),
    Var(usize), // 1-based
    Add(Box<Node<T>>, Box<Node<T>>),
    Sub(Box<Node<T>>, Box<Node<T>>),
    Mul(Box<Node<T>>, Box<Node<T>>),
    Neg(Box<Node<T>>),
    Pow(Box<Node<T>>, u32),
}

impl<T: Coeff> Node<T> {
    fn max_var(&self) -> usize {
        match self {
            Node::Const(_) => 0,
            Node::Var(i) => *i,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => a.max_var().max(b.max_var()),
            Node::Neg(a) => a.max_var(),
            Node::Pow(a, _) => a.max_var(),
        }
    }

    fn into_polynomial(self, n: usize) -> Polynomial<T> {
        match self {
            Node::Const(c) => Polynomial::constant(n, c),
            Node::Var(i) => Polynomial::monomial(MultiIndex::unit(n, i - 1), T::one()),
            Node::Add(a, b) => a.into_polynomial(n).add(&b.into_polynomial(n)),
            Node::Sub(a, b) => a.into_polynomial(n).sub(&b.into_polynomial(n)),
            Node::Mul(a, b) => a.into_polynomial(n).mul(&b.into_polynomial(n)),
            Node::Neg(a) => a.into_polynomial(n).neg(),
            Node::Pow(a, e) => a.into_polynomial(n).pow(e),
        }
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> PolyError {
        let consumed = &self.input[..self.pos];
        let line = 1 + consumed.iter().filter(|&&b| b == b'\n').count();
        let col = self.pos - consumed.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1) + 1;
        PolyError::Parse { line, col, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn parse_expr<T: Coeff>(&mut self) -> Result<Node<T>, PolyError> {
        let mut lhs = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Node::Neg(Box::new(self.parse_term()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.parse_term()?
            }
            _ => self.parse_term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.parse_term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.parse_term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term<T: Coeff>(&mut self) -> Result<Node<T>, PolyError> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.parse_factor()?));
                }
                // implicit multiplication: `3x1` or `x1(x2+1)`
                Some(b'x') | Some(b'(') => {
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.parse_factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor<T: Coeff>(&mut self) -> Result<Node<T>, PolyError> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_uint()?;
            return Ok(Node::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn parse_atom<T: Coeff>(&mut self) -> Result<Node<T>, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.parse_uint()? as usize;
                if i == 0 {
                    return Err(self.err("variables are numbered from x1"));
                }
                Ok(Node::Var(i))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.input.len() {
                    let b = self.input[self.pos];
                    if b.is_ascii_digit() || b == b'.' || b == b'/' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                let c = T::parse_str(text).map_err(|m| self.err(&m))?;
                Ok(Node::Const(c))
            }
            Some(_) => Err(self.err("expected a number, variable, or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_uint(&mut self) -> Result<u32, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }
}
