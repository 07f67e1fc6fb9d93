//! Text syntax for polynomials and rational expressions, e.g. `y^2 - x^3`,
//! `1/2*x*y + 3`, `(t - 1)^2`, or (for fractions) `y/x`.

use num::{BigInt, One, Zero};

use super::mpoly::{MPoly, Q};
use super::order::MonomialOrder;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Ast {
    Num(BigInt),
    Var(usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: msg.into() })
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

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Ast::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a nonnegative integer exponent");
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let k: u32 = match s.parse() {
                Ok(k) => k,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(Ast::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Ast::Num(s.parse().unwrap()))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(Ast::Var(i)),
                    None => {
                        self.pos = start;
                        Err(Error::UnknownGenerator(name.to_string()))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_ast(src: &str, vars: &[String]) -> Result<Ast> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, vars };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(ast)
}

fn eval_poly(ast: &Ast, n: usize, ord: MonomialOrder) -> std::result::Result<MPoly, String> {
    Ok(match ast {
        Ast::Num(k) => MPoly::constant(n, ord, Q::from_integer(k.clone())),
        Ast::Var(i) => MPoly::var(n, ord, *i),
        Ast::Neg(a) => eval_poly(a, n, ord)?.neg(),
        Ast::Add(a, b) => eval_poly(a, n, ord)?.add(&eval_poly(b, n, ord)?),
        Ast::Sub(a, b) => eval_poly(a, n, ord)?.sub(&eval_poly(b, n, ord)?),
        Ast::Mul(a, b) => eval_poly(a, n, ord)?.mul(&eval_poly(b, n, ord)?),
        Ast::Pow(a, k) => eval_poly(a, n, ord)?.pow(*k),
        Ast::Div(a, b) => {
            let d = eval_poly(b, n, ord)?;
            match d.constant_value() {
                Some(c) if !c.is_zero() => eval_poly(a, n, ord)?.scale(&c.recip()),
                Some(_) => return Err("division by zero".into()),
                None => return Err("division by a non-constant polynomial".into()),
            }
        }
    })
}

fn eval_frac(ast: &Ast, n: usize, ord: MonomialOrder) -> std::result::Result<(MPoly, MPoly), String> {
    let one = || MPoly::one(n, ord);
    Ok(match ast {
        Ast::Num(k) => (MPoly::constant(n, ord, Q::from_integer(k.clone())), one()),
        Ast::Var(i) => (MPoly::var(n, ord, *i), one()),
        Ast::Neg(a) => {
            let (p, q) = eval_frac(a, n, ord)?;
            (p.neg(), q)
        }
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let (p1, q1) = eval_frac(a, n, ord)?;
            let (p2, q2) = eval_frac(b, n, ord)?;
            let (p2, q2) = if matches!(ast, Ast::Sub(..)) { (p2.neg(), q2) } else { (p2, q2) };
            if q1 == q2 {
                (p1.add(&p2), q1)
            } else {
                (p1.mul(&q2).add(&p2.mul(&q1)), q1.mul(&q2))
            }
        }
        Ast::Mul(a, b) => {
            let (p1, q1) = eval_frac(a, n, ord)?;
            let (p2, q2) = eval_frac(b, n, ord)?;
            (p1.mul(&p2), q1.mul(&q2))
        }
        Ast::Div(a, b) => {
            let (p1, q1) = eval_frac(a, n, ord)?;
            let (p2, q2) = eval_frac(b, n, ord)?;
            if p2.is_zero() {
                return Err("division by zero".into());
            }
            (p1.mul(&q2), q1.mul(&p2))
        }
        Ast::Pow(a, k) => {
            let (p, q) = eval_frac(a, n, ord)?;
            (p.pow(*k), q.pow(*k))
        }
    })
}

/// Parses a polynomial over the given variables. Division is only allowed by
/// nonzero rational constants.
pub fn parse_poly(src: &str, vars: &[String], order: MonomialOrder) -> Result<MPoly> {
    let ast = parse_ast(src, vars)?;
    eval_poly(&ast, vars.len(), order).map_err(|m| Error::Parse { offset: 0, message: m })
}

/// Parses a rational expression into an unreduced numerator/denominator pair.
pub fn parse_fraction(src: &str, vars: &[String], order: MonomialOrder) -> Result<(MPoly, MPoly)> {
    let ast = parse_ast(src, vars)?;
    let (mut n, mut d) = eval_frac(&ast, vars.len(), order).map_err(|m| Error::Parse { offset: 0, message: m })?;
    // normalize a constant denominator away
    if let Some(c) = d.constant_value() {
        if !c.is_one() {
            n = n.scale(&c.recip());
            d = MPoly::one(vars.len(), order);
        }
    }
    Ok((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_and_prints() {
        let v = vars(&["x", "y"]);
        let p = parse_poly("y^2 - x^3", &v, MonomialOrder::Grevlex).unwrap();
        assert_eq!(p.format_with(&v), "-x^3 + y^2");
        let p = parse_poly("1/2*x*y + (x - 1)^2", &v, MonomialOrder::Grevlex).unwrap();
        assert_eq!(p.format_with(&v), "x^2 + 1/2*x*y - 2*x + 1");
    }

    #[test]
    fn rejects_bad_input() {
        let v = vars(&["x"]);
        assert!(matches!(parse_poly("z + 1", &v, MonomialOrder::Grevlex), Err(Error::UnknownGenerator(_))));
        assert!(matches!(parse_poly("x +", &v, MonomialOrder::Grevlex), Err(Error::Parse { .. })));
        assert!(parse_poly("1/x", &v, MonomialOrder::Grevlex).is_err());
        assert!(parse_poly("x^", &v, MonomialOrder::Grevlex).is_err());
    }

    #[test]
    fn fractions() {
        let v = vars(&["x", "y"]);
        let (n, d) = parse_fraction("y/x", &v, MonomialOrder::Grevlex).unwrap();
        assert_eq!(n.format_with(&v), "y");
        assert_eq!(d.format_with(&v), "x");
        let (n, d) = parse_fraction("x/2", &v, MonomialOrder::Grevlex).unwrap();
        assert_eq!(n.format_with(&v), "1/2*x");
        assert!(d.is_one());
    }
}
