//! Free bounded distributive lattice on named generators, in minimal
//! join-of-meets form.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the free bounded distributive lattice: a join of meets of
/// generators. The empty join is bottom; the join containing only the empty
/// meet is top.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatTerm(BTreeSet<BTreeSet<String>>);

impl LatTerm {
    pub fn bottom() -> Self {
        LatTerm(BTreeSet::new())
    }

    pub fn top() -> Self {
        LatTerm(BTreeSet::from([BTreeSet::new()]))
    }

    pub fn generator(name: &str) -> Self {
        LatTerm(BTreeSet::from([BTreeSet::from([name.to_string()])]))
    }

    /// Builds a term from meet-sets, discarding absorbed ones.
    pub fn from_meets<I, J, S>(meets: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let sets = meets.into_iter().map(|m| m.into_iter().map(Into::into).collect()).collect();
        LatTerm(minimize(sets))
    }

    pub fn meets(&self) -> &BTreeSet<BTreeSet<String>> {
        &self.0
    }

    pub fn is_bottom(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.0.len() == 1 && self.0.iter().next().unwrap().is_empty()
    }

    pub fn join(&self, o: &Self) -> Self {
        LatTerm(minimize(self.0.union(&o.0).cloned().collect()))
    }

    pub fn meet(&self, o: &Self) -> Self {
        let mut out = BTreeSet::new();
        for a in &self.0 {
            for b in &o.0 {
                out.insert(a.union(b).cloned().collect());
            }
        }
        LatTerm(minimize(out))
    }

    /// Generators mentioned by the term.
    pub fn generators(&self) -> BTreeSet<String> {
        self.0.iter().flatten().cloned().collect()
    }

    /// Value under a 2-valued assignment (`true` generators listed).
    pub fn eval(&self, truth: &BTreeSet<String>) -> bool {
        self.0.iter().any(|m| m.is_subset(truth))
    }
}

fn minimize(sets: BTreeSet<BTreeSet<String>>) -> BTreeSet<BTreeSet<String>> {
    sets.iter().filter(|s| !sets.iter().any(|t| t != *s && t.is_subset(s))).cloned().collect()
}

/// Order of the free lattice: every meet of `a` lies above some meet of `b`.
pub fn leq_free(a: &LatTerm, b: &LatTerm) -> bool {
    a.0.iter().all(|m| b.0.iter().any(|n| n.is_subset(m)))
}

impl fmt::Display for LatTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bottom() {
            return write!(f, "0");
        }
        if self.is_top() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|m| m.iter().cloned().collect::<Vec<_>>().join("∧")).collect();
        write!(f, "{}", parts.join(" ∨ "))
    }
}

impl fmt::Debug for LatTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatTerm({self})")
    }
}

/// Raw lattice expression, prior to normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatExpr {
    Bottom,
    Top,
    Gen(String),
    Join(Box<LatExpr>, Box<LatExpr>),
    Meet(Box<LatExpr>, Box<LatExpr>),
}

impl LatExpr {
    pub fn gen(name: &str) -> Self {
        LatExpr::Gen(name.to_string())
    }

    pub fn join(a: LatExpr, b: LatExpr) -> Self {
        LatExpr::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: LatExpr, b: LatExpr) -> Self {
        LatExpr::Meet(Box::new(a), Box::new(b))
    }

    /// Parses `x & (y | z)`, also accepting `∧`, `∨`, `0`, `1`.
    pub fn parse(src: &str) -> Result<Self> {
        let toks = tokenize(src)?;
        let mut p = ExprParser { toks, pos: 0 };
        let e = p.join()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse { offset: p.toks[p.pos].0, message: "trailing input".into() });
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Join,
    Meet,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        match c {
            c if c.is_whitespace() => {}
            '|' | '∨' => out.push((off, Tok::Join)),
            '&' | '∧' => out.push((off, Tok::Meet)),
            '(' => out.push((off, Tok::Open)),
            ')' => out.push((off, Tok::Close)),
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    s.push(chars[i].1);
                    i += 1;
                }
                out.push((off, Tok::Name(s)));
                continue;
            }
            c => return Err(Error::Parse { offset: off, message: format!("unexpected character `{c}`") }),
        }
        i += 1;
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(usize::MAX)
    }

    fn join(&mut self) -> Result<LatExpr> {
        let mut lhs = self.meet()?;
        while self.peek() == Some(&Tok::Join) {
            self.pos += 1;
            lhs = LatExpr::join(lhs, self.meet()?);
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<LatExpr> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Tok::Meet) {
            self.pos += 1;
            lhs = LatExpr::meet(lhs, self.atom()?);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<LatExpr> {
        let off = self.offset();
        match self.peek().cloned() {
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.join()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(Error::Parse { offset: self.offset(), message: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(match n.as_str() {
                    "0" => LatExpr::Bottom,
                    "1" => LatExpr::Top,
                    _ => LatExpr::Gen(n),
                })
            }
            _ => Err(Error::Parse { offset: off, message: "expected a generator, `0`, `1` or `(`".into() }),
        }
    }
}

/// Canonical form of an expression over the declared generators.
pub fn normal_form(expr: &LatExpr, gens: &[String]) -> Result<LatTerm> {
    Ok(match expr {
        LatExpr::Bottom => LatTerm::bottom(),
        LatExpr::Top => LatTerm::top(),
        LatExpr::Gen(g) => {
            if !gens.contains(g) {
                return Err(Error::UnknownGenerator(g.clone()));
            }
            LatTerm::generator(g)
        }
        LatExpr::Join(a, b) => normal_form(a, gens)?.join(&normal_form(b, gens)?),
        LatExpr::Meet(a, b) => normal_form(a, gens)?.meet(&normal_form(b, gens)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn nf(s: &str) -> LatTerm {
        normal_form(&LatExpr::parse(s).unwrap(), &g(&["x", "y", "z"])).unwrap()
    }

    #[test]
    fn absorption_and_idempotence() {
        assert_eq!(nf("x & (x | y)"), nf("x"));
        assert_eq!(nf("x | x"), nf("x"));
        assert_eq!(nf("(x&y) | (x&y&z)"), nf("x ∧ y"));
        assert_eq!(nf("x & 0"), LatTerm::bottom());
        assert_eq!(nf("x | 1"), LatTerm::top());
    }

    #[test]
    fn free_order() {
        assert!(leq_free(&nf("x&y"), &nf("x")));
        assert!(!leq_free(&nf("x"), &nf("x&y")));
        assert!(leq_free(&nf("x&z"), &nf("(x&y)|(x&z)")));
        assert!(leq_free(&LatTerm::bottom(), &nf("x")));
        assert!(leq_free(&nf("x"), &LatTerm::top()));
    }

    #[test]
    fn unknown_generator() {
        let e = LatExpr::parse("w | x").unwrap();
        assert_eq!(normal_form(&e, &g(&["x"])), Err(Error::UnknownGenerator("w".into())));
        assert!(LatExpr::parse("x |").is_err());
    }
}
