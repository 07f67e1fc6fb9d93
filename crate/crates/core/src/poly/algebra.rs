use std::fmt;

use num::One;
use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};

use super::elim;
use super::groebner::{groebner, is_unit_ideal, reduce};
use super::mpoly::{MPoly, Q};
use super::order::MonomialOrder;
use super::parse::{parse_fraction, parse_poly};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

const ORD: MonomialOrder = MonomialOrder::Grevlex;

/// A finitely presented commutative ℚ-algebra `ℚ[vars]/(relations)`.
///
/// The Gröbner basis of the relation ideal is computed once on first use.
#[derive(Clone)]
pub struct FPAlgebra {
    vars: Vec<String>,
    relations: Vec<MPoly>,
    basis: OnceCell<Vec<MPoly>>,
}

impl PartialEq for FPAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.vars == o.vars && self.relations == o.relations
    }
}

impl Eq for FPAlgebra {}

impl fmt::Debug for FPAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FPAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            f.write_str("Q")?;
        } else {
            write!(f, "Q[{}]", self.vars.join(", "))?;
        }
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.format(r)).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

/// A finitely generated ideal of an [`FPAlgebra`], stored as generators in
/// normal form. The empty list is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealFG {
    gens: Vec<MPoly>,
}

impl IdealFG {
    pub fn gens(&self) -> &[MPoly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }
}

/// JSON form of an algebra: `{"vars": [...], "relations": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

/// JSON form of an ideal: `{"gens": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDoc {
    pub gens: Vec<String>,
}

impl FPAlgebra {
    pub fn new(vars: Vec<String>, relations: Vec<MPoly>) -> Self {
        let n = vars.len();
        let relations = relations
            .into_iter()
            .map(|r| {
                assert_eq!(r.nvars(), n, "relation over the wrong number of variables");
                r.with_order(ORD)
            })
            .filter(|r| !r.is_zero())
            .collect();
        FPAlgebra { vars, relations, basis: OnceCell::new() }
    }

    pub fn polynomial_ring(vars: &[&str]) -> Self {
        FPAlgebra::new(vars.iter().map(|s| s.to_string()).collect(), vec![])
    }

    pub fn parse(vars: &[&str], relations: &[&str]) -> Result<Self> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations.iter().map(|r| parse_poly(r, &v, ORD)).collect::<Result<Vec<_>>>()?;
        Ok(FPAlgebra::new(v, rels))
    }

    pub fn from_doc(doc: &AlgebraDoc) -> Result<Self> {
        let vars: Vec<&str> = doc.vars.iter().map(String::as_str).collect();
        let rels: Vec<&str> = doc.relations.iter().map(String::as_str).collect();
        let mut seen = std::collections::HashSet::new();
        for v in &doc.vars {
            if !seen.insert(v) {
                return Err(Error::VariableMismatch(format!("duplicate variable `{v}`")));
            }
        }
        FPAlgebra::parse(&vars, &rels)
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        AlgebraDoc { vars: self.vars.clone(), relations: self.relations.iter().map(|r| self.format(r)).collect() }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn relations(&self) -> &[MPoly] {
        &self.relations
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> MPoly {
        MPoly::var(self.nvars(), ORD, i)
    }

    pub fn var_named(&self, name: &str) -> Result<MPoly> {
        self.var_index(name).map(|i| self.var(i)).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn zero(&self) -> MPoly {
        MPoly::zero(self.nvars(), ORD)
    }

    pub fn one(&self) -> MPoly {
        MPoly::one(self.nvars(), ORD)
    }

    pub fn constant(&self, c: Q) -> MPoly {
        MPoly::constant(self.nvars(), ORD, c)
    }

    pub fn order(&self) -> MonomialOrder {
        ORD
    }

    pub fn poly(&self, src: &str) -> Result<MPoly> {
        parse_poly(src, &self.vars, ORD)
    }

    pub fn fraction_parts(&self, src: &str) -> Result<(MPoly, MPoly)> {
        parse_fraction(src, &self.vars, ORD)
    }

    pub fn format(&self, p: &MPoly) -> String {
        p.format_with(&self.vars)
    }

    /// Reduced Gröbner basis of the relation ideal.
    pub fn relation_basis(&self) -> &[MPoly] {
        self.basis.get_or_init(|| groebner(&self.relations))
    }

    /// Unique normal form of `f` modulo the relations.
    pub fn reduce(&self, f: &MPoly) -> MPoly {
        reduce(&f.with_order(ORD), self.relation_basis())
    }

    pub fn is_zero(&self, f: &MPoly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn equal(&self, f: &MPoly, g: &MPoly) -> bool {
        self.is_zero(&f.sub(g))
    }

    /// Whether this is the zero ring.
    pub fn is_trivial(&self) -> bool {
        is_unit_ideal(self.relation_basis())
    }

    pub fn ideal(&self, gens: Vec<MPoly>) -> IdealFG {
        let mut out: Vec<MPoly> = Vec::new();
        for g in gens {
            let r = self.reduce(&g);
            if !r.is_zero() && !out.contains(&r) {
                out.push(r);
            }
        }
        IdealFG { gens: out }
    }

    pub fn ideal_from_strs(&self, gens: &[&str]) -> Result<IdealFG> {
        let g = gens.iter().map(|s| self.poly(s)).collect::<Result<Vec<_>>>()?;
        Ok(self.ideal(g))
    }

    pub fn ideal_from_doc(&self, doc: &IdealDoc) -> Result<IdealFG> {
        let g: Vec<&str> = doc.gens.iter().map(String::as_str).collect();
        self.ideal_from_strs(&g)
    }

    pub fn unit_ideal(&self) -> IdealFG {
        self.ideal(vec![self.one()])
    }

    pub fn zero_ideal(&self) -> IdealFG {
        IdealFG { gens: vec![] }
    }

    pub fn principal(&self, f: &MPoly) -> IdealFG {
        self.ideal(vec![f.clone()])
    }

    /// Reduced Gröbner basis of `I + relations`.
    pub fn ideal_basis(&self, ideal: &IdealFG) -> Vec<MPoly> {
        let mut gens = self.relation_basis().to_vec();
        gens.extend(ideal.gens.iter().cloned());
        groebner(&gens)
    }

    pub fn member(&self, f: &MPoly, ideal: &IdealFG) -> bool {
        let f = self.reduce(f);
        if f.is_zero() {
            return true;
        }
        if ideal.gens.is_empty() {
            return false;
        }
        reduce(&f, &self.ideal_basis(ideal)).is_zero()
    }

    /// `f ∈ rad(I)`, decided by the Rabinowitsch trick: `1 ∈ I + (1 - w f)`
    /// in the algebra extended by a fresh variable `w`.
    pub fn radical_member(&self, f: &MPoly, ideal: &IdealFG) -> bool {
        let f = self.reduce(f);
        if f.is_zero() {
            return true;
        }
        if ideal.gens.iter().any(|g| g.is_constant()) {
            return true;
        }
        let n = self.nvars();
        let mut gens: Vec<MPoly> = self.relation_basis().iter().map(|r| r.extend_vars(1, ORD)).collect();
        gens.extend(ideal.gens.iter().map(|g| g.extend_vars(1, ORD)));
        let w = MPoly::var(n + 1, ORD, n);
        let one = MPoly::one(n + 1, ORD);
        gens.push(one.sub(&w.mul(&f.extend_vars(1, ORD))));
        is_unit_ideal(&groebner(&gens))
    }

    pub fn ideal_sum(&self, a: &IdealFG, b: &IdealFG) -> IdealFG {
        let mut g = a.gens.clone();
        g.extend(b.gens.iter().cloned());
        self.ideal(g)
    }

    pub fn ideal_prod(&self, a: &IdealFG, b: &IdealFG) -> IdealFG {
        let mut g = Vec::new();
        for x in &a.gens {
            for y in &b.gens {
                g.push(x.mul(y));
            }
        }
        self.ideal(g)
    }

    /// Whether `1 ∈ (f)`.
    pub fn is_unit(&self, f: &MPoly) -> bool {
        let f = self.reduce(f);
        if f.is_zero() {
            return self.is_trivial();
        }
        if f.is_constant() {
            return true;
        }
        is_unit_ideal(&self.ideal_basis(&self.principal(&f)))
    }

    /// Appends variables with extra relations (given over the extended
    /// variable list). Existing elements embed via [`FPAlgebra::embed`].
    pub fn extend(&self, names: &[String], extra_relations: Vec<MPoly>) -> FPAlgebra {
        let k = names.len();
        let mut vars = self.vars.clone();
        vars.extend(names.iter().cloned());
        let mut rels: Vec<MPoly> = self.relations.iter().map(|r| r.extend_vars(k, ORD)).collect();
        rels.extend(extra_relations);
        FPAlgebra::new(vars, rels)
    }

    /// Embeds an element of a prefix algebra (fewer variables) into this one.
    pub fn embed(&self, f: &MPoly) -> MPoly {
        assert!(f.nvars() <= self.nvars());
        f.extend_vars(self.nvars() - f.nvars(), ORD)
    }

    /// `A[s]/(s f - 1)` with `s` named `name`.
    pub fn localize(&self, f: &MPoly, name: &str) -> FPAlgebra {
        let n = self.nvars();
        let s = MPoly::var(n + 1, ORD, n);
        let rel = s.mul(&f.extend_vars(1, ORD)).sub(&MPoly::one(n + 1, ORD));
        self.extend(&[name.to_string()], vec![rel])
    }

    /// A fresh variable name not clashing with existing ones.
    pub fn fresh_name(&self, stem: &str) -> String {
        let mut i = 0;
        loop {
            let c = format!("{stem}{i}");
            if self.var_index(&c).is_none() {
                return c;
            }
            i += 1;
        }
    }

    /// Generator of `rad((f))` for a principal ideal, as `f / gcd(f, ∂f)`.
    pub fn squarefree_part(&self, f: &MPoly) -> Result<MPoly> {
        squarefree_part(f)
    }

    /// Exact quotient `a / b` as polynomials (ignores relations).
    pub fn poly_divide(&self, a: &MPoly, b: &MPoly) -> Option<MPoly> {
        poly_divide(a, b)
    }

    /// Best-effort zero-divisor test for a denominator: it must have a
    /// nonzero normal form, and no relation generator may factor as
    /// `d * c` with `c` nonzero in the algebra.
    pub fn is_probable_nonzerodivisor(&self, d: &MPoly) -> bool {
        if self.is_zero(d) {
            return false;
        }
        for r in &self.relations {
            if let Some(c) = poly_divide(r, d) {
                if !self.is_zero(&c) {
                    return false;
                }
            }
        }
        true
    }

    /// Writes `f` as a polynomial in `gens` if it lies in the subalgebra
    /// they generate. The result lives in `ℚ[z_1..z_k]`, `k = gens.len()`.
    pub fn express_in_subalgebra(&self, gens: &[MPoly], f: &MPoly) -> Option<MPoly> {
        elim::subalgebra_express(self, gens, f)
    }

    /// If `num/den` lies in (the image of) this algebra, returns it as an
    /// element. `den` must be a nonzero divisor.
    pub fn fraction_as_element(&self, num: &MPoly, den: &MPoly) -> Option<MPoly> {
        elim::fraction_as_element(self, num, den)
    }
}

/// Exact division of polynomials by the division algorithm; `None` if the
/// remainder is nonzero.
pub fn poly_divide(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    if b.is_zero() {
        return None;
    }
    let ord = a.order();
    let b = b.with_order(ord);
    let n = a.nvars();
    let blm = b.leading_monomial().unwrap().clone();
    let blc = b.leading_coeff().unwrap().clone();
    let mut p = a.clone();
    let mut quot = MPoly::zero(n, ord);
    while let Some(lm) = p.leading_monomial().cloned() {
        if !super::mpoly::monomial_divides(&blm, &lm) {
            return None;
        }
        let shift: Vec<u32> = lm.iter().zip(&blm).map(|(x, y)| x - y).collect();
        let c = p.leading_coeff().unwrap() / &blc;
        quot = quot.add(&MPoly::monomial(n, ord, shift.clone(), c.clone()));
        p = p.add_scaled(&b.mul_term(&shift, &Q::one()), &-c);
    }
    Some(quot)
}

/// Generator of `(f) ∩ (g)`, via elimination of an auxiliary variable.
pub fn poly_lcm(f: &MPoly, g: &MPoly) -> MPoly {
    let n = f.nvars();
    let t = MPoly::var(n + 1, ORD, n);
    let one = MPoly::one(n + 1, ORD);
    let a = t.mul(&f.extend_vars(1, ORD));
    let b = one.sub(&t).mul(&g.extend_vars(1, ORD));
    let elim = elim::eliminate_last(&[a, b], n);
    elim.into_iter().next().unwrap_or_else(|| MPoly::zero(n, ORD))
}

pub fn poly_gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.make_monic();
    }
    if g.is_zero() {
        return f.make_monic();
    }
    let f = f.with_order(ORD);
    let g = g.with_order(ORD);
    // single-variable fast path
    let sf = f.support_vars();
    let sg = g.support_vars();
    if sf.len() <= 1 && sg.len() <= 1 {
        let v = sf.first().or(sg.first()).copied().unwrap_or(0);
        if sf.iter().chain(&sg).all(|&x| x == v) {
            let uf = UniPoly::from_mpoly(&f, v).unwrap();
            let ug = UniPoly::from_mpoly(&g, v).unwrap();
            return uf.gcd(&ug).to_mpoly(f.nvars(), v, ORD);
        }
    }
    let l = poly_lcm(&f, &g);
    poly_divide(&f.mul(&g), &l).expect("lcm divides the product").make_monic()
}

/// `f / gcd(f, ∂f/∂x_1, ..., ∂f/∂x_n)`: the generator of the radical of
/// `(f)` over ℚ.
pub fn squarefree_part(f: &MPoly) -> Result<MPoly> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = f.with_order(ORD);
    if f.is_constant() {
        return Ok(MPoly::one(f.nvars(), ORD));
    }
    let mut g = f.clone();
    for v in f.support_vars() {
        g = poly_gcd(&g, &f.derivative(v));
        if g.is_constant() {
            break;
        }
    }
    Ok(poly_divide(&f, &g).expect("gcd divides f").make_monic())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> FPAlgebra {
        FPAlgebra::polynomial_ring(&["x", "y"])
    }

    #[test]
    fn membership_examples() {
        let a = qxy();
        let i = a.ideal_from_strs(&["x"]).unwrap();
        assert!(!a.member(&a.poly("y").unwrap(), &i));
        assert!(a.member(&a.poly("x^2 + x").unwrap(), &i));
        let j = a.ideal_from_strs(&["y^2 - x^3", "x^3"]).unwrap();
        assert!(a.member(&a.poly("y^2").unwrap(), &j));
    }

    #[test]
    fn radical_examples() {
        let a = qxy();
        assert!(a.radical_member(&a.poly("x").unwrap(), &a.ideal_from_strs(&["x^2"]).unwrap()));
        assert!(a.radical_member(&a.poly("x + y").unwrap(), &a.ideal_from_strs(&["x^2", "y^2"]).unwrap()));
        assert!(!a.radical_member(&a.one(), &a.ideal_from_strs(&["x", "y"]).unwrap()));
        assert!(!a.radical_member(&a.poly("x").unwrap(), &a.ideal_from_strs(&["x*y"]).unwrap()));
    }

    #[test]
    fn ideal_ops() {
        let a = qxy();
        let x = a.ideal_from_strs(&["x"]).unwrap();
        let y = a.ideal_from_strs(&["y"]).unwrap();
        assert_eq!(a.ideal_sum(&x, &y).gens().len(), 2);
        assert_eq!(a.ideal_prod(&x, &y), a.ideal_from_strs(&["x*y"]).unwrap());
        let b = FPAlgebra::parse(&["x", "y"], &["x*y"]).unwrap();
        let xb = b.ideal_from_strs(&["x"]).unwrap();
        let yb = b.ideal_from_strs(&["y"]).unwrap();
        assert!(b.ideal_prod(&xb, &yb).is_zero_ideal());
    }

    #[test]
    fn units() {
        let a = FPAlgebra::parse(&["t", "s"], &["s*t - 1"]).unwrap();
        assert!(a.is_unit(&a.poly("t").unwrap()));
        let b = FPAlgebra::polynomial_ring(&["x"]);
        assert!(!b.is_unit(&b.poly("x").unwrap()));
        let c = FPAlgebra::parse(&["x"], &["x^2"]).unwrap();
        let f = c.poly("1 + x").unwrap();
        assert!(c.is_unit(&f));
        assert!(c.equal(&f.mul(&c.poly("1 - x").unwrap()), &c.one()));
    }

    #[test]
    fn squarefree_multivariate() {
        let a = qxy();
        let f = a.poly("(y^2 - x^3)^2").unwrap();
        let s = squarefree_part(&f).unwrap();
        assert_eq!(s, a.poly("y^2 - x^3").unwrap().make_monic());
        assert_eq!(squarefree_part(&a.poly("x^2*(x - 1)").unwrap()).unwrap(), a.poly("x^2 - x").unwrap());
        assert_eq!(squarefree_part(&a.zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn gcd_and_divide() {
        let a = qxy();
        let f = a.poly("(x + y)*(x - y)^2").unwrap();
        let g = a.poly("(x - y)*(x + 2*y)").unwrap();
        let d = poly_gcd(&f, &g);
        assert_eq!(d, a.poly("x - y").unwrap().make_monic());
        assert!(poly_divide(&a.poly("x^2").unwrap(), &a.poly("x + 1").unwrap()).is_none());
    }
}
