//! Subrings of a function field `K = Frac(base)`, described by generators.

use std::collections::BTreeMap;

use num::Zero;

use crate::poly::algebra::{poly_divide, poly_lcm};
use crate::poly::elim::{kernel, subalgebra_express};
use crate::poly::fraction::eval_at_fractions;
use crate::poly::linalg::{nullspace, rref};
use crate::poly::{FPAlgebra, Fraction, MPoly, MonomialOrder, Q};

/// The fraction field of an integral finitely presented algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionField {
    pub base: FPAlgebra,
}

impl FunctionField {
    pub fn new(base: FPAlgebra) -> Self {
        FunctionField { base }
    }

    pub fn equal(&self, a: &Fraction, b: &Fraction) -> bool {
        a.equal(&self.base, b)
    }

    pub fn is_zero(&self, a: &Fraction) -> bool {
        a.is_zero(&self.base)
    }

    pub fn one(&self) -> Fraction {
        Fraction::from_element(&self.base, &self.base.one())
    }

    pub fn constant(&self, c: Q) -> Fraction {
        Fraction::from_element(&self.base, &self.base.constant(c))
    }

    pub fn element(&self, f: &MPoly) -> Fraction {
        Fraction::from_element(&self.base, f)
    }

    pub fn parse(&self, src: &str) -> crate::error::Result<Fraction> {
        Fraction::parse(&self.base, src)
    }

    pub fn format(&self, f: &Fraction) -> String {
        f.format(&self.base)
    }

    /// Image of `p(z)` under `z_i ↦ imgs[i]`.
    pub fn eval(&self, p: &MPoly, imgs: &[Fraction]) -> Fraction {
        if imgs.is_empty() {
            let c = p.constant_value().unwrap_or_else(Q::zero);
            return self.constant(c);
        }
        eval_at_fractions(p, imgs, &self.base)
    }

    /// Transports `f`, a fraction over another base, along the map sending
    /// that base's variables to `images` (fractions over this base).
    pub fn map_fraction(&self, f: &Fraction, images: &[Fraction]) -> Fraction {
        let n = self.eval(&f.num, images);
        let d = self.eval(&f.den, images);
        Fraction { num: self.base.reduce(&n.num.mul(&d.den)), den: self.base.reduce(&n.den.mul(&d.num)) }
    }

    /// Common-denominator picture: `base[v]/(v D - 1)` with `D` a common
    /// multiple of all denominators, and every fraction as an element there.
    fn localized(&self, fracs: &[&Fraction]) -> (FPAlgebra, Vec<MPoly>) {
        let mut big = self.base.one();
        for f in fracs {
            if f.den.constant_value().is_none() {
                big = poly_lcm(&big, &f.den);
            }
        }
        let name = self.base.fresh_name("v");
        let loc = self.base.localize(&big, &name);
        let v = loc.var(loc.nvars() - 1);
        let imgs = fracs
            .iter()
            .map(|x| {
                let num = loc.embed(&x.num);
                if let Some(c) = x.den.constant_value() {
                    return num.scale(&c.recip());
                }
                let cof = poly_divide(&big, &x.den).expect("denominator divides the common multiple");
                num.mul(&loc.embed(&cof)).mul(&v)
            })
            .collect();
        (loc, imgs)
    }

    /// Writes `f` as a polynomial in `gens` if it lies in `ℚ[gens] ⊂ K`.
    pub fn express(&self, gens: &[Fraction], f: &Fraction) -> Option<MPoly> {
        let mut all: Vec<&Fraction> = gens.iter().collect();
        all.push(f);
        let (loc, mut imgs) = self.localized(&all);
        let target = imgs.pop().unwrap();
        if gens.is_empty() {
            let r = loc.reduce(&target);
            return r.constant_value().map(|c| MPoly::constant(0, MonomialOrder::Grevlex, c));
        }
        subalgebra_express(&loc, &imgs, &target)
    }

    pub fn contains(&self, gens: &[Fraction], f: &Fraction) -> bool {
        self.express(gens, f).is_some()
    }

    /// `ℚ[a] ⊆ ℚ[b]`.
    pub fn subring_le(&self, a: &[Fraction], b: &[Fraction]) -> bool {
        a.iter().all(|x| self.contains(b, x))
    }

    pub fn subring_eq(&self, a: &[Fraction], b: &[Fraction]) -> bool {
        self.subring_le(a, b) && self.subring_le(b, a)
    }

    /// Presentation `ℚ[z]/ker` of the subring generated by `gens`.
    pub fn presentation(&self, gens: &[Fraction], names: &[String]) -> FPAlgebra {
        assert_eq!(gens.len(), names.len());
        if gens.is_empty() {
            return FPAlgebra::new(vec![], vec![]);
        }
        let refs: Vec<&Fraction> = gens.iter().collect();
        let (loc, imgs) = self.localized(&refs);
        FPAlgebra::new(names.to_vec(), kernel(&loc, &imgs))
    }

    /// Drops generators lying in the subring of the earlier ones.
    pub fn minimize_generators(&self, gens: &[Fraction]) -> Vec<Fraction> {
        let mut kept: Vec<Fraction> = Vec::new();
        for g in gens {
            if !self.contains(&kept, g) {
                kept.push(g.clone());
            }
        }
        kept
    }

    /// Elements of `ℚ[a] ∩ ℚ[b]` reachable as polynomials of degree at most
    /// `degree` on both sides, found by linear algebra. The result generates
    /// the intersection whenever it is generated in that degree.
    pub fn intersect(&self, a: &[Fraction], b: &[Fraction], degree: u32) -> Vec<Fraction> {
        if self.subring_le(a, b) {
            return a.to_vec();
        }
        if self.subring_le(b, a) {
            return b.to_vec();
        }
        let ma = self.monomials(a, degree);
        let mb = self.monomials(b, degree);
        let cols: Vec<&Fraction> = ma.iter().map(|(_, f)| f).chain(mb.iter().map(|(_, f)| f)).collect();
        let (loc, imgs) = self.localized(&cols);
        let mut rows: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        let reduced: Vec<MPoly> = imgs.iter().map(|p| loc.reduce(p)).collect();
        for p in &reduced {
            for (e, _) in p.terms() {
                let k = rows.len();
                rows.entry(e.clone()).or_insert(k);
            }
        }
        let mut m = vec![vec![Q::zero(); cols.len()]; rows.len()];
        for (j, p) in reduced.iter().enumerate() {
            let sign = if j < ma.len() { Q::from_integer(1.into()) } else { Q::from_integer((-1).into()) };
            for (e, c) in p.terms() {
                m[rows[e]][j] = c * &sign;
            }
        }
        let null = nullspace(&m, cols.len());
        // the a-parts, row reduced, give a basis of the common span
        let mut span: Vec<Vec<Q>> = null.iter().map(|v| v[..ma.len()].to_vec()).collect();
        let piv = rref(&mut span);
        let mut elems: Vec<(u32, Fraction)> = Vec::new();
        for (r, _) in piv.iter().enumerate() {
            let mut acc = Fraction::from_element(&self.base, &self.base.zero());
            let mut deg = 0;
            for (j, (d, f)) in ma.iter().enumerate() {
                let c = &span[r][j];
                if !c.is_zero() {
                    acc = acc.add(&self.base, &Fraction { num: f.num.scale(c), den: f.den.clone() });
                    deg = deg.max(*d);
                }
            }
            if deg > 0 {
                elems.push((deg, acc));
            }
        }
        elems.sort_by_key(|e| e.0);
        let elems: Vec<Fraction> = elems.into_iter().map(|e| e.1).collect();
        self.minimize_generators(&elems)
    }

    fn monomials(&self, gens: &[Fraction], degree: u32) -> Vec<(u32, Fraction)> {
        let mut out = vec![(0, self.one())];
        let mut frontier = vec![(0usize, self.one())];
        for d in 1..=degree {
            let mut next = Vec::new();
            for (start, f) in &frontier {
                for (i, g) in gens.iter().enumerate().skip(*start) {
                    let h = f.mul(&self.base, g);
                    next.push((i, h.clone()));
                    out.push((d, h));
                }
            }
            frontier = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_membership() {
        let k = FunctionField::new(FPAlgebra::polynomial_ring(&["t"]));
        let t = k.parse("t").unwrap();
        let ti = k.parse("1/t").unwrap();
        let f = k.parse("(t^2 + 1)/t").unwrap();
        assert!(k.contains(&[t.clone(), ti.clone()], &f));
        assert!(!k.contains(std::slice::from_ref(&t), &f));
        assert!(!k.contains(std::slice::from_ref(&ti), &t));
        assert!(k.contains(&[], &k.one()));
        assert!(!k.contains(&[], &t));
        let p = k.express(&[t.clone(), ti.clone()], &f).unwrap();
        assert!(k.equal(&k.eval(&p, &[t, ti]), &f));
    }

    #[test]
    fn intersections() {
        let k = FunctionField::new(FPAlgebra::polynomial_ring(&["t"]));
        let t = k.parse("t").unwrap();
        let u = k.parse("1/t").unwrap();
        assert!(k.intersect(std::slice::from_ref(&t), std::slice::from_ref(&u), 3).is_empty());
        let s = k.parse("1/(t - 1)").unwrap();
        // Q[t, 1/t] ∩ Q[t, 1/(t-1)] = Q[t]
        let i = k.intersect(&[t.clone(), u], &[t.clone(), s], 3);
        assert!(k.subring_eq(&i, std::slice::from_ref(&t)));
        let r = k.presentation(&[k.parse("t^2").unwrap(), k.parse("t^3").unwrap()], &["a".into(), "b".into()]);
        assert_eq!(r.relations().len(), 1);
    }
}
