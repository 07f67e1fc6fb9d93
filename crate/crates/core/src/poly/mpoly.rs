use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::order::MonomialOrder;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted in strictly decreasing order with respect to
/// `order`, and no coefficient is zero. Variable names live in the owning
/// ring; a polynomial only records how many variables it ranges over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Exponent, Q)>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn monomial_divides(a: &[u32], b: &[u32]) -> bool {
    divides(a, b)
}

pub fn monomial_lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn monomial_coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

impl MPoly {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        MPoly { nvars, order, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: Q) -> Self {
        let mut p = MPoly::zero(nvars, order);
        if !c.is_zero() {
            p.terms.push((vec![0; nvars], c));
        }
        p
    }

    pub fn one(nvars: usize, order: MonomialOrder) -> Self {
        MPoly::constant(nvars, order, Q::one())
    }

    pub fn var(nvars: usize, order: MonomialOrder, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly { nvars, order, terms: vec![(e, Q::one())] }
    }

    pub fn monomial(nvars: usize, order: MonomialOrder, exp: Exponent, c: Q) -> Self {
        debug_assert_eq!(exp.len(), nvars);
        let mut p = MPoly::zero(nvars, order);
        if !c.is_zero() {
            p.terms.push((exp, c));
        }
        p
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(nvars: usize, order: MonomialOrder, terms: Vec<(Exponent, Q)>) -> Self {
        let mut acc: HashMap<Exponent, Q> = HashMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            *acc.entry(e).or_insert_with(Q::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MPoly { nvars, order, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Exponent, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn leading_monomial(&self) -> Option<&Exponent> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Q> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    /// Variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.iter().any(|(e, _)| e[i] > 0)).collect()
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MPoly { nvars: self.nvars, order, terms }
    }

    /// Embeds into a ring with `extra` additional variables appended.
    pub fn extend_vars(&self, extra: usize, order: MonomialOrder) -> Self {
        let n = self.nvars + extra;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(n, 0);
                (e2, c.clone())
            })
            .collect();
        let mut p = MPoly { nvars: n, order: self.order, terms };
        p = p.with_order_forced(order);
        p
    }

    fn with_order_forced(mut self, order: MonomialOrder) -> Self {
        self.order = order;
        self.terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        self
    }

    /// Drops the last variables, returning `None` if any of them occurs.
    pub fn truncate_vars(&self, keep: usize, order: MonomialOrder) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e[keep..].iter().any(|&x| x > 0) {
                return None;
            }
            terms.push((e[..keep].to_vec(), c.clone()));
        }
        Some(MPoly { nvars: keep, order, terms }.with_order_forced(order))
    }

    /// Renames variable `i` to position `map[i]` in a ring of `nvars` variables.
    pub fn remap_vars(&self, map: &[usize], nvars: usize, order: MonomialOrder) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0; nvars];
                for (i, &x) in e.iter().enumerate() {
                    e2[map[i]] += x;
                }
                (e2, c.clone())
            })
            .collect();
        MPoly::from_terms(nvars, order, terms)
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, order: self.order, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars, self.order);
        }
        MPoly { nvars: self.nvars, order: self.order, terms: self.terms.iter().map(|(e, d)| (e.clone(), d * c)).collect() }
    }

    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Multiplies by the monomial `c * x^exp`.
    pub fn mul_term(&self, exp: &[u32], c: &Q) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars, self.order);
        }
        MPoly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, d)| (e.iter().zip(exp).map(|(a, b)| a + b).collect(), d * c)).collect(),
        }
    }

    fn check_compat(&self, o: &MPoly) {
        assert_eq!(self.nvars, o.nvars, "polynomials over different variable counts");
        assert_eq!(self.order, o.order, "polynomials under different monomial orders");
    }

    /// `self + k * o`, merging the sorted term lists.
    pub fn add_scaled(&self, o: &MPoly, k: &Q) -> Self {
        self.check_compat(o);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match self.order.cmp(&self.terms[i].0, &o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((o.terms[j].0.clone(), &o.terms[j].1 * k));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &o.terms[j].1 * k;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(o.terms[j..].iter().map(|(e, c)| (e.clone(), c * k)));
        out.retain(|(_, c)| !c.is_zero());
        MPoly { nvars: self.nvars, order: self.order, terms: out }
    }

    pub fn add(&self, o: &MPoly) -> Self {
        self.add_scaled(o, &Q::one())
    }

    pub fn sub(&self, o: &MPoly) -> Self {
        self.add_scaled(o, &-Q::one())
    }

    pub fn mul(&self, o: &MPoly) -> Self {
        self.check_compat(o);
        if self.is_zero() || o.is_zero() {
            return MPoly::zero(self.nvars, self.order);
        }
        let mut acc: HashMap<Exponent, Q> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Q::zero) += ca * cb;
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = self.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MPoly { nvars: self.nvars, order, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = MPoly::one(self.nvars, self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c * q(e[var] as i64))
            })
            .collect();
        MPoly::from_terms(self.nvars, self.order, terms)
    }

    /// Ring homomorphism: substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars, "substitution arity mismatch");
        let (n, ord) = match images.first() {
            Some(p) => (p.nvars, p.order),
            None => (0, self.order),
        };
        let mut pows: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(n, ord), p.clone()]).collect();
        let mut acc = MPoly::zero(n, ord);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(n, ord, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pows[i].len() <= k as usize {
                    let next = pows[i].last().unwrap().mul(&images[i]);
                    pows[i].push(next);
                }
                t = t.mul(&pows[i][k as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Multiplies through by the least common denominator and makes the
    /// content primitive with positive leading coefficient. Used only for
    /// stable display and hashing of ideal generators.
    pub fn primitive_integer(&self) -> Self {
        use num::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&l / c.denom());
            g = g.gcd(&n);
        }
        let mut k = Q::new(l, g);
        if self.terms[0].1.is_negative() {
            k = -k;
        }
        self.scale(&k)
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                let _ = write!(s, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{a}*");
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: MonomialOrder = MonomialOrder::Grevlex;

    fn x() -> MPoly {
        MPoly::var(2, G, 0)
    }
    fn y() -> MPoly {
        MPoly::var(2, G, 1)
    }

    #[test]
    fn arithmetic_and_display() {
        let names = vec!["x".to_string(), "y".to_string()];
        let p = x().add(&y()).pow(2);
        assert_eq!(p.format_with(&names), "x^2 + 2*x*y + y^2");
        let d = p.sub(&x().pow(2)).sub(&y().pow(2));
        assert_eq!(d.format_with(&names), "2*x*y");
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_is_a_ring_map() {
        // x -> y^2, y -> x + 1
        let imgs = vec![y().pow(2), x().add(&MPoly::one(2, G))];
        let f = x().mul(&y());
        let g = x().add(&y());
        let lhs = f.mul(&g).substitute(&imgs);
        let rhs = f.substitute(&imgs).mul(&g.substitute(&imgs));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_and_eval() {
        let f = x().pow(3).mul(&y());
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(f.derivative(0).format_with(&names), "3*x^2*y");
        assert_eq!(f.eval(&[q(2), q(3)]), q(24));
    }
}
