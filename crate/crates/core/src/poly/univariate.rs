use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

use super::mpoly::{q, MPoly, Q};
use super::order::MonomialOrder;

/// Dense univariate polynomial over ℚ, coefficients from degree 0 upward.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&k| q(k)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly { coeffs: vec![Q::one()] }
    }

    pub fn constant(c: Q) -> Self {
        UniPoly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        UniPoly::from_ints(&[0, 1])
    }

    /// `t - c`.
    pub fn linear(c: Q) -> Self {
        UniPoly::new(vec![-c, Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree `-1`.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn scale(&self, c: &Q) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Q::zero();
        UniPoly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = UniPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.lead();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] -= &c * dc;
            }
            quot[i - dd] = c;
        }
        r.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(r))
    }

    pub fn divides(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        o.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `f / gcd(f, f')`, made monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Rational roots, found by the rational root theorem.
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.is_zero() {
            return vec![];
        }
        // clear denominators
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let mut roots = Vec::new();
        let shift = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if shift > 0 {
            roots.push(Q::zero());
        }
        let ints = &ints[shift..];
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        if ints.len() == 1 {
            return roots;
        }
        let ps = divisors(&a0);
        let qs = divisors(&an);
        let mut cands: Vec<Q> = Vec::new();
        for p in &ps {
            for qq in &qs {
                let r = Q::new(p.clone(), qq.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            if self.eval(&c).is_zero() {
                roots.push(c);
            }
        }
        roots
    }

    /// Exact irreducibility decision for degree at most 3 (a polynomial of
    /// degree 2 or 3 over ℚ is reducible iff it has a rational root).
    /// Returns `None` above degree 3.
    pub fn is_irreducible_low_degree(&self) -> Option<bool> {
        match self.degree() {
            d if d <= 0 => Some(false),
            1 => Some(true),
            2 | 3 => Some(self.rational_roots().is_empty()),
            _ => None,
        }
    }

    pub fn to_mpoly(&self, nvars: usize, var: usize, order: MonomialOrder) -> MPoly {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![0; nvars];
                e[var] = i as u32;
                (e, c.clone())
            })
            .collect();
        MPoly::from_terms(nvars, order, terms)
    }

    /// Reads a polynomial in which only `var` occurs.
    pub fn from_mpoly(p: &MPoly, var: usize) -> Option<Self> {
        let mut coeffs = vec![Q::zero(); p.degree_in(var) as usize + 1];
        for (e, c) in p.terms() {
            if e.iter().enumerate().any(|(i, &k)| i != var && k > 0) {
                return None;
            }
            coeffs[e[var] as usize] += c;
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn cmp_canonical(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.coeffs.cmp(&o.coeffs))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let other = n / &i;
            if other != i {
                out.push(other);
            }
        }
        i += 1;
    }
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_mpoly(1, 0, MonomialOrder::Grevlex);
        write!(f, "{}", p.format_with(&["t".to_string()]))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}
