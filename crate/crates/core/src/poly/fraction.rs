use std::fmt;

use super::algebra::FPAlgebra;
use super::mpoly::MPoly;
use crate::error::{Error, Result};

/// A formal fraction `num/den` over an integral [`FPAlgebra`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: MPoly,
    pub den: MPoly,
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction({:?} / {:?})", self.num, self.den)
    }
}

impl Fraction {
    /// Checks that the denominator is nonzero and not an evident zero divisor.
    pub fn new(alg: &FPAlgebra, num: MPoly, den: MPoly) -> Result<Self> {
        if !alg.is_probable_nonzerodivisor(&den) {
            return Err(Error::ZeroInput);
        }
        Ok(Fraction { num: alg.reduce(&num), den: alg.reduce(&den) })
    }

    pub fn from_element(alg: &FPAlgebra, f: &MPoly) -> Self {
        Fraction { num: alg.reduce(f), den: alg.one() }
    }

    pub fn parse(alg: &FPAlgebra, src: &str) -> Result<Self> {
        let (n, d) = alg.fraction_parts(src)?;
        Fraction::new(alg, n, d)
    }

    pub fn add(&self, alg: &FPAlgebra, o: &Self) -> Self {
        if self.den == o.den {
            return Fraction { num: alg.reduce(&self.num.add(&o.num)), den: self.den.clone() };
        }
        Fraction { num: alg.reduce(&self.num.mul(&o.den).add(&o.num.mul(&self.den))), den: alg.reduce(&self.den.mul(&o.den)) }
    }

    pub fn neg(&self) -> Self {
        Fraction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, alg: &FPAlgebra, o: &Self) -> Self {
        self.add(alg, &o.neg())
    }

    pub fn mul(&self, alg: &FPAlgebra, o: &Self) -> Self {
        Fraction { num: alg.reduce(&self.num.mul(&o.num)), den: alg.reduce(&self.den.mul(&o.den)) }
    }

    pub fn inv(&self, alg: &FPAlgebra) -> Result<Self> {
        Fraction::new(alg, self.den.clone(), self.num.clone())
    }

    pub fn is_zero(&self, alg: &FPAlgebra) -> bool {
        alg.is_zero(&self.num)
    }

    pub fn equal(&self, alg: &FPAlgebra, o: &Self) -> bool {
        alg.equal(&self.num.mul(&o.den), &o.num.mul(&self.den))
    }

    /// The element of `alg` this fraction equals, if any.
    pub fn as_element(&self, alg: &FPAlgebra) -> Option<MPoly> {
        alg.fraction_as_element(&self.num, &self.den)
    }

    pub fn format(&self, alg: &FPAlgebra) -> String {
        if self.den.is_one() {
            return alg.format(&self.num);
        }
        format!("({})/({})", alg.format(&self.num), alg.format(&self.den))
    }
}

/// Evaluates a polynomial at fractions: the image of `p` under `x_i ↦ imgs[i]`.
pub fn eval_at_fractions(p: &MPoly, imgs: &[Fraction], target: &FPAlgebra) -> Fraction {
    assert_eq!(p.nvars(), imgs.len());
    let mut acc = Fraction { num: target.zero(), den: target.one() };
    for (e, c) in p.terms() {
        let mut t = Fraction { num: target.constant(c.clone()), den: target.one() };
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = t.mul(target, &imgs[i]);
            }
        }
        acc = acc.add(target, &t);
    }
    acc
}

/// A monic polynomial `T^d + c_{d-1} T^{d-1} + ... + c_0` over an algebra,
/// witnessing integrality of a fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicWitness {
    /// `c_0, ..., c_{d-1}`.
    pub coeffs: Vec<MPoly>,
}

impl MonicWitness {
    /// Reads a witness from a polynomial over `alg`'s variables followed by
    /// one extra variable `T`. Fails unless the top coefficient in `T` is 1.
    pub fn from_poly(alg: &FPAlgebra, p: &MPoly) -> Result<Self> {
        let n = alg.nvars();
        if p.nvars() != n + 1 {
            return Err(Error::VariableMismatch("witness must be over the algebra plus one variable".into()));
        }
        let d = p.degree_in(n) as usize;
        let mut coeffs = vec![alg.zero(); d + 1];
        for (e, c) in p.terms() {
            let mut base = e[..n].to_vec();
            base.truncate(n);
            coeffs[e[n] as usize] = coeffs[e[n] as usize].add(&MPoly::monomial(n, alg.order(), base, c.clone()));
        }
        let top = coeffs.pop().unwrap();
        if d == 0 || !alg.equal(&top, &alg.one()) {
            return Err(Error::NonMonicWitness);
        }
        Ok(MonicWitness { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether `frac` is a root: `Σ c_i n^i d^{deg-i} + n^deg = 0`.
    pub fn annihilates(&self, alg: &FPAlgebra, frac: &Fraction) -> bool {
        let d = self.degree();
        let mut acc = frac.num.pow(d as u32);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&frac.num.pow(i as u32)).mul(&frac.den.pow((d - i) as u32)));
        }
        alg.is_zero(&acc)
    }
}

impl FPAlgebra {
    /// Integrality of `frac` over this algebra, certified by `witness`.
    pub fn is_integral(&self, frac: &Fraction, witness: &MonicWitness) -> bool {
        witness.annihilates(self, frac)
    }
}
