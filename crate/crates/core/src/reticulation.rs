//! The reticulation: finitely generated ideals of an algebra modulo
//! radical equality, as an oracle lattice.

use crate::dlat::{materialize, Fragment, OracleLat};
use crate::error::Result;
use crate::poly::{FPAlgebra, IdealFG, MPoly};

/// The class of an ideal up to equal radicals, kept with one representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalClass {
    pub ideal: IdealFG,
}

#[derive(Clone, Debug)]
pub struct ReticulationLat {
    alg: FPAlgebra,
}

impl ReticulationLat {
    pub fn new(alg: FPAlgebra) -> Self {
        ReticulationLat { alg }
    }

    pub fn algebra(&self) -> &FPAlgebra {
        &self.alg
    }

    /// `[(a)]`.
    pub fn principal(&self, a: &MPoly) -> RadicalClass {
        RadicalClass { ideal: self.alg.principal(a) }
    }

    pub fn class(&self, gens: Vec<MPoly>) -> RadicalClass {
        RadicalClass { ideal: self.alg.ideal(gens) }
    }

    pub fn equal(&self, a: &RadicalClass, b: &RadicalClass) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }
}

/// `rad(a) ⊆ rad(b)`.
pub fn alpha1_leq(alg: &FPAlgebra, a: &RadicalClass, b: &RadicalClass) -> bool {
    a.ideal.gens().iter().all(|g| alg.radical_member(g, &b.ideal))
}

impl OracleLat for ReticulationLat {
    type Elem = RadicalClass;

    fn leq(&self, a: &RadicalClass, b: &RadicalClass) -> bool {
        alpha1_leq(&self.alg, a, b)
    }

    fn join(&self, a: &RadicalClass, b: &RadicalClass) -> RadicalClass {
        RadicalClass { ideal: self.alg.ideal_sum(&a.ideal, &b.ideal) }
    }

    fn meet(&self, a: &RadicalClass, b: &RadicalClass) -> RadicalClass {
        RadicalClass { ideal: self.alg.ideal_prod(&a.ideal, &b.ideal) }
    }

    fn bottom(&self) -> RadicalClass {
        RadicalClass { ideal: self.alg.zero_ideal() }
    }

    fn top(&self) -> RadicalClass {
        RadicalClass { ideal: self.alg.unit_ideal() }
    }

    fn label(&self, a: &RadicalClass) -> String {
        let g: Vec<String> = a.ideal.gens().iter().map(|p| self.alg.format(p)).collect();
        format!("[({})]", g.join(", "))
    }
}

/// The finite sublattice generated by `gens`.
pub fn alpha1_fragment(alg: &FPAlgebra, gens: &[RadicalClass], cap: usize) -> Result<Fragment<RadicalClass>> {
    materialize(&ReticulationLat::new(alg.clone()), gens, cap)
}

/// Fragment generated by the principal classes of `elems`.
pub fn principal_fragment(alg: &FPAlgebra, elems: &[MPoly], cap: usize) -> Result<Fragment<RadicalClass>> {
    let r = ReticulationLat::new(alg.clone());
    let gens: Vec<RadicalClass> = elems.iter().map(|e| r.principal(e)).collect();
    materialize(&r, &gens, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlat::DEFAULT_CAP;

    #[test]
    fn leq_examples() {
        let a = FPAlgebra::polynomial_ring(&["x", "y"]);
        let r = ReticulationLat::new(a.clone());
        let x = r.principal(&a.poly("x").unwrap());
        let x2 = r.principal(&a.poly("x^2").unwrap());
        let xy = r.principal(&a.poly("x*y").unwrap());
        assert!(r.equal(&x, &x2));
        assert!(r.leq(&xy, &x));
        assert!(!r.leq(&x, &xy));
        assert!(r.leq(&r.bottom(), &x));
        let y = r.principal(&a.poly("y").unwrap());
        assert!(r.equal(&xy, &r.meet(&x, &y)));
        assert!(r.equal(&r.principal(&a.zero()), &r.bottom()));
        assert!(r.equal(&r.principal(&a.constant(crate::poly::q(3))), &r.top()));
    }

    #[test]
    fn fragments() {
        let a = FPAlgebra::parse(&["x", "y"], &["x*y"]).unwrap();
        let f = principal_fragment(&a, &[a.poly("x").unwrap(), a.poly("y").unwrap()], DEFAULT_CAP).unwrap();
        assert_eq!(f.len(), 5);
        let (p, _) = f.lattice.spec();
        assert_eq!(p.len(), 3);
        assert_eq!(p.generic_points().len(), 2);

        let b = FPAlgebra::parse(&["x"], &["x^2 - x"]).unwrap();
        let f = principal_fragment(&b, &[b.poly("x").unwrap(), b.poly("x - 1").unwrap()], DEFAULT_CAP).unwrap();
        assert_eq!(f.len(), 4);
        let (p, _) = f.lattice.spec();
        assert_eq!(p.len(), 2);
        assert_eq!(p.closed_points().len(), 2);

        assert_eq!(principal_fragment(&b, &[], DEFAULT_CAP).unwrap().len(), 2);
    }
}
