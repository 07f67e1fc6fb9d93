//! Elimination-order computations: elimination ideals, subalgebra
//! membership, fractions that happen to be ring elements, and kernels of
//! ring maps.

use super::algebra::FPAlgebra;
use super::groebner::{groebner, reduce};
use super::mpoly::MPoly;
use super::order::MonomialOrder;

const ORD: MonomialOrder = MonomialOrder::Grevlex;

/// `I ∩ ℚ[x_1..x_keep]`, where the inputs live over `keep + m` variables.
/// Output is a Gröbner basis (grevlex) over the first `keep` variables.
pub fn eliminate_last(polys: &[MPoly], keep: usize) -> Vec<MPoly> {
    let n = match polys.first() {
        Some(p) => p.nvars(),
        None => return vec![],
    };
    let ord = MonomialOrder::BlockLast(n - keep);
    let g = groebner(&polys.iter().map(|p| p.with_order(ord)).collect::<Vec<_>>());
    let kept: Vec<MPoly> = g.iter().filter_map(|p| p.truncate_vars(keep, ORD)).collect();
    groebner(&kept)
}

/// `I ∩ ℚ[x_{drop+1}..x_n]`, renumbered to start at 0.
pub fn eliminate_first(polys: &[MPoly], drop: usize) -> Vec<MPoly> {
    let n = match polys.first() {
        Some(p) => p.nvars(),
        None => return vec![],
    };
    let ord = MonomialOrder::Block(drop);
    let g = groebner(&polys.iter().map(|p| p.with_order(ord)).collect::<Vec<_>>());
    let map: Vec<usize> = (0..n).map(|i| i.saturating_sub(drop)).collect();
    let kept: Vec<MPoly> = g.iter().filter(|p| p.support_vars().iter().all(|&v| v >= drop)).map(|p| p.remap_vars(&map, n - drop, ORD)).collect();
    groebner(&kept)
}

/// Presentation of the ring map `ℚ[z_1..z_k] → A, z_i ↦ g_i`: the
/// generators `relations(A), z_i - g_i` over `A`'s variables followed by `z`.
fn graph_ideal(alg: &FPAlgebra, gens: &[MPoly], ord: MonomialOrder) -> Vec<MPoly> {
    let n = alg.nvars();
    let k = gens.len();
    let mut out: Vec<MPoly> = alg.relation_basis().iter().map(|r| r.extend_vars(k, ord)).collect();
    for (i, g) in gens.iter().enumerate() {
        let z = MPoly::var(n + k, ord, n + i);
        out.push(z.sub(&g.extend_vars(k, ord)));
    }
    out
}

/// If `f` lies in the subalgebra generated by `gens`, returns a polynomial
/// `P(z_1..z_k)` with `P(gens) = f` in `A`.
pub fn subalgebra_express(alg: &FPAlgebra, gens: &[MPoly], f: &MPoly) -> Option<MPoly> {
    let n = alg.nvars();
    let k = gens.len();
    let ord = MonomialOrder::Block(n);
    let g = groebner(&graph_ideal(alg, gens, ord));
    let r = reduce(&f.extend_vars(k, ord), &g);
    if r.support_vars().iter().any(|&v| v < n) {
        return None;
    }
    let map: Vec<usize> = (0..n + k).map(|i| i.saturating_sub(n)).collect();
    Some(r.remap_vars(&map, k, ORD))
}

/// Kernel of `ℚ[z_1..z_k] → A, z_i ↦ g_i`, as a Gröbner basis over `z`.
pub fn kernel(alg: &FPAlgebra, gens: &[MPoly]) -> Vec<MPoly> {
    let n = alg.nvars();
    if gens.is_empty() {
        return if alg.is_trivial() { vec![MPoly::one(0, ORD)] } else { vec![] };
    }
    let polys = graph_ideal(alg, gens, ORD);
    eliminate_first(&polys, n)
}

/// If `num/den` equals an element of `A` (inside `A[1/den]`), returns it.
pub fn fraction_as_element(alg: &FPAlgebra, num: &MPoly, den: &MPoly) -> Option<MPoly> {
    if alg.is_zero(den) {
        return None;
    }
    if let Some(c) = alg.reduce(den).constant_value() {
        return Some(alg.reduce(&num.scale(&c.recip())));
    }
    let n = alg.nvars();
    let ord = MonomialOrder::BlockLast(1);
    let mut polys: Vec<MPoly> = alg.relation_basis().iter().map(|r| r.extend_vars(1, ord)).collect();
    let v = MPoly::var(n + 1, ord, n);
    polys.push(v.mul(&den.extend_vars(1, ord)).sub(&MPoly::one(n + 1, ord)));
    let g = groebner(&polys);
    let r = reduce(&v.mul(&num.extend_vars(1, ord)), &g);
    r.truncate_vars(n, ORD).map(|p| alg.reduce(&p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_normalization_element() {
        // t = y/x on y^2 = x^3 is not in the ring but t^2 = x is
        let a = FPAlgebra::parse(&["x", "y"], &["y^2 - x^3"]).unwrap();
        let x = a.poly("x").unwrap();
        let y = a.poly("y").unwrap();
        assert!(fraction_as_element(&a, &y, &x).is_none());
        let r = fraction_as_element(&a, &y.mul(&y), &x.mul(&x)).unwrap();
        assert!(a.equal(&r, &x));
    }

    #[test]
    fn subalgebra() {
        let a = FPAlgebra::polynomial_ring(&["t"]);
        let t = a.poly("t").unwrap();
        let gens = vec![t.pow(2), t.pow(3)];
        assert!(subalgebra_express(&a, &gens, &t).is_none());
        let p = subalgebra_express(&a, &gens, &t.pow(5)).unwrap();
        assert_eq!(p.substitute(&gens), t.pow(5));
    }

    #[test]
    fn kernel_of_cusp_parametrization() {
        let a = FPAlgebra::polynomial_ring(&["t"]);
        let t = a.poly("t").unwrap();
        let k = kernel(&a, &[t.pow(2), t.pow(3)]);
        assert_eq!(k.len(), 1);
        let z: Vec<String> = vec!["x".into(), "y".into()];
        assert_eq!(k[0].format_with(&z), "x^3 - y^2");
    }

    #[test]
    fn elimination() {
        let v: Vec<String> = ["x", "y", "t"].iter().map(|s| s.to_string()).collect();
        let ps: Vec<MPoly> = ["x - t^2", "y - t^3"].iter().map(|s| super::super::parse::parse_poly(s, &v, ORD).unwrap()).collect();
        let e = eliminate_last(&ps, 2);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].format_with(&v[..2]), "x^3 - y^2");
    }
}
