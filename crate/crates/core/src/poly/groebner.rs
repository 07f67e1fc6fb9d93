//! Buchberger's algorithm with the normal selection strategy and both of
//! Buchberger's criteria.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num::One;
use once_cell::sync::Lazy;

use super::mpoly::{monomial_coprime, monomial_divides, monomial_lcm, Exponent, MPoly, Q};
use super::order::MonomialOrder;

/// Full normal form of `f` with respect to `basis` (remainder of
/// multivariate division; every term of the result is irreducible).
pub fn reduce(f: &MPoly, basis: &[MPoly]) -> MPoly {
    let n = f.nvars();
    let ord = f.order();
    let mut rem: Vec<(Exponent, Q)> = Vec::new();
    let mut p = f.clone();
    while let Some(lm) = p.leading_monomial().cloned() {
        let lc = p.leading_coeff().unwrap().clone();
        let mut divided = false;
        for g in basis {
            let glm = match g.leading_monomial() {
                Some(m) => m,
                None => continue,
            };
            if monomial_divides(glm, &lm) {
                let shift: Exponent = lm.iter().zip(glm).map(|(a, b)| a - b).collect();
                let k = -(&lc / g.leading_coeff().unwrap());
                p = p.add_scaled(&g.mul_term(&shift, &Q::one()), &k);
                divided = true;
                break;
            }
        }
        if !divided {
            rem.push((lm.clone(), lc.clone()));
            p = p.add_scaled(&MPoly::monomial(n, ord, lm, Q::one()), &-lc);
        }
    }
    // remainder terms were produced in decreasing order
    let mut out = MPoly::zero(n, ord);
    for (e, c) in rem {
        out = out.add(&MPoly::monomial(n, ord, e, c));
    }
    out
}

pub fn s_polynomial(f: &MPoly, g: &MPoly) -> MPoly {
    let lf = f.leading_monomial().expect("nonzero");
    let lg = g.leading_monomial().expect("nonzero");
    let l = monomial_lcm(lf, lg);
    let sf: Exponent = l.iter().zip(lf).map(|(a, b)| a - b).collect();
    let sg: Exponent = l.iter().zip(lg).map(|(a, b)| a - b).collect();
    let a = f.mul_term(&sf, &f.leading_coeff().unwrap().recip());
    let b = g.mul_term(&sg, &g.leading_coeff().unwrap().recip());
    a.sub(&b)
}

static CACHE: Lazy<Mutex<HashMap<Vec<MPoly>, Vec<MPoly>>>> = Lazy::new(|| Mutex::new(HashMap::new()));
const CACHE_LIMIT: usize = 20_000;

/// Reduced Gröbner basis of the ideal generated by `gens`, in the monomial
/// order carried by the inputs. The output is monic, sorted by decreasing
/// leading monomial, and depends only on the input list.
pub fn groebner(gens: &[MPoly]) -> Vec<MPoly> {
    let key: Vec<MPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if let Some(hit) = CACHE.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let out = buchberger(&key);
    let mut cache = CACHE.lock().unwrap();
    if cache.len() >= CACHE_LIMIT {
        cache.clear();
    }
    cache.insert(key, out.clone());
    out
}

/// [`groebner`] without the cache.
pub fn buchberger(gens: &[MPoly]) -> Vec<MPoly> {
    if gens.is_empty() {
        return Vec::new();
    }
    let n = gens[0].nvars();
    let ord = gens[0].order();
    if gens.iter().any(|g| g.is_constant()) {
        return vec![MPoly::one(n, ord)];
    }
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            if r.is_constant() {
                return vec![MPoly::one(n, ord)];
            }
            basis.push(r.make_monic());
        }
    }
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while !pending.is_empty() {
        // normal selection strategy: smallest lcm, ties broken by indices
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = monomial_lcm(basis[a.0].leading_monomial().unwrap(), basis[a.1].leading_monomial().unwrap());
                let lb = monomial_lcm(basis[b.0].leading_monomial().unwrap(), basis[b.1].leading_monomial().unwrap());
                ord.cmp(&la, &lb).then(a.cmp(b))
            })
            .unwrap();
        pending.remove(&(i, j));
        let lmi = basis[i].leading_monomial().unwrap();
        let lmj = basis[j].leading_monomial().unwrap();
        if monomial_coprime(lmi, lmj) {
            continue;
        }
        let l = monomial_lcm(lmi, lmj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && monomial_divides(basis[k].leading_monomial().unwrap(), &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![MPoly::one(n, ord)];
        }
        let k = basis.len();
        basis.push(r.make_monic());
        for m in 0..k {
            pending.insert((m, k));
        }
    }
    minimal_reduced(basis)
}

fn minimal_reduced(basis: Vec<MPoly>) -> Vec<MPoly> {
    let ord = basis[0].order();
    let mut keep: Vec<MPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.leading_monomial().unwrap();
            j != i && monomial_divides(hm, lm) && (hm != lm || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<MPoly> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        out.push(reduce(&keep[i], &others).make_monic());
    }
    out.sort_by(|a, b| ord.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    out
}

/// Independent post-check: every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[MPoly]) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            if !reduce(&s_polynomial(&basis[i], &basis[j]), basis).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Whether the basis generates the unit ideal.
pub fn is_unit_ideal(basis: &[MPoly]) -> bool {
    basis.iter().any(|g| g.is_constant() && !g.is_zero())
}

/// Convenience: the basis under a different order.
pub fn groebner_in(gens: &[MPoly], order: MonomialOrder) -> Vec<MPoly> {
    let g: Vec<MPoly> = gens.iter().map(|p| p.with_order(order)).collect();
    groebner(&g)
}
