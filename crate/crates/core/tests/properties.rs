use proptest::prelude::*;

use aschemes::corpus::{cusp_algebra, line_algebra};
use aschemes::dlat::{posets_isomorphic, FinDLat, FinPoset, DEFAULT_CAP};
use aschemes::limits::reduce_hypersurface;
use aschemes::nagata::{check_resolution, resolve_fractions, star_subdivide, Fan2D, MonomialFraction};
use aschemes::normalization::{Closure, ClosureData, NormSet};
use aschemes::scheme::affine;
use aschemes::zr::{domain, line_field, place_sample, FactoredElem, Place};
use aschemes::{FPAlgebra, UniPoly, Q};

fn pool() -> Vec<UniPoly> {
    ["t", "t - 1", "t + 2", "t - 3", "t^2 + 1", "t^2 - 2", "t^2 + t + 1"]
        .iter()
        .map(|s| UniPoly::from_mpoly(&line_algebra().poly(s).unwrap(), 0).unwrap())
        .collect()
}

fn factored() -> impl Strategy<Value = FactoredElem> {
    let factor = (0usize..7, -2i64..=2);
    (proptest::collection::vec(factor, 0..=3), 1i64..=5, any::<bool>()).prop_map(|(fs, c, neg)| {
        let unit = Q::from_integer(if neg { -c } else { c }.into());
        let p = pool();
        FactoredElem::new(unit, fs.into_iter().map(|(i, e)| (p[i].clone(), e)).collect()).unwrap()
    })
}

fn place() -> impl Strategy<Value = Place> {
    let sample = place_sample(&[]);
    (0..sample.len()).prop_map(move |i| sample[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn valuations_are_additive_and_ultrametric(a in factored(), b in factored(), v in place()) {
        let k = line_field();
        prop_assert_eq!(v.valuate(&a.mul(&b)), v.valuate(&a) + v.valuate(&b));
        prop_assert_eq!(v.valuate(&a.inv()), -v.valuate(&a));
        prop_assert_eq!(Some(v.valuate(&a)), v.valuate_fraction(&a.to_fraction(&k)));
        if let Some(s) = a.add(&b) {
            prop_assert!(v.valuate(&s) >= v.valuate(&a).min(v.valuate(&b)));
            if v.valuate(&a) != v.valuate(&b) {
                prop_assert_eq!(v.valuate(&s), v.valuate(&a).min(v.valuate(&b)));
            }
        }
    }

    #[test]
    fn domains_cover(a in factored(), v in place()) {
        prop_assert!(domain(&a).contains(&v) || domain(&a.inv()).contains(&v));
        prop_assert_eq!(domain(&a).contains(&v), v.valuate(&a) >= 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn radical_membership_matches_squarefree_division(
        eg in proptest::collection::vec(0u32..=2, 4),
        ef in proptest::collection::vec(0u32..=2, 4),
    ) {
        let a = line_algebra();
        let p = pool();
        let build = |es: &[u32]| p.iter().zip(es).fold(UniPoly::one(), |acc, (q, &m)| acc.mul(&q.pow(m)));
        let (g, f) = (build(&eg), build(&ef));
        let got = a.radical_member(&f.to_mpoly(1, 0, a.order()), &a.principal(&g.to_mpoly(1, 0, a.order())));
        prop_assert_eq!(got, g.squarefree_part().divides(&f));
    }

    #[test]
    fn birkhoff_round_trip(rels in proptest::collection::vec((0usize..6, 0usize..6), 0..10)) {
        let rels: Vec<(usize, usize)> = rels.into_iter().filter(|(i, j)| i < j).collect();
        let p = FinPoset::from_relations((0..6).map(|i| i.to_string()).collect(), &rels).unwrap();
        let (l, _) = FinDLat::opens(&p);
        let (q, _) = l.spec();
        prop_assert!(posets_isomorphic(&p, &q));
        prop_assert!(posets_isomorphic(&q, &l.spec_by_filters()));
    }

    #[test]
    fn fans_resolve_their_fractions(fr in proptest::collection::vec((-6i64..=6, -6i64..=6), 0..6)) {
        let fr: Vec<MonomialFraction> = fr.into_iter().map(|(a, b)| MonomialFraction::new(a, b)).collect();
        let f = resolve_fractions(&fr);
        f.check().unwrap();
        prop_assert!(check_resolution(&f, &fr).ok());
        prop_assert!(Fan2D::trivial().refined_by(&f));
    }

    #[test]
    fn star_subdivision_refines(x in 0i64..=12, y in 0i64..=12, z in 0i64..=12, w in 0i64..=12) {
        let g = |a: i64, b: i64| num::integer::gcd(a, b);
        prop_assume!((x, y) != (0, 0) && (z, w) != (0, 0));
        let (r, s) = ((x / g(x, y), y / g(x, y)), (z / g(z, w), w / g(z, w)));
        let f = star_subdivide(&Fan2D::trivial(), r).unwrap();
        let f2 = star_subdivide(&f, s).unwrap();
        prop_assert!(f.refined_by(&f2));
        let grows = if f.rays().contains(&s) { 0 } else { 1 };
        prop_assert_eq!(f2.cones().len(), f.cones().len() + grows);
        prop_assert_eq!(star_subdivide(&f2, s).unwrap(), f2.clone());
        f2.check().unwrap();
    }

    #[test]
    fn reduction_is_idempotent(e1 in 1u32..=3, e2 in 0u32..=2, e3 in 0u32..=2) {
        let a = FPAlgebra::polynomial_ring(&["x", "y"]);
        let f = a.poly(&format!("(y^2 - x^3)^{e1} * (x - 1)^{e2} * (y + x)^{e3}")).unwrap();
        let alg = FPAlgebra::new(a.vars().to_vec(), vec![f]);
        let r = reduce_hypersurface(&alg).unwrap();
        prop_assert_eq!(reduce_hypersurface(&r).unwrap(), r.clone());
        let rel = &r.relations()[0];
        prop_assert_eq!(r.squarefree_part(rel).unwrap().make_monic(), rel.make_monic());
    }
}

#[test]
fn precedence_is_a_preorder() {
    let a = cusp_algebra();
    let x = affine(&a, &[a.poly("x").unwrap()], true, DEFAULT_CAP).unwrap();
    let k = x.field().unwrap().clone();
    let cd = ClosureData::parse(&k, &[("t", "y/x", "t^2 - x")], &["t^2 - x", "t^3 - y"]).unwrap();
    let c = Closure::new(&x, &cd).unwrap();
    let g = x.global();
    let mut sets: Vec<NormSet> = ["y/x", "x", "y/x - 1", "y", "1"].iter().map(|s| NormSet(vec![c.pair_str(g, s).unwrap()])).collect();
    for u in 0..x.opens().len() {
        sets.push(NormSet(vec![c.unit_pair(u)]));
    }
    sets.push(NormSet(vec![c.pair_str(g, "y/x").unwrap(), c.pair_str(g, "y/x - 1").unwrap()]));
    let n = sets.len();
    let le: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| c.precedes(&sets[i], &sets[j])).collect()).collect();
    for i in 0..n {
        assert!(le[i][i], "set {i} does not precede itself");
        for j in 0..n {
            for l in 0..n {
                if le[i][j] && le[j][l] {
                    assert!(le[i][l], "{i} ≺ {j} ≺ {l} but not {i} ≺ {l}");
                }
            }
        }
    }
}
