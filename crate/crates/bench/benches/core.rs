use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use aschemes::corpus::{affine_line_with, cusp_algebra};
use aschemes::dlat::DEFAULT_CAP;
use aschemes::nagata::{compactify, resolve_fractions, CompactifyInput, MonomialFraction};
use aschemes::normalization::{normalize_affine, Closure, ClosureData};
use aschemes::poly::groebner::buchberger;
use aschemes::reticulation::principal_fragment;
use aschemes::scheme::{affine, ASchemeModel, FunctionField};
use aschemes::{FPAlgebra, Fraction, PointSet};

fn groebner(c: &mut Criterion) {
    let a = FPAlgebra::polynomial_ring(&["x", "y", "z"]);
    let gens: Vec<_> = ["x^2 + y*z - 2", "y^2 - x*z + 1", "z^3 - x*y - 1"].iter().map(|s| a.poly(s).unwrap()).collect();
    c.bench_function("buchberger cyclic-ish 3 vars", |b| b.iter(|| buchberger(black_box(&gens))));
}

fn fragment(c: &mut Criterion) {
    let a = FPAlgebra::polynomial_ring(&["x", "y"]);
    let gens: Vec<_> = ["x", "y", "x - 1", "x + y"].iter().map(|s| a.poly(s).unwrap()).collect();
    c.bench_function("principal fragment of 4 lines", |b| b.iter(|| principal_fragment(&a, black_box(&gens), DEFAULT_CAP).unwrap()));
}

fn normalize(c: &mut Criterion) {
    let a = cusp_algebra();
    let x = affine(&a, &[a.poly("x").unwrap()], true, DEFAULT_CAP).unwrap();
    let k = x.field().unwrap().clone();
    let cd = ClosureData::parse(&k, &[("t", "y/x", "t^2 - x")], &["t^2 - x", "t^3 - y"]).unwrap();
    let cl = Closure::new(&x, &cd).unwrap();
    let pairs = vec![cl.pair_str(x.global(), "y/x").unwrap()];
    c.bench_function("normalize cusp", |b| b.iter(|| normalize_affine(&x, &cd, black_box(&pairs), DEFAULT_CAP).unwrap()));
}

fn chart(var: &str, basics: &[&str], emb: &str) -> ASchemeModel {
    let a = FPAlgebra::polynomial_ring(&[var]);
    let bs: Vec<_> = basics.iter().map(|s| a.poly(s).unwrap()).collect();
    let k = FunctionField::new(FPAlgebra::polynomial_ring(&["t"]));
    let e = Fraction::parse(&k.base, emb).unwrap();
    affine(&a, &bs, true, DEFAULT_CAP).unwrap().reembed(k, &[e]).unwrap()
}

fn compactify_line(c: &mut Criterion) {
    let x = affine_line_with(&["t", "t - 1"]).unwrap();
    let labels = x.space().labels();
    let without = |l: &str| PointSet::from_indices((0..x.npoints()).filter(|&i| labels[i] != l));
    let input = CompactifyInput {
        x: x.clone(),
        v: [without("(t)"), without("(t - 1)")],
        charts: [chart("s", &["s", "s - 1"], "1/t"), chart("r", &["r", "r + 1"], "1/(t - 1)")],
    };
    c.bench_function("compactify two-chart line", |b| b.iter(|| compactify(black_box(&input)).unwrap()));
}

fn fans(c: &mut Criterion) {
    let fr: Vec<_> = [(1, -1), (2, -1), (3, -5), (-4, 7), (5, -2)].iter().map(|&(a, b)| MonomialFraction::new(a, b)).collect();
    c.bench_function("resolve 5 monomial fractions", |b| b.iter(|| resolve_fractions(black_box(&fr))));
}

criterion_group!(benches, groebner, fragment, normalize, compactify_line, fans);
criterion_main!(benches);
