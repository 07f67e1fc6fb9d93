//! Normalization of finite affine models: the lattice of pairs `(U, α)`
//! with `α` integral over `𝒪(U)`, its spectrum, and the projection back.

use serde::{Deserialize, Serialize};

use crate::dlat::{materialize, OracleLat};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poly::parse::parse_poly;
use crate::poly::{FPAlgebra, Fraction, MPoly, MonicWitness, MonomialOrder};
use crate::report::Report;
use crate::scheme::{find_isomorphism, principal_model, ASchemeModel, ASchemeMor, FunctionField};

const ORD: MonomialOrder = MonomialOrder::Grevlex;

/// One integral generator of the closure: a named fraction with a monic
/// polynomial it satisfies.
#[derive(Clone, Debug)]
pub struct ClosureGen {
    pub name: String,
    pub frac: Fraction,
    pub witness: MonicWitness,
}

/// Generators of the integral closure of the base, plus relations among
/// them (over the base variables and the generator names) that are checked
/// but not needed.
#[derive(Clone, Debug, Default)]
pub struct ClosureData {
    pub gens: Vec<ClosureGen>,
    pub products: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ClosureGenDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub frac: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ClosureDoc {
    pub gens: Vec<ClosureGenDoc>,
    #[serde(default)]
    pub products: Vec<String>,
}

impl ClosureData {
    pub fn trivial() -> Self {
        ClosureData::default()
    }

    /// Entries are `(name, fraction, witness)`; the witness is a polynomial
    /// in the base variables and `name`.
    pub fn parse(k: &FunctionField, entries: &[(&str, &str, &str)], products: &[&str]) -> Result<Self> {
        let mut gens = Vec::new();
        for (name, frac, witness) in entries {
            let frac = k.parse(frac)?;
            let mut vars = k.base.vars().to_vec();
            vars.push(name.to_string());
            let w = parse_poly(witness, &vars, ORD)?;
            gens.push(ClosureGen { name: name.to_string(), frac, witness: MonicWitness::from_poly(&k.base, &w)? });
        }
        Ok(ClosureData { gens, products: products.iter().map(|s| s.to_string()).collect() })
    }

    pub fn from_doc(k: &FunctionField, doc: &ClosureDoc) -> Result<Self> {
        let names: Vec<String> = doc.gens.iter().enumerate().map(|(i, g)| g.name.clone().unwrap_or_else(|| format!("t{i}"))).collect();
        let entries: Vec<(&str, &str, &str)> = doc.gens.iter().zip(&names).map(|(g, n)| (n.as_str(), g.frac.as_str(), g.witness.as_str())).collect();
        let products: Vec<&str> = doc.products.iter().map(|s| s.as_str()).collect();
        Self::parse(k, &entries, &products)
    }

    /// Every generator is integral over the base, and every listed product
    /// relation holds in `K`.
    pub fn verify(&self, k: &FunctionField) -> Result<()> {
        for g in &self.gens {
            if !k.base.is_integral(&g.frac, &g.witness) {
                return Err(Error::InconsistentClosure(format!("witness for {} does not vanish", g.name)));
            }
        }
        let mut vars = k.base.vars().to_vec();
        let mut imgs: Vec<Fraction> = (0..k.base.nvars()).map(|i| k.element(&k.base.var(i))).collect();
        for g in &self.gens {
            vars.push(g.name.clone());
            imgs.push(g.frac.clone());
        }
        for p in &self.products {
            let rel = parse_poly(p, &vars, ORD)?;
            if !k.is_zero(&k.eval(&rel, &imgs)) {
                return Err(Error::InconsistentClosure(format!("relation {p} fails")));
            }
        }
        Ok(())
    }
}

/// The closure algebra `C` of a principal model `X` with function field `K`,
/// presented on the global ring's variables followed by the closure
/// generators, together with the elements `g_U` cutting out `X`'s opens.
#[derive(Clone, Debug)]
pub struct Closure {
    x: ASchemeModel,
    field: FunctionField,
    alg: FPAlgebra,
    fracs: Vec<Fraction>,
    open_elems: Vec<MPoly>,
    global_listed: Vec<(MPoly, PointSet)>,
}

/// `(U, α)`: an open of the base model and a nonzero element integral over
/// its sections, cached as `g_U α ∈ C`.
#[derive(Clone, Debug)]
pub struct NormPair {
    pub open: PointSet,
    pub alpha: Fraction,
    pub witness: Option<MonicWitness>,
    alpha_elem: MPoly,
    elem: MPoly,
    bracket: PointSet,
}

impl NormPair {
    pub fn element(&self) -> &MPoly {
        &self.elem
    }
}

/// A finite set of pairs, read as the union of their opens.
#[derive(Clone, Debug)]
pub struct NormSet(pub Vec<NormPair>);

impl Closure {
    pub fn new(x: &ASchemeModel, cd: &ClosureData) -> Result<Self> {
        let field = x.field().ok_or_else(|| Error::MalformedModel("normalization needs a function field".into()))?.clone();
        cd.verify(&field)?;
        let g = x.global();
        let a = x.global_ring();
        let mut fracs = x.section(g).embedding.clone().ok_or_else(|| Error::MalformedModel("global sections have no embedding".into()))?;
        let mut names = a.vars().to_vec();
        for c in &cd.gens {
            if names.contains(&c.name) {
                return Err(Error::InconsistentClosure(format!("generator name {} is taken", c.name)));
            }
            names.push(c.name.clone());
            fracs.push(c.frac.clone());
        }
        let alg = field.presentation(&fracs, &names);
        let extra = cd.gens.len();
        let global_listed: Vec<(MPoly, PointSet)> = x.section(g).listed.iter().map(|l| (l.elem.extend_vars(extra, ORD), l.support)).collect();
        let mut open_elems = Vec::with_capacity(x.opens().len());
        for &u in x.opens() {
            if u.is_empty() {
                open_elems.push(alg.zero());
                continue;
            }
            let e = global_listed.iter().filter(|(_, s)| s.intersection(u).is_empty()).fold(alg.one(), |acc, (b, _)| acc.mul(b));
            open_elems.push(alg.reduce(&e));
        }
        let c = Closure { x: x.clone(), field, alg, fracs, open_elems, global_listed };
        for (i, &u) in x.opens().iter().enumerate() {
            let cut = PointSet::from_indices((0..x.npoints()).filter(|&p| !c.vanishes_at(&c.open_elems[i], p)));
            if cut != u {
                return Err(Error::NonPrincipalOpen(format!("{u:?}")));
            }
        }
        Ok(c)
    }

    pub fn algebra(&self) -> &FPAlgebra {
        &self.alg
    }

    pub fn field(&self) -> &FunctionField {
        &self.field
    }

    pub fn base(&self) -> &ASchemeModel {
        &self.x
    }

    /// Fractions of `C`'s variables.
    pub fn generator_fractions(&self) -> &[Fraction] {
        &self.fracs
    }

    /// `f` as an element of `C`.
    pub fn element(&self, f: &Fraction) -> Result<MPoly> {
        let p =
            self.field.express(&self.fracs, f).ok_or_else(|| Error::NotInRing(format!("{} is not in the closure algebra", self.field.format(f))))?;
        let vars: Vec<MPoly> = (0..self.alg.nvars()).map(|i| self.alg.var(i)).collect();
        Ok(self.alg.reduce(&p.substitute(&vars)))
    }

    fn prime_gens(&self, x: usize) -> Vec<MPoly> {
        self.global_listed.iter().filter(|(_, s)| s.contains(x)).map(|(b, _)| b.clone()).collect()
    }

    fn vanishes_at(&self, h: &MPoly, x: usize) -> bool {
        let p = self.alg.ideal(self.prime_gens(x));
        self.alg.radical_member(h, &p)
    }

    /// Builds a pair over the open with index `u`, checking the witness
    /// (over the base) when one is given.
    pub fn pair(&self, u: usize, alpha: Fraction, witness: Option<MonicWitness>) -> Result<NormPair> {
        if self.field.is_zero(&alpha) {
            return Err(Error::ZeroInput);
        }
        if let Some(w) = &witness {
            if !self.field.base.is_integral(&alpha, w) {
                return Err(Error::InconsistentClosure(format!("witness fails for {}", self.field.format(&alpha))));
            }
        }
        let a = self.element(&alpha)?;
        Ok(self.make_pair(self.x.opens()[u], alpha, witness, a))
    }

    pub fn pair_str(&self, u: usize, alpha: &str) -> Result<NormPair> {
        self.pair(u, self.field.parse(alpha)?, None)
    }

    /// The pair `(U, 1)`.
    pub fn unit_pair(&self, u: usize) -> NormPair {
        self.make_pair(self.x.opens()[u], self.field.one(), None, self.alg.one())
    }

    fn make_pair(&self, open: PointSet, alpha: Fraction, witness: Option<MonicWitness>, alpha_elem: MPoly) -> NormPair {
        let u = self.x.open_index(open).expect("pairs live on opens");
        let elem = self.alg.reduce(&self.open_elems[u].mul(&alpha_elem));
        let bracket = self.bracket(open, &alpha_elem);
        NormPair { open, alpha, witness, alpha_elem, elem, bracket }
    }

    /// Points `x ∈ U` at which `α` is not forced to vanish: the prime of `x`
    /// stays proper in the closure over the smallest open around `x` with `α`
    /// inverted.
    pub fn u_bracket(&self, p: &NormPair) -> PointSet {
        p.bracket
    }

    fn bracket(&self, open: PointSet, a: &MPoly) -> PointSet {
        let mut out = PointSet::EMPTY;
        for x in open.iter() {
            let g = &self.open_elems[self.x.umin(x)];
            if !self.vanishes_at(&g.mul(a), x) {
                out.insert(x);
            }
        }
        out
    }

    /// `𝔞 ≺ 𝔟`: (a) every `U_i[α_i]` is covered by the `V_j[β_j]`, and (b) the
    /// `β_j` generate the unit ideal wherever `α_i` is inverted, decided in
    /// `C[w]/(w g_{U_i} α_i - 1)`.
    pub fn precedes(&self, a: &NormSet, b: &NormSet) -> bool {
        let cover = b.0.iter().fold(PointSet::EMPTY, |acc, q| acc.union(self.u_bracket(q)));
        let j = self.alg.ideal(b.0.iter().map(|q| q.elem.clone()).collect());
        a.0.iter().all(|p| {
            let ub = self.u_bracket(p);
            if ub.is_empty() && self.alg.is_zero(&p.elem) {
                return true;
            }
            ub.is_subset(cover) && self.alg.radical_member(&p.elem, &j)
        })
    }

    fn same_pair(&self, p: &NormPair, q: &NormPair) -> bool {
        p.open == q.open && self.alg.equal(&p.elem, &q.elem)
    }
}

/// The lattice of pair sets modulo mutual `≺`.
pub struct NormLat<'a> {
    pub closure: &'a Closure,
}

impl OracleLat for NormLat<'_> {
    type Elem = NormSet;

    fn leq(&self, a: &NormSet, b: &NormSet) -> bool {
        self.closure.precedes(a, b)
    }

    fn join(&self, a: &NormSet, b: &NormSet) -> NormSet {
        let mut out = a.0.clone();
        for q in &b.0 {
            if !out.iter().any(|p| self.closure.same_pair(p, q)) {
                out.push(q.clone());
            }
        }
        NormSet(out)
    }

    fn meet(&self, a: &NormSet, b: &NormSet) -> NormSet {
        let c = self.closure;
        let mut out: Vec<NormPair> = Vec::new();
        for p in &a.0 {
            for q in &b.0 {
                let r = c.make_pair(
                    p.open.intersection(q.open),
                    p.alpha.mul(&c.field.base, &q.alpha),
                    None,
                    c.alg.reduce(&p.alpha_elem.mul(&q.alpha_elem)),
                );
                if !out.iter().any(|s| c.same_pair(s, &r)) {
                    out.push(r);
                }
            }
        }
        NormSet(out)
    }

    fn bottom(&self) -> NormSet {
        NormSet(vec![])
    }

    fn top(&self) -> NormSet {
        NormSet(vec![self.closure.unit_pair(self.closure.x.global())])
    }

    fn label(&self, a: &NormSet) -> String {
        let c = self.closure;
        let parts: Vec<String> = a.0.iter().map(|p| format!("({:?}, {})", p.open, c.field.format(&p.alpha))).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Output of the normalization: the model, the projection to the base, and
/// the closure data used.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub model: ASchemeModel,
    pub projection: ASchemeMor,
    pub closure: Closure,
    pub fragment_size: usize,
}

/// Normalizes the principal model `x` along the closure data. The fragment
/// is generated by `pairs` and by `(Z, 1)` for every open `Z` of `x`.
pub fn normalize_affine(x: &ASchemeModel, cd: &ClosureData, pairs: &[NormPair], cap: usize) -> Result<Normalization> {
    let closure = Closure::new(x, cd)?;
    let nz = x.opens().len();
    let mut gens: Vec<NormPair> = (0..nz).map(|z| closure.unit_pair(z)).collect();
    gens.extend(pairs.iter().cloned());
    let sets: Vec<NormSet> = gens.iter().map(|p| NormSet(vec![p.clone()])).collect();
    let frag = materialize(&NormLat { closure: &closure }, &sets, cap)?;
    let (space, ji) = frag.lattice.spec();
    let d: Vec<PointSet> = frag.gen_index.iter().map(|&g| frag.lattice.birkhoff(&ji, g)).collect();

    // pairs over the empty open contribute nothing to the sections
    let keep: Vec<usize> = (0..gens.len()).filter(|&i| !closure.alg.is_zero(&gens[i].elem)).collect();
    let basics: Vec<MPoly> = keep.iter().map(|&i| gens[i].elem.clone()).collect();
    let dk: Vec<PointSet> = keep.iter().map(|&i| d[i]).collect();
    let embedding = Some((closure.field.clone(), closure.fracs.clone()));
    let model = principal_model(&closure.alg, &basics, space, &dk, embedding)?;
    for p in 0..model.npoints() {
        let r = model.ring(model.umin(p));
        if r.member(&r.one(), model.prime(p)) {
            return Err(Error::InconsistentClosure(format!("prime of point {} is the unit ideal", model.space().labels()[p])));
        }
    }

    let mut point_map = Vec::with_capacity(model.npoints());
    for p in 0..model.npoints() {
        let x_pt = (0..x.npoints()).find(|&q| (0..nz).all(|z| x.opens()[z].contains(q) == d[z].contains(p)));
        point_map
            .push(x_pt.ok_or_else(|| Error::InconsistentClosure(format!("point {} lies over no point of the base", model.space().labels()[p])))?);
    }
    let projection = ASchemeMor::from_fields(&model, x, point_map, None)?;
    Ok(Normalization { model, projection, closure, fragment_size: frag.len() })
}

/// Surjectivity, closedness and dominance of a map of finite models.
pub fn check_counit(pi: &ASchemeMor) -> Report {
    let mut rep = Report::new();
    let (s, t) = (&pi.source, &pi.target);
    let image = PointSet::from_indices(pi.point_map.iter().copied());
    if image == t.space().all() {
        rep.pass("surjective");
    } else {
        rep.fail("surjective", format!("image {:?}", image));
    }
    let mut bad = Vec::new();
    for &u in s.opens() {
        let z = s.space().all().difference(u);
        let img = PointSet::from_indices(z.iter().map(|p| pi.point_map[p]));
        if !t.space().is_closed(img) {
            bad.push(format!("{:?}", z));
        }
    }
    if bad.is_empty() {
        rep.pass("closed");
    } else {
        rep.fail("closed", format!("images of closed sets {} are not closed", bad.join(", ")));
    }
    let tg = t.space().generic_points();
    let gens = s.space().generic_points();
    if gens.iter().all(|&g| tg.contains(&pi.point_map[g])) {
        rep.pass("dominant");
    } else {
        rep.fail("dominant", "a generic point maps to a non-generic point");
    }
    rep
}

/// Normalizes the output again with trivial closure data and reports
/// whether the result is isomorphic to its input.
pub fn renormalize(n: &Normalization, cap: usize) -> Result<(Normalization, bool)> {
    let base = n.model.rebase_to_global()?;
    let again = normalize_affine(&base, &ClosureData::trivial(), &[], cap)?;
    let iso = find_isomorphism(&again.model, &base, None).is_some();
    Ok((again, iso))
}

/// The morphism of normalizations induced by a dominant `f: X → Y`, with
/// `field_map` sending `K_Y`'s base variables into `K_X`. Points follow the
/// transported pairs `(f⁻¹U, f♯α)`.
pub fn normalize_functorial(f: &ASchemeMor, field_map: Option<&[Fraction]>, nx: &Normalization, ny: &Normalization) -> Result<ASchemeMor> {
    let generic = f.target.space().generic_points();
    if f.source.space().generic_points().iter().any(|g| !generic.contains(&f.point_map[*g])) {
        return Err(Error::InvalidHom("morphism is not dominant".into()));
    }
    let (mx, my) = (&nx.model, &ny.model);
    let kx = mx.field().ok_or_else(|| Error::MalformedModel("no function field".into()))?;
    let (gx, gy) = (mx.global(), my.global());
    let mut pulled = Vec::new();
    for l in &my.section(gy).listed {
        let frac = my.to_fraction(gy, &l.elem).ok_or_else(|| Error::MalformedModel("no embedding".into()))?;
        let frac = match field_map {
            Some(m) => kx.map_fraction(&frac, m),
            None => frac,
        };
        let e = mx
            .from_fraction(gx, &frac)
            .ok_or_else(|| Error::InconsistentClosure(format!("transported element {} is not integral over the source", kx.format(&frac))))?;
        pulled.push((mx.support_of(gx, &e), l.support));
    }
    let mut point_map = Vec::with_capacity(mx.npoints());
    for p in 0..mx.npoints() {
        let q = (0..my.npoints()).find(|&q| pulled.iter().all(|(sx, sy)| sx.contains(p) == sy.contains(q)));
        point_map.push(q.ok_or_else(|| Error::InvalidHom(format!("point {} has no image", mx.space().labels()[p])))?);
    }
    ASchemeMor::from_fields(mx, my, point_map, field_map)
}

/// `π_Y ∘ N(f) = f ∘ π_X` on points.
pub fn naturality_holds(f: &ASchemeMor, nf: &ASchemeMor, nx: &Normalization, ny: &Normalization) -> bool {
    (0..nf.source.npoints()).all(|p| ny.projection.point_map[nf.point_map[p]] == f.point_map[nx.projection.point_map[p]])
}

/// A fraction claimed integral over `𝒪(U)`: `witness` is a polynomial over
/// the ring's variables followed by one more.
#[derive(Clone, Debug)]
pub struct NormalCandidate {
    pub open: usize,
    pub frac: Fraction,
    pub witness: MPoly,
}

/// Every candidate that is integral over `𝒪(U)` must lie in `𝒪(U)`.
/// Non-monic witnesses are rejected as input errors.
pub fn check_sections_normal(x: &ASchemeModel, candidates: &[NormalCandidate]) -> Result<Report> {
    let k = x.field().ok_or_else(|| Error::MalformedModel("no function field".into()))?;
    let mut rep = Report::new();
    for (i, c) in candidates.iter().enumerate() {
        let ring = x.ring(c.open);
        MonicWitness::from_poly(ring, &c.witness)?;
        let emb = x.section(c.open).embedding.as_ref().ok_or_else(|| Error::MalformedModel("no embedding".into()))?;
        let mut imgs = emb.clone();
        imgs.push(c.frac.clone());
        let name = format!("candidate[{i}] {}", k.format(&c.frac));
        if !k.is_zero(&k.eval(&c.witness, &imgs)) {
            rep.fail(format!("{name}.witness"), "witness does not vanish");
            continue;
        }
        if x.from_fraction(c.open, &c.frac).is_some() {
            rep.pass(format!("{name}.member"));
        } else {
            rep.fail(format!("{name}.member"), "integral but not a section");
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cusp_algebra, node_algebra};
    use crate::dlat::DEFAULT_CAP;
    use crate::scheme::affine;

    fn cusp() -> (ASchemeModel, ClosureData) {
        let a = cusp_algebra();
        let x = affine(&a, &[a.poly("x").unwrap()], true, DEFAULT_CAP).unwrap();
        let k = x.field().unwrap().clone();
        let cd = ClosureData::parse(&k, &[("t", "y/x", "t^2 - x")], &["t^2 - x", "t^3 - y"]).unwrap();
        (x, cd)
    }

    #[test]
    fn u_bracket_on_cusp() {
        let (x, cd) = cusp();
        let c = Closure::new(&x, &cd).unwrap();
        let g = x.global();
        let origin = x.space().closed_points()[0];
        let t = c.pair_str(g, "y/x").unwrap();
        assert_eq!(c.u_bracket(&t), x.space().all().difference(PointSet::singleton(origin)));
        assert_eq!(c.u_bracket(&c.unit_pair(g)), x.space().all());
        let t2 = c.pair_str(g, "x").unwrap();
        let (s, s2) = (NormSet(vec![t]), NormSet(vec![t2]));
        assert!(c.precedes(&s, &s2) && c.precedes(&s2, &s));
        assert!(!c.precedes(&s, &NormSet(vec![c.unit_pair(0)])));
        assert!(c.precedes(&NormSet(vec![c.unit_pair(g)]), &NormSet(vec![c.unit_pair(g), s.0[0].clone()])));
    }

    #[test]
    fn cusp_normalizes_to_line() {
        let (x, cd) = cusp();
        let c = Closure::new(&x, &cd).unwrap();
        let pairs = vec![c.pair_str(x.global(), "y/x").unwrap()];
        let n = normalize_affine(&x, &cd, &pairs, DEFAULT_CAP).unwrap();
        assert_eq!(n.model.npoints(), 2);
        assert!(n.model.check_axiom().ok());
        assert!(check_counit(&n.projection).ok());
        assert!(n.projection.check().ok(), "{:?}", n.projection.check());
        let line = FPAlgebra::polynomial_ring(&["T"]);
        let r = affine(&line, &[line.poly("T").unwrap()], true, DEFAULT_CAP).unwrap();
        let k = n.model.field().unwrap();
        let map = vec![k.parse("y/x").unwrap()];
        assert!(find_isomorphism(&n.model, &r, Some(&map)).is_some());
        let (_, iso) = renormalize(&n, DEFAULT_CAP).unwrap();
        assert!(iso);
    }

    #[test]
    fn node_has_two_points_over_origin() {
        let a = node_algebra();
        let x = affine(&a, &[a.poly("x").unwrap()], true, DEFAULT_CAP).unwrap();
        let k = x.field().unwrap().clone();
        let cd = ClosureData::parse(&k, &[("t", "y/x", "t^2 - x - 1")], &[]).unwrap();
        let c = Closure::new(&x, &cd).unwrap();
        let g = x.global();
        let pairs = vec![c.pair_str(g, "y/x - 1").unwrap(), c.pair_str(g, "y/x + 1").unwrap()];
        let n = normalize_affine(&x, &cd, &pairs, DEFAULT_CAP).unwrap();
        let origin = x.space().closed_points()[0];
        let fiber = n.projection.point_map.iter().filter(|&&p| p == origin).count();
        assert_eq!(fiber, 2);
        assert!(check_counit(&n.projection).ok());
        assert!(n.model.check_axiom().ok());
        let (_, iso) = renormalize(&n, DEFAULT_CAP).unwrap();
        assert!(iso);
    }

    #[test]
    fn normal_input_is_unchanged() {
        let a = FPAlgebra::polynomial_ring(&["t"]);
        let x = affine(&a, &[a.poly("t").unwrap()], true, DEFAULT_CAP).unwrap();
        let n = normalize_affine(&x, &ClosureData::trivial(), &[], DEFAULT_CAP).unwrap();
        assert!(find_isomorphism(&n.model, &x, None).is_some());
        assert_eq!(n.projection.point_map.len(), 2);
        let id: Vec<usize> = (0..x.npoints()).collect();
        let f = ASchemeMor::identity(&x);
        assert_eq!(f.point_map, id);
    }

    #[test]
    fn sections_are_normal() {
        let (x, cd) = cusp();
        let c = Closure::new(&x, &cd).unwrap();
        let n = normalize_affine(&x, &cd, &[c.pair_str(x.global(), "y/x").unwrap()], DEFAULT_CAP).unwrap();
        let m = &n.model;
        let g = m.global();
        let ring = m.ring(g);
        let mut vars = ring.vars().to_vec();
        vars.push("S".into());
        let k = m.field().unwrap();
        let cand = |f: &str, w: &str| NormalCandidate { open: g, frac: k.parse(f).unwrap(), witness: parse_poly(w, &vars, ORD).unwrap() };
        let rep = check_sections_normal(m, &[cand("y/x", "S^2 - x"), cand("y/x + 1", "S - t - 1")]).unwrap();
        assert!(rep.ok(), "{rep:?}");
        let err = check_sections_normal(m, &[cand("x/y", "t*S - 1")]);
        assert_eq!(err.unwrap_err(), Error::NonMonicWitness);
    }

    #[test]
    fn functorial_on_line_to_cusp() {
        let (x, cd) = cusp();
        let c = Closure::new(&x, &cd).unwrap();
        let nx = normalize_affine(&x, &cd, &[c.pair_str(x.global(), "y/x").unwrap()], DEFAULT_CAP).unwrap();
        let line = FPAlgebra::polynomial_ring(&["T"]);
        let l = affine(&line, &[line.poly("T").unwrap()], true, DEFAULT_CAP).unwrap();
        let kl = l.field().unwrap();
        let fm = vec![kl.parse("T^2").unwrap(), kl.parse("T^3").unwrap()];
        let pm: Vec<usize> = (0..l.npoints())
            .map(|p| if l.space().generic_points().contains(&p) { x.space().generic_points()[0] } else { x.space().closed_points()[0] })
            .collect();
        let f = ASchemeMor::from_fields(&l, &x, pm, Some(&fm)).unwrap();
        assert!(f.check().ok());
        let nl = normalize_affine(&l, &ClosureData::trivial(), &[], DEFAULT_CAP).unwrap();
        let nf = normalize_functorial(&f, Some(&fm), &nl, &nx).unwrap();
        assert!(nf.check().ok(), "{:?}", nf.check());
        assert!(naturality_holds(&f, &nf, &nl, &nx));
        let id = ASchemeMor::identity(&nx.model);
        let nid = normalize_functorial(&ASchemeMor::identity(&x), None, &nx, &nx).unwrap();
        assert_eq!(nid.point_map, id.point_map);
    }
}
