use std::collections::BTreeMap;

use super::field::FunctionField;
use crate::dlat::FinPoset;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poly::{FPAlgebra, Fraction, IdealFG, MPoly, MonomialOrder};
use crate::report::Report;

/// A listed element of a section ring together with its support `β(a)`,
/// a closed subset of the open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Listed {
    pub elem: MPoly,
    pub support: PointSet,
}

/// Sections over one open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub ring: FPAlgebra,
    pub listed: Vec<Listed>,
    /// Images of the ring's variables in the function field, for
    /// birational models.
    pub embedding: Option<Vec<Fraction>>,
}

impl Section {
    pub fn zero_ring() -> Self {
        Section { ring: FPAlgebra::new(vec![], vec![MPoly::one(0, MonomialOrder::Grevlex)]), listed: vec![], embedding: None }
    }
}

/// The prime of a point, inside the ring of the smallest open containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    pub prime: IdealFG,
}

/// Image of `a` under the ring map sending variable `i` to `images[i]`.
pub fn apply_hom(a: &MPoly, images: &[MPoly], target: &FPAlgebra) -> MPoly {
    if images.is_empty() {
        let c = a.constant_value().unwrap_or_else(num::Zero::zero);
        return target.reduce(&target.constant(c));
    }
    target.reduce(&a.substitute(images))
}

/// A finite model of an 𝒜-scheme: a finite space, a ring on every open
/// with restriction maps, supports of listed elements, and a prime for
/// every point.
#[derive(Clone, Debug)]
pub struct ASchemeModel {
    space: FinPoset,
    opens: Vec<PointSet>,
    sections: Vec<Section>,
    restrictions: BTreeMap<(usize, usize), Vec<MPoly>>,
    points: Vec<PointData>,
    field: Option<FunctionField>,
}

impl ASchemeModel {
    /// Assembles a model. Sections are indexed like `space.open_sets()`.
    /// Missing restrictions are derived through the function field.
    pub fn from_parts(
        space: FinPoset,
        sections: Vec<Section>,
        restrictions: BTreeMap<(usize, usize), Vec<MPoly>>,
        points: Vec<PointData>,
        field: Option<FunctionField>,
    ) -> Result<Self> {
        let opens = space.open_sets();
        if sections.len() != opens.len() {
            return Err(Error::MalformedModel(format!("{} sections for {} opens", sections.len(), opens.len())));
        }
        if points.len() != space.len() {
            return Err(Error::MalformedModel("one prime per point required".into()));
        }
        let mut m = ASchemeModel { space, opens, sections, restrictions, points, field };
        for u in 0..m.opens.len() {
            for v in 0..m.opens.len() {
                if u == v || !m.opens[v].is_subset(m.opens[u]) || m.restrictions.contains_key(&(u, v)) {
                    continue;
                }
                let imgs = m.derive_restriction(u, v)?;
                m.restrictions.insert((u, v), imgs);
            }
        }
        for (&(u, v), imgs) in &m.restrictions {
            if imgs.len() != m.sections[u].ring.nvars() {
                return Err(Error::MalformedModel(format!("restriction {u}->{v} has the wrong arity")));
            }
            if imgs.iter().any(|p| p.nvars() != m.sections[v].ring.nvars()) {
                return Err(Error::MalformedModel(format!("restriction {u}->{v} lands in the wrong ring")));
            }
        }
        Ok(m)
    }

    fn derive_restriction(&self, u: usize, v: usize) -> Result<Vec<MPoly>> {
        let target = &self.sections[v].ring;
        if self.opens[v].is_empty() {
            return Ok(vec![target.zero(); self.sections[u].ring.nvars()]);
        }
        let (Some(k), Some(eu), Some(ev)) = (&self.field, &self.sections[u].embedding, &self.sections[v].embedding) else {
            return Err(Error::MalformedModel(format!("no restriction {u}->{v} and no function field")));
        };
        eu.iter()
            .map(|f| {
                k.express(ev, f)
                    .map(|p| apply_hom(&p, &(0..target.nvars()).map(|i| target.var(i)).collect::<Vec<_>>(), target))
                    .ok_or_else(|| Error::MalformedModel(format!("section over open {u} does not restrict to open {v}")))
            })
            .collect()
    }

    pub fn space(&self) -> &FinPoset {
        &self.space
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn section(&self, u: usize) -> &Section {
        &self.sections[u]
    }

    pub fn ring(&self, u: usize) -> &FPAlgebra {
        &self.sections[u].ring
    }

    pub fn points(&self) -> &[PointData] {
        &self.points
    }

    pub fn prime(&self, x: usize) -> &IdealFG {
        &self.points[x].prime
    }

    pub fn field(&self) -> Option<&FunctionField> {
        self.field.as_ref()
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), Vec<MPoly>> {
        &self.restrictions
    }

    pub fn npoints(&self) -> usize {
        self.space.len()
    }

    pub fn open_index(&self, s: PointSet) -> Option<usize> {
        self.opens.iter().position(|&o| o == s)
    }

    /// Index of the whole space.
    pub fn global(&self) -> usize {
        self.opens.len() - 1
    }

    pub fn global_ring(&self) -> &FPAlgebra {
        self.ring(self.global())
    }

    /// The smallest open containing `x`.
    pub fn umin(&self, x: usize) -> usize {
        self.open_index(self.space.generalization(PointSet::singleton(x))).expect("generalizations are open")
    }

    /// Replaces the stored support of a listed element (for building
    /// negative controls and for loading external data).
    pub fn set_support(&mut self, u: usize, i: usize, s: PointSet) {
        self.sections[u].listed[i].support = s;
    }

    pub fn set_section(&mut self, u: usize, s: Section) {
        self.sections[u] = s;
    }

    pub fn set_restriction(&mut self, u: usize, v: usize, imgs: Vec<MPoly>) {
        self.restrictions.insert((u, v), imgs);
    }

    /// `res_{U→V}(a)`.
    pub fn restrict(&self, u: usize, v: usize, a: &MPoly) -> MPoly {
        if u == v {
            return self.ring(u).reduce(a);
        }
        apply_hom(a, &self.restrictions[&(u, v)], self.ring(v))
    }

    /// Points `x ∈ U` where `a` vanishes, i.e. `a ∈ rad(P_x)`.
    pub fn support_of(&self, u: usize, a: &MPoly) -> PointSet {
        let mut out = PointSet::EMPTY;
        for x in self.opens[u].iter() {
            let m = self.umin(x);
            let img = self.restrict(u, m, a);
            if self.ring(m).radical_member(&img, &self.points[x].prime) {
                out.insert(x);
            }
        }
        out
    }

    /// Fraction of an element of `𝒪(U)`, for birational models.
    pub fn to_fraction(&self, u: usize, a: &MPoly) -> Option<Fraction> {
        let k = self.field.as_ref()?;
        let e = self.sections[u].embedding.as_ref()?;
        Some(k.eval(a, e))
    }

    /// Element of `𝒪(U)` equal to `f`, if `f` lies in that subring of `K`.
    pub fn from_fraction(&self, u: usize, f: &Fraction) -> Option<MPoly> {
        let k = self.field.as_ref()?;
        let e = self.sections[u].embedding.as_ref()?;
        let p = k.express(e, f)?;
        let r = self.ring(u);
        Some(apply_hom(&p, &(0..r.nvars()).map(|i| r.var(i)).collect::<Vec<_>>(), r))
    }

    /// Structural and axiom checks.
    pub fn check_axiom(&self) -> Report {
        let mut rep = Report::new();
        let n = self.opens.len();
        let mut bad = Vec::new();
        // restrictions are ring maps
        for (&(u, v), imgs) in &self.restrictions {
            for r in self.ring(u).relations() {
                if !apply_hom(r, imgs, self.ring(v)).is_zero() {
                    bad.push(format!("relation {} of open {u} survives in open {v}", self.ring(u).format(r)));
                }
            }
        }
        record(&mut rep, "restriction.hom", bad);
        // functoriality
        let mut bad = Vec::new();
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if u == v || v == w || !self.opens[v].is_subset(self.opens[u]) || !self.opens[w].is_subset(self.opens[v]) {
                        continue;
                    }
                    for i in 0..self.ring(u).nvars() {
                        let z = self.ring(u).var(i);
                        let two = self.restrict(v, w, &self.restrict(u, v, &z));
                        let one = self.restrict(u, w, &z);
                        if !self.ring(w).equal(&two, &one) {
                            bad.push(format!("generator {} along {u}->{v}->{w}", self.ring(u).vars()[i]));
                        }
                    }
                }
            }
        }
        record(&mut rep, "restriction.functorial", bad);
        // embeddings commute with restriction
        if let Some(k) = &self.field {
            let mut bad = Vec::new();
            for (&(u, v), imgs) in &self.restrictions {
                let (Some(eu), Some(ev)) = (&self.sections[u].embedding, &self.sections[v].embedding) else { continue };
                for (i, img) in imgs.iter().enumerate() {
                    if !k.equal(&k.eval(img, ev), &eu[i]) {
                        bad.push(format!("generator {} along {u}->{v}", self.ring(u).vars()[i]));
                    }
                }
            }
            record(&mut rep, "restriction.birational", bad);
        }
        // stored supports: closed, correct, natural
        let mut closed = Vec::new();
        let mut stored = Vec::new();
        let mut natural = Vec::new();
        for u in 0..n {
            let outside = self.space.all().difference(self.opens[u]);
            for l in &self.sections[u].listed {
                let name = self.ring(u).format(&l.elem);
                if !l.support.is_subset(self.opens[u]) || !self.space.is_closed(l.support.union(outside)) {
                    closed.push(format!("β({name}) on open {u} is not relatively closed"));
                }
                let computed = self.support_of(u, &l.elem);
                if computed != l.support {
                    stored.push(format!("β({name}) on open {u}: stored {:?}, computed {:?}", l.support, computed));
                }
                for v in 0..n {
                    if v == u || !self.opens[v].is_subset(self.opens[u]) {
                        continue;
                    }
                    let r = self.restrict(u, v, &l.elem);
                    if self.support_of(v, &r) != l.support.intersection(self.opens[v]) {
                        natural.push(format!("β({name}) restricted from open {u} to open {v}"));
                    }
                }
            }
        }
        record(&mut rep, "support.closed", closed);
        record(&mut rep, "support.stored", stored);
        record(&mut rep, "support.natural", natural);
        // localization axiom
        rep.merge("axiom", self.check_localization());
        rep
    }

    /// For `V ⊆ U` and listed `a` (and pairwise products) with
    /// `β(a) ⊆ U ∖ V`, `res(a)` must be a unit on `V`.
    pub fn check_localization(&self) -> Report {
        let mut rep = Report::new();
        let mut bad = Vec::new();
        for u in 0..self.opens.len() {
            let listed = &self.sections[u].listed;
            let mut cands: Vec<(MPoly, PointSet)> = listed.iter().map(|l| (l.elem.clone(), l.support)).collect();
            for i in 0..listed.len() {
                for j in i + 1..listed.len() {
                    cands.push((listed[i].elem.mul(&listed[j].elem), listed[i].support.union(listed[j].support)));
                }
            }
            for v in 0..self.opens.len() {
                if v == u || !self.opens[v].is_subset(self.opens[u]) {
                    continue;
                }
                let z = self.opens[u].difference(self.opens[v]);
                for (a, b) in &cands {
                    if b.is_subset(z) && !self.ring(v).is_unit(&self.restrict(u, v, a)) {
                        bad.push(format!("{} from open {u} is not a unit on open {v}", self.ring(u).format(a)));
                    }
                }
            }
        }
        record(&mut rep, "localization", bad);
        rep
    }

    /// Local ring at `x`: the ring of the smallest open around `x` with the
    /// complement of the point's prime inverted.
    pub fn stalk(&self, x: usize) -> Stalk {
        let m = self.umin(x);
        let ring = self.ring(m).clone();
        let prime = self.points[x].prime.clone();
        let inverted = self.sections[m].listed.iter().filter(|l| !ring.radical_member(&l.elem, &prime)).map(|l| l.elem.clone()).collect();
        Stalk { ring, prime, inverted }
    }

    /// A pair of distinct points with equal rings (inside `K`) on their
    /// smallest opens and corresponding primes, if any.
    pub fn separation_clash(&self) -> Option<(usize, usize)> {
        self.field.as_ref()?;
        for x in 0..self.npoints() {
            for y in x + 1..self.npoints() {
                if self.same_local_data(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_separated(&self) -> bool {
        self.separation_clash().is_none()
    }

    fn same_local_data(&self, x: usize, y: usize) -> bool {
        let k = self.field.as_ref().unwrap();
        let (mx, my) = (self.umin(x), self.umin(y));
        let (Some(ex), Some(ey)) = (&self.sections[mx].embedding, &self.sections[my].embedding) else {
            return false;
        };
        if !k.subring_eq(ex, ey) {
            return false;
        }
        prime_in(self, x, self, y) && prime_in(self, y, self, x)
    }

    pub fn to_dot(&self) -> String {
        self.space.to_dot()
    }

    /// Same model with section embeddings transported into another field
    /// along `images` (the new fractions of the old base's variables).
    pub fn reembed(&self, field: FunctionField, images: &[Fraction]) -> Result<Self> {
        if self.field.is_none() {
            return Err(Error::MalformedModel("model has no function field".into()));
        }
        let mut m = self.clone();
        for s in &mut m.sections {
            if let Some(e) = &s.embedding {
                let mapped: Vec<Fraction> = e.iter().map(|f| field.map_fraction(f, images)).collect();
                if mapped.iter().any(|f| field.base.is_zero(&f.den)) {
                    return Err(Error::MalformedModel("field map sends a denominator to zero".into()));
                }
                s.embedding = Some(mapped);
            }
        }
        m.field = Some(field);
        Ok(m)
    }

    /// Same model with `K` rebuilt as the fraction field of the global
    /// ring, which must contain the old base.
    pub fn rebase_to_global(&self) -> Result<Self> {
        let k = self.field.as_ref().ok_or_else(|| Error::MalformedModel("model has no function field".into()))?;
        let g = self.global();
        let base = self.ring(g).clone();
        let images = (0..k.base.nvars())
            .map(|i| {
                let f = Fraction::from_element(&k.base, &k.base.var(i));
                self.from_fraction(g, &f)
                    .map(|e| Fraction::from_element(&base, &e))
                    .ok_or_else(|| Error::MalformedModel("global ring does not contain the base".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.reembed(FunctionField::new(base), &images)
    }

    /// The model restricted to the open `w`, with the inclusion of points.
    pub fn open_submodel(&self, w: PointSet) -> Result<(Self, Vec<usize>)> {
        if !self.space.is_open(w) {
            return Err(Error::MalformedModel(format!("{w:?} is not open")));
        }
        let idx: Vec<usize> = w.iter().collect();
        let back = |s: PointSet| PointSet::from_indices(s.iter().map(|i| idx.iter().position(|&j| j == i).unwrap()));
        let space = self.space.restrict(w);
        let parent: Vec<usize> = space.open_sets().iter().map(|&s| self.open_index(s.map(|i| idx[i])).expect("opens of an open are open")).collect();
        let sections = parent
            .iter()
            .map(|&u| {
                let mut s = self.sections[u].clone();
                for l in &mut s.listed {
                    l.support = back(l.support);
                }
                s
            })
            .collect();
        let mut restrictions = BTreeMap::new();
        for (a, &pa) in parent.iter().enumerate() {
            for (b, &pb) in parent.iter().enumerate() {
                if let Some(r) = self.restrictions.get(&(pa, pb)) {
                    restrictions.insert((a, b), r.clone());
                }
            }
        }
        let points = idx.iter().map(|&i| self.points[i].clone()).collect();
        let m = ASchemeModel::from_parts(space, sections, restrictions, points, self.field.clone())?;
        Ok((m, idx))
    }

    /// Relabels points.
    pub fn with_labels(&self, labels: Vec<String>) -> Self {
        let mut m = self.clone();
        m.space = m.space.with_labels(labels);
        m
    }
}

fn record(rep: &mut Report, name: &str, bad: Vec<String>) {
    if bad.is_empty() {
        rep.pass(name);
    } else {
        rep.fail(name, bad.join("; "));
    }
}

/// Whether the prime of `x` in `a` lies in the prime of `y` in `b`, compared
/// inside a shared function field. Requires `y`'s ring to contain the
/// generators of `x`'s prime.
pub fn prime_in(a: &ASchemeModel, x: usize, b: &ASchemeModel, y: usize) -> bool {
    let (mx, my) = (a.umin(x), b.umin(y));
    a.prime(x).gens().iter().all(|g| {
        let Some(f) = a.to_fraction(mx, g) else { return false };
        match b.from_fraction(my, &f) {
            Some(e) => b.ring(my).radical_member(&e, b.prime(y)),
            None => false,
        }
    })
}

/// Description of a local ring.
#[derive(Clone, Debug)]
pub struct Stalk {
    pub ring: FPAlgebra,
    pub prime: IdealFG,
    /// Listed elements known to be inverted.
    pub inverted: Vec<MPoly>,
}

impl Stalk {
    pub fn is_field(&self) -> bool {
        self.prime.is_zero_ideal()
    }

    pub fn describe(&self) -> String {
        if self.prime.is_zero_ideal() {
            return format!("Frac({})", self.ring);
        }
        let g: Vec<String> = self.prime.gens().iter().map(|p| self.ring.format(p)).collect();
        format!("{} localized at ({})", self.ring, g.join(", "))
    }
}
