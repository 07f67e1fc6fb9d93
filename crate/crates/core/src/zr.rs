//! The Zariski–Riemann space of `ℚ(t)/ℚ`: places, valuations, domains,
//! section rings and centers on finite models.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poly::{FPAlgebra, Fraction, MPoly, MonomialOrder, UniPoly, Q};
use crate::report::Report;
use crate::scheme::{ASchemeModel, FunctionField, Patch};

/// A point of the Zariski–Riemann space of `ℚ(t)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// Order of vanishing at a monic irreducible polynomial.
    Finite(UniPoly),
    /// `-deg`.
    Infinite,
    /// The trivial valuation, the generic point.
    Trivial,
}

impl Ord for Place {
    fn cmp(&self, o: &Self) -> Ordering {
        fn rank(p: &Place) -> u8 {
            match p {
                Place::Trivial => 0,
                Place::Finite(_) => 1,
                Place::Infinite => 2,
            }
        }
        match (self, o) {
            (Place::Finite(a), Place::Finite(b)) => a.cmp_canonical(b),
            _ => rank(self).cmp(&rank(o)),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "v[{p}]"),
            Place::Infinite => write!(f, "v[inf]"),
            Place::Trivial => write!(f, "v[0]"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Place {
    /// The finite place of `p`, made monic. Irreducibility is checked up to
    /// degree 3; above that `p` must be squarefree without rational roots
    /// and is taken on trust.
    pub fn finite(p: &UniPoly) -> Result<Self> {
        let p = p.monic();
        match p.is_irreducible_low_degree() {
            Some(true) => Ok(Place::Finite(p)),
            Some(false) => Err(Error::InvalidFactored(format!("{p} is not irreducible"))),
            None if p.is_squarefree() && p.rational_roots().is_empty() => Ok(Place::Finite(p)),
            None => Err(Error::InvalidFactored(format!("{p} is not irreducible"))),
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        match src.trim() {
            "inf" | "∞" | "infinity" => Ok(Place::Infinite),
            "0" | "trivial" => Ok(Place::Trivial),
            s => {
                let ring = FPAlgebra::polynomial_ring(&["t"]);
                let p = UniPoly::from_mpoly(&ring.poly(s)?, 0).expect("one variable");
                Place::finite(&p)
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, Place::Trivial)
    }

    pub fn valuate(&self, a: &FactoredElem) -> i64 {
        match self {
            Place::Trivial => 0,
            Place::Infinite => -a.degree(),
            Place::Finite(p) => a.factors.iter().map(|f| f.exp * multiplicity(p, &f.poly) as i64).sum(),
        }
    }

    /// Valuation of a fraction over `ℚ[t]`; `None` for zero (`+∞`).
    pub fn valuate_fraction(&self, f: &Fraction) -> Option<i64> {
        let num = UniPoly::from_mpoly(&f.num, 0)?;
        let den = UniPoly::from_mpoly(&f.den, 0)?;
        if num.is_zero() {
            return None;
        }
        Some(match self {
            Place::Trivial => 0,
            Place::Infinite => den.degree() - num.degree(),
            Place::Finite(p) => multiplicity(p, &num) as i64 - multiplicity(p, &den) as i64,
        })
    }
}

fn multiplicity(p: &UniPoly, f: &UniPoly) -> u32 {
    let mut f = f.clone();
    let mut k = 0;
    while !f.is_zero() {
        let (q, r) = f.div_rem(p);
        if !r.is_zero() {
            break;
        }
        f = q;
        k += 1;
    }
    k
}

/// A monic squarefree factor with its exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: UniPoly,
    pub exp: i64,
    /// Irreducibility was decided (degree at most 3) rather than assumed.
    pub verified: bool,
}

/// `unit · ∏ p_i^{e_i}` with monic, squarefree, pairwise coprime `p_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredElem {
    pub unit: Q,
    pub factors: Vec<Factor>,
}

impl FactoredElem {
    pub fn new(unit: Q, factors: Vec<(UniPoly, i64)>) -> Result<Self> {
        if unit.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut out: Vec<Factor> = Vec::new();
        for (p, e) in factors {
            if p.is_constant() {
                return Err(Error::InvalidFactored("constant factor".into()));
            }
            if !p.is_monic() {
                return Err(Error::InvalidFactored(format!("{p} is not monic")));
            }
            if !p.is_squarefree() {
                return Err(Error::InvalidFactored(format!("{p} is not squarefree")));
            }
            let verified = match p.is_irreducible_low_degree() {
                Some(false) => return Err(Error::InvalidFactored(format!("{p} is reducible"))),
                Some(true) => true,
                None => false,
            };
            if let Some(f) = out.iter_mut().find(|f| f.poly == p) {
                f.exp += e;
                continue;
            }
            if let Some(f) = out.iter().find(|f| !f.poly.gcd(&p).is_constant()) {
                return Err(Error::InvalidFactored(format!("{} and {p} are not coprime", f.poly)));
            }
            out.push(Factor { poly: p, exp: e, verified });
        }
        out.retain(|f| f.exp != 0);
        out.sort_by(|a, b| a.poly.cmp_canonical(&b.poly));
        Ok(FactoredElem { unit, factors: out })
    }

    pub fn constant(c: Q) -> Result<Self> {
        Self::new(c, vec![])
    }

    /// Factors `num/den` over ℚ as far as rational roots and degree-3
    /// irreducibility allow; remaining factors of degree 4 and up are kept
    /// whole (squarefree parts) and marked unverified.
    pub fn from_polys(num: &UniPoly, den: &UniPoly) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroInput);
        }
        let unit = num.lead() / den.lead();
        let mut fs: Vec<(UniPoly, i64)> = Vec::new();
        for (p, sign) in [(num, 1), (den, -1)] {
            for (f, e) in factor(p) {
                fs.push((f, e * sign));
            }
        }
        // merge unverified blocks sharing factors by splitting on gcds
        let mut changed = true;
        while changed {
            changed = false;
            'outer: for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    if fs[i].0 == fs[j].0 {
                        continue;
                    }
                    let g = fs[i].0.gcd(&fs[j].0).monic();
                    if !g.is_constant() {
                        let (a, ea) = fs.remove(j);
                        let (b, eb) = fs.remove(i);
                        for (p, e) in [(a, ea), (b, eb)] {
                            let rest = p.div_rem(&g).0.monic();
                            if !rest.is_constant() {
                                fs.push((rest, e));
                            }
                            fs.push((g.clone(), e));
                        }
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        Self::new(unit, fs)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let ring = FPAlgebra::polynomial_ring(&["t"]);
        let (n, d) = ring.fraction_parts(src)?;
        Self::from_polys(&UniPoly::from_mpoly(&n, 0).unwrap(), &UniPoly::from_mpoly(&d, 0).unwrap())
    }

    pub fn from_fraction(f: &Fraction) -> Result<Self> {
        let n = UniPoly::from_mpoly(&f.num, 0).ok_or_else(|| Error::VariableMismatch("expected ℚ(t)".into()))?;
        let d = UniPoly::from_mpoly(&f.den, 0).ok_or_else(|| Error::VariableMismatch("expected ℚ(t)".into()))?;
        Self::from_polys(&n, &d)
    }

    /// `deg num − deg den`.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|f| f.exp * f.poly.degree()).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut fs: Vec<(UniPoly, i64)> = self.factors.iter().map(|f| (f.poly.clone(), f.exp)).collect();
        fs.extend(o.factors.iter().map(|f| (f.poly.clone(), f.exp)));
        Self::merge(&self.unit * &o.unit, fs)
    }

    pub fn inv(&self) -> Self {
        Self::merge(self.unit.recip(), self.factors.iter().map(|f| (f.poly.clone(), -f.exp)).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::constant(Q::one()).unwrap();
        for _ in 0..k.abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    fn merge(unit: Q, fs: Vec<(UniPoly, i64)>) -> Self {
        let (n, d) = expand(&fs);
        let mut out = Self::from_polys(&n, &d).expect("products of nonzero elements are nonzero");
        out.unit = unit;
        out
    }

    /// `(numerator, denominator)` with the unit in the numerator.
    pub fn expand(&self) -> (UniPoly, UniPoly) {
        let (n, d) = expand(&self.factors.iter().map(|f| (f.poly.clone(), f.exp)).collect::<Vec<_>>());
        (n.scale(&self.unit), d)
    }

    pub fn to_fraction(&self, k: &FunctionField) -> Fraction {
        let (n, d) = self.expand();
        Fraction { num: k.base.reduce(&n.to_mpoly(1, 0, MonomialOrder::Grevlex)), den: k.base.reduce(&d.to_mpoly(1, 0, MonomialOrder::Grevlex)) }
    }

    pub fn add(&self, o: &Self) -> Option<Self> {
        let (n1, d1) = self.expand();
        let (n2, d2) = o.expand();
        let n = n1.mul(&d2).add(&n2.mul(&d1));
        if n.is_zero() {
            return None;
        }
        Some(Self::from_polys(&n, &d1.mul(&d2)).expect("nonzero"))
    }

    /// Places where the element has a pole.
    pub fn poles(&self) -> BTreeSet<Place> {
        let mut out: BTreeSet<Place> = self.factors.iter().filter(|f| f.exp < 0).map(|f| Place::Finite(f.poly.clone())).collect();
        if self.degree() > 0 {
            out.insert(Place::Infinite);
        }
        out
    }

    /// Places where the element has a zero.
    pub fn zeros(&self) -> BTreeSet<Place> {
        self.inv().poles()
    }
}

impl fmt::Display for FactoredElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for x in &self.factors {
            write!(f, " * ({})^{}", x.poly, x.exp)?;
        }
        Ok(())
    }
}

fn expand(fs: &[(UniPoly, i64)]) -> (UniPoly, UniPoly) {
    let mut n = UniPoly::one();
    let mut d = UniPoly::one();
    for (p, e) in fs {
        if *e > 0 {
            n = n.mul(&p.pow(*e as u32));
        } else {
            d = d.mul(&p.pow((-e) as u32));
        }
    }
    (n, d)
}

/// Squarefree decomposition, with rational roots split off and remaining
/// blocks kept whole.
fn factor(p: &UniPoly) -> Vec<(UniPoly, i64)> {
    let mut out = Vec::new();
    let mut rest = p.monic();
    let mut k = 1;
    while !rest.is_constant() {
        let sq = rest.squarefree_part();
        let next = rest.div_rem(&sq).0.monic();
        let keep = sq.gcd(&next).monic();
        let mut block = sq.div_rem(&keep).0.monic();
        for r in block.rational_roots() {
            let lin = UniPoly::linear(r);
            block = block.div_rem(&lin).0.monic();
            out.push((lin, k));
        }
        if !block.is_constant() {
            out.push((block, k));
        }
        rest = next;
        k += 1;
    }
    out
}

/// An open of the Zariski–Riemann space: empty, or everything but finitely
/// many closed places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZROpen {
    Empty,
    Cofinite {
        #[serde(with = "place_set")]
        excluded: BTreeSet<Place>,
    },
}

mod place_set {
    use super::Place;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeSet;

    pub fn serialize<S: Serializer>(s: &BTreeSet<Place>, ser: S) -> Result<S::Ok, S::Error> {
        s.iter().map(|p| p.to_string()).collect::<Vec<_>>().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeSet<Place>, D::Error> {
        let v: Vec<String> = Vec::deserialize(de)?;
        v.iter()
            .map(|s| {
                let inner = s.trim().trim_start_matches("v[").trim_end_matches(']');
                Place::parse(inner).map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl ZROpen {
    pub fn whole() -> Self {
        ZROpen::Cofinite { excluded: BTreeSet::new() }
    }

    pub fn excluding(places: impl IntoIterator<Item = Place>) -> Result<Self> {
        let excluded: BTreeSet<Place> = places.into_iter().collect();
        if excluded.contains(&Place::Trivial) {
            return Err(Error::OutOfScope("nonempty opens contain the generic point".into()));
        }
        Ok(ZROpen::Cofinite { excluded })
    }

    pub fn contains(&self, v: &Place) -> bool {
        match self {
            ZROpen::Empty => false,
            ZROpen::Cofinite { excluded } => !excluded.contains(v),
        }
    }

    pub fn excluded(&self) -> Option<&BTreeSet<Place>> {
        match self {
            ZROpen::Empty => None,
            ZROpen::Cofinite { excluded } => Some(excluded),
        }
    }

    pub fn intersection(&self, o: &Self) -> Self {
        match (self, o) {
            (ZROpen::Cofinite { excluded: a }, ZROpen::Cofinite { excluded: b }) => ZROpen::Cofinite { excluded: a.union(b).cloned().collect() },
            _ => ZROpen::Empty,
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        match (self, o) {
            (ZROpen::Cofinite { excluded: a }, ZROpen::Cofinite { excluded: b }) => {
                ZROpen::Cofinite { excluded: a.intersection(b).cloned().collect() }
            }
            (ZROpen::Empty, x) | (x, ZROpen::Empty) => x.clone(),
        }
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        match (self, o) {
            (ZROpen::Empty, _) => true,
            (_, ZROpen::Empty) => false,
            (ZROpen::Cofinite { excluded: a }, ZROpen::Cofinite { excluded: b }) => b.is_subset(a),
        }
    }
}

impl fmt::Display for ZROpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZROpen::Empty => write!(f, "∅"),
            ZROpen::Cofinite { excluded } if excluded.is_empty() => write!(f, "ZR"),
            ZROpen::Cofinite { excluded } => {
                let e: Vec<String> = excluded.iter().map(|p| p.to_string()).collect();
                write!(f, "ZR \\ {{{}}}", e.join(", "))
            }
        }
    }
}

/// `{v : v(a) ≥ 0}`.
pub fn domain(a: &FactoredElem) -> ZROpen {
    ZROpen::Cofinite { excluded: a.poles() }
}

pub fn line_field() -> FunctionField {
    FunctionField::new(FPAlgebra::polynomial_ring(&["t"]))
}

/// Generators of `⋂_{v ∈ U} R_v` inside `ℚ(t)`.
pub fn sections(u: &ZROpen) -> Result<Vec<Fraction>> {
    let k = line_field();
    let excluded = u.excluded().ok_or(Error::EmptyOpen)?;
    let finite: Vec<&UniPoly> = excluded
        .iter()
        .filter_map(|p| match p {
            Place::Finite(q) => Some(q),
            _ => None,
        })
        .collect();
    let mono = |p: &UniPoly| p.to_mpoly(1, 0, MonomialOrder::Grevlex);
    let mut gens = Vec::new();
    if excluded.contains(&Place::Infinite) {
        gens.push(k.parse("t")?);
        for p in finite {
            gens.push(Fraction { num: k.base.one(), den: mono(p) });
        }
    } else {
        for p in finite {
            for i in 0..p.degree() {
                gens.push(Fraction { num: mono(&UniPoly::t().pow(i as u32)), den: mono(p) });
            }
        }
    }
    Ok(gens)
}

/// Membership in the sections over `u`, read off the poles.
pub fn in_sections(u: &ZROpen, a: &FactoredElem) -> bool {
    u.is_subset(&domain(a))
}

/// Two-sided comparison of `⋂_{v∈U} R_v` with `ℚ[gens]`: every generator
/// is regular on `U`, and every generator of the sections lies in `ℚ[gens]`.
pub fn sections_equal(u: &ZROpen, gens: &[Fraction]) -> Result<bool> {
    let k = line_field();
    for g in gens {
        if k.is_zero(g) {
            continue;
        }
        if !in_sections(u, &FactoredElem::from_fraction(g)?) {
            return Ok(false);
        }
    }
    let s = sections(u)?;
    Ok(k.subring_le(&s, gens))
}

/// A finite list of places: the trivial one, infinity, `t - c` for small
/// `c`, a few irreducible quadratics and a cubic, and any `extra`.
pub fn place_sample(extra: &[Place]) -> Vec<Place> {
    let mut out: BTreeSet<Place> = BTreeSet::new();
    out.insert(Place::Trivial);
    out.insert(Place::Infinite);
    for c in -3..=3 {
        out.insert(Place::Finite(UniPoly::from_ints(&[-c, 1])));
    }
    for p in [&[1, 0, 1][..], &[-2, 0, 1], &[1, 1, 1], &[-2, 0, 0, 1]] {
        out.insert(Place::Finite(UniPoly::from_ints(p)));
    }
    out.extend(extra.iter().cloned());
    out.into_iter().collect()
}

/// Places of the zeros and poles of every listed element and every
/// embedding generator of a model.
pub fn places_of_model(m: &ASchemeModel) -> Vec<Place> {
    let mut out = BTreeSet::new();
    let Some(k) = m.field() else { return vec![] };
    for u in 0..m.opens().len() {
        let s = m.section(u);
        let mut fr: Vec<Fraction> = s.embedding.clone().unwrap_or_default();
        for l in &s.listed {
            if let Some(f) = m.to_fraction(u, &l.elem) {
                fr.push(f);
            }
        }
        for f in fr {
            if k.is_zero(&f) {
                continue;
            }
            if let Ok(a) = FactoredElem::from_fraction(&f) {
                out.extend(a.poles());
                out.extend(a.zeros());
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    Unique(usize),
    Absent,
    Multiple(Vec<usize>),
}

fn check_line_model(m: &ASchemeModel) -> Result<&FunctionField> {
    let k = m.field().ok_or_else(|| Error::MalformedModel("model has no function field".into()))?;
    if k.base.nvars() != 1 || !k.base.relations().is_empty() {
        return Err(Error::OutOfScope("centers are computed for models of ℚ(t) only".into()));
    }
    Ok(k)
}

/// Whether `R_v` dominates the local ring of the point `x`: the ring over
/// the smallest open around `x` lies in `R_v`, and a listed element there
/// has positive value exactly when it vanishes at `x`.
pub fn dominates(v: &Place, m: &ASchemeModel, x: usize) -> Result<bool> {
    check_line_model(m)?;
    let u = m.umin(x);
    let s = m.section(u);
    let emb = s.embedding.as_ref().ok_or_else(|| Error::MalformedModel("open without embedding".into()))?;
    for f in emb {
        if v.valuate_fraction(f).is_some_and(|e| e < 0) {
            return Ok(false);
        }
    }
    let ring = m.ring(u);
    let mut elems: Vec<MPoly> = s.listed.iter().map(|l| l.elem.clone()).collect();
    elems.extend(m.prime(x).gens().iter().cloned());
    for e in elems {
        let f = m.to_fraction(u, &e).unwrap();
        let positive = v.valuate_fraction(&f).is_none_or(|e| e > 0);
        if positive != ring.radical_member(&e, m.prime(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The point whose local ring `R_v` dominates.
pub fn center(v: &Place, m: &ASchemeModel) -> Result<Center> {
    let mut found = Vec::new();
    for x in 0..m.npoints() {
        if dominates(v, m, x)? {
            found.push(x);
        }
    }
    Ok(match found.len() {
        0 => Center::Absent,
        1 => Center::Unique(found[0]),
        _ => Center::Multiple(found),
    })
}

/// Every place of the sample (plus the model's own places) has a center.
pub fn check_proper(m: &ASchemeModel) -> Result<Report> {
    let mut rep = Report::new();
    for v in place_sample(&places_of_model(m)) {
        match center(&v, m)? {
            Center::Absent => rep.fail(format!("center {v}"), "no center"),
            Center::Multiple(xs) => rep.fail(format!("center {v}"), format!("{} centers", xs.len())),
            Center::Unique(_) => rep.pass(format!("center {v}")),
        }
    }
    Ok(rep)
}

/// The open of places centered inside the model open `u`.
pub fn zr_image(m: &ASchemeModel, u: PointSet, sample: &[Place]) -> Result<ZROpen> {
    if u.is_empty() {
        return Ok(ZROpen::Empty);
    }
    let mut out = BTreeSet::new();
    for v in sample {
        let inside = match center(v, m)? {
            Center::Unique(x) => u.contains(x),
            Center::Multiple(xs) => xs.iter().any(|&x| u.contains(x)),
            Center::Absent => false,
        };
        if !inside {
            out.insert(v.clone());
        }
    }
    ZROpen::excluding(out)
}

/// The place attached to a point: the trivial valuation for the generic
/// point, otherwise the unique sampled place with center `x` whose maximal
/// ideal meets the local ring in exactly the prime of `x`.
pub fn point_place(m: &ASchemeModel, x: usize, sample: &[Place]) -> Result<Option<Place>> {
    if m.prime(x).is_zero_ideal() {
        return Ok(Some(Place::Trivial));
    }
    let mut hits = Vec::new();
    for v in sample.iter().filter(|v| v.is_closed()) {
        if dominates(v, m, x)? {
            hits.push(v.clone());
        }
    }
    // a closed point of a finite model carries one closed place when its
    // prime is generated by a place's uniformizer
    let u = m.umin(x);
    hits.retain(|v| {
        m.prime(x).gens().iter().any(|g| {
            let f = m.to_fraction(u, g).unwrap();
            v.valuate_fraction(&f) == Some(1)
        })
    });
    Ok(if hits.len() == 1 { hits.pop() } else { None })
}

/// Result of comparing a model of `ℚ(t)` with the Zariski–Riemann space.
#[derive(Clone, Debug)]
pub struct ZRImmersion {
    pub image: ZROpen,
    pub opens: Vec<ZROpen>,
    pub point_places: Vec<Option<Place>>,
    pub report: Report,
}

/// Maps the opens of a model of `ℚ(t)` to opens of the Zariski–Riemann
/// space (over a place sample) and compares section rings.
pub fn zr_immersion(m: &ASchemeModel) -> Result<ZRImmersion> {
    let sample = place_sample(&places_of_model(m));
    let mut rep = Report::new();
    let mut opens = Vec::new();
    let mut bad = Vec::new();
    for (u, &ou) in m.opens().iter().enumerate() {
        let img = zr_image(m, ou, &sample)?;
        if !ou.is_empty() {
            let emb = m.section(u).embedding.as_ref().ok_or_else(|| Error::MalformedModel("open without embedding".into()))?;
            if !sections_equal(&img, emb)? {
                bad.push(format!("{} ≠ 𝒪({:?})", img, ou));
            }
        }
        opens.push(img);
    }
    if bad.is_empty() {
        rep.pass("sections.agree");
    } else {
        rep.fail("sections.agree", bad.join("; "));
    }
    let mut point_places = Vec::new();
    for x in 0..m.npoints() {
        point_places.push(point_place(m, x, &sample)?);
    }
    let named: Vec<&Place> = point_places.iter().flatten().collect();
    let distinct: BTreeSet<&Place> = named.iter().copied().collect();
    if named.len() == m.npoints() && distinct.len() == named.len() {
        rep.pass("points.injective");
    } else {
        rep.fail("points.injective", format!("{:?}", point_places));
    }
    let mut bad = Vec::new();
    for (x, p) in point_places.iter().enumerate() {
        if let Some(p) = p {
            if center(p, m)? != Center::Unique(x) {
                bad.push(format!("{p} is not centered at {}", m.space().labels()[x]));
            }
        }
    }
    if bad.is_empty() {
        rep.pass("points.centered");
    } else {
        rep.fail("points.centered", bad.join("; "));
    }
    let image = opens[m.global()].clone();
    Ok(ZRImmersion { image, opens, point_places, report: rep })
}

/// The affine-line model inside the Zariski–Riemann space: the image must
/// be everything but `v_∞`, with sections `ℚ[t]` there and `ℚ` overall.
pub fn zr_of_affine_line() -> Result<ZRImmersion> {
    let x = crate::corpus::affine_line();
    let mut imm = zr_immersion(&x)?;
    let k = line_field();
    let expected = ZROpen::excluding([Place::Infinite])?;
    if imm.image == expected {
        imm.report.pass("image.complement");
    } else {
        imm.report.fail("image.complement", format!("image is {}", imm.image));
    }
    let t = vec![k.parse("t")?];
    imm.report.push("sections.image", sections_equal(&expected, &t)?, None);
    imm.report.push("sections.whole", sections_equal(&ZROpen::whole(), &[])?, None);
    let generic = x.space().generic_points()[0];
    imm.report.push("generic.trivial", imm.point_places[generic] == Some(Place::Trivial), None);
    Ok(imm)
}

/// Point map between models of `ℚ(t)`: each point goes to the center of
/// its place.
pub fn place_point_map(x: &ASchemeModel, y: &ASchemeModel) -> Result<Vec<usize>> {
    let sample = place_sample(&[places_of_model(x), places_of_model(y)].concat());
    (0..x.npoints())
        .map(|p| {
            let label = &x.space().labels()[p];
            let v = point_place(x, p, &sample)?.ok_or_else(|| Error::InvalidHom(format!("no place for {label}")))?;
            match center(&v, y)? {
                Center::Unique(q) => Ok(q),
                c => Err(Error::InvalidHom(format!("{v} at {label} has center {c:?} in the target"))),
            }
        })
        .collect()
}

/// Patch between two curve models identifying points with the same place.
pub fn place_patch(pieces: &[ASchemeModel], left: usize, right: usize) -> Result<Patch> {
    let (a, b) = (&pieces[left], &pieces[right]);
    let sample = place_sample(&[places_of_model(a), places_of_model(b)].concat());
    let mut point_map = Vec::new();
    for x in 0..a.npoints() {
        let v = point_place(a, x, &sample)?.ok_or_else(|| Error::IncompatiblePatch(format!("no place for {}", a.space().labels()[x])))?;
        match center(&v, b)? {
            Center::Unique(y) => point_map.push((x, y)),
            Center::Absent => {}
            Center::Multiple(_) => return Err(Error::IncompatiblePatch(format!("{v} has several centers"))),
        }
    }
    Ok(Patch {
        left,
        right,
        left_open: PointSet::from_indices(point_map.iter().map(|p| p.0)),
        right_open: PointSet::from_indices(point_map.iter().map(|p| p.1)),
        point_map,
    })
}

/// DOT drawing of a set of places: the generic point above the closed ones.
pub fn places_dot(places: &[Place]) -> String {
    let mut s = String::from("digraph zr {\n  rankdir=BT;\n");
    let mut sorted = places.to_vec();
    sorted.sort();
    sorted.dedup();
    for (i, p) in sorted.iter().enumerate() {
        s.push_str(&format!("  n{i} [label=\"{p}\"];\n"));
    }
    if let Some(g) = sorted.iter().position(|p| *p == Place::Trivial) {
        for (i, p) in sorted.iter().enumerate() {
            if p.is_closed() {
                s.push_str(&format!("  n{i} -> n{g};\n"));
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{affine_line, projective_line};

    fn fe(s: &str) -> FactoredElem {
        FactoredElem::parse(s).unwrap()
    }

    fn pl(s: &str) -> Place {
        Place::parse(s).unwrap()
    }

    #[test]
    fn valuations() {
        let a = fe("t^3/(t - 1)");
        assert_eq!(pl("t").valuate(&a), 3);
        assert_eq!(Place::Infinite.valuate(&a), -2);
        assert_eq!(pl("t - 1").valuate(&a), -1);
        assert_eq!(Place::Trivial.valuate(&a), 0);
    }

    #[test]
    fn domains() {
        let d = domain(&fe("t/(t - 1)^2"));
        assert_eq!(d, ZROpen::excluding([pl("t - 1")]).unwrap());
        assert_eq!(domain(&fe("5")), ZROpen::whole());
        assert_eq!(domain(&fe("t")), ZROpen::excluding([Place::Infinite]).unwrap());
        assert!(FactoredElem::parse("0").is_err());
    }

    #[test]
    fn section_rings() {
        let k = line_field();
        let no_inf = ZROpen::excluding([Place::Infinite]).unwrap();
        assert!(sections_equal(&no_inf, &[k.parse("t").unwrap()]).unwrap());
        assert!(sections_equal(&ZROpen::whole(), &[]).unwrap());
        let laurent = ZROpen::excluding([Place::Infinite, pl("t")]).unwrap();
        assert!(sections_equal(&laurent, &[k.parse("t").unwrap(), k.parse("1/t").unwrap()]).unwrap());
        assert!(!sections_equal(&laurent, &[k.parse("t").unwrap()]).unwrap());
        let quad = ZROpen::excluding([pl("t^2 + 1")]).unwrap();
        let g = sections(&quad).unwrap();
        assert!(k.contains(&g, &k.parse("t^2/(t^2 + 1)^2").unwrap()));
        assert!(!k.contains(&g, &k.parse("t^3/(t^2 + 1)").unwrap()));
    }

    #[test]
    fn centers() {
        let a = affine_line();
        let closed = a.space().closed_points()[0];
        assert_eq!(center(&pl("t"), &a).unwrap(), Center::Unique(closed));
        assert_eq!(center(&Place::Infinite, &a).unwrap(), Center::Absent);
        let p = projective_line().model;
        let inf = p.space().labels().iter().position(|l| l == "∞").unwrap();
        assert_eq!(center(&Place::Infinite, &p).unwrap(), Center::Unique(inf));
        assert!(check_proper(&p).unwrap().ok());
        let r = check_proper(&a).unwrap();
        let fails: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(fails, vec!["center v[inf]"]);
    }

    #[test]
    fn affine_line_immersion() {
        let imm = zr_of_affine_line().unwrap();
        assert!(imm.report.ok(), "{:?}", imm.report);
    }

    #[test]
    fn unverified_factors() {
        let a = fe("1/(t^4 + 1)");
        assert!(!a.factors[0].verified);
        assert_eq!(Place::Infinite.valuate(&a), 4);
        assert!(FactoredElem::new(Q::one(), vec![(UniPoly::from_ints(&[-1, 0, 1]), 1)]).is_err());
    }
}
