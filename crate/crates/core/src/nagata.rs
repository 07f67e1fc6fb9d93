//! Compactification of curve models through the Zariski–Riemann space, and
//! toric fans in the positive quadrant with star subdivision.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::report::Report;
use crate::scheme::{glue, ASchemeModel, ASchemeMor, Glued};
use crate::zr::{center, check_proper, place_patch, place_point_map, place_sample, places_of_model, Center, Place, ZROpen};

/// A model `X` of `ℚ(t)` covered by two opens, with a model `Y_i` for each
/// open that contains it openly.
#[derive(Clone, Debug)]
pub struct CompactifyInput {
    pub x: ASchemeModel,
    pub v: [PointSet; 2],
    pub charts: [ASchemeModel; 2],
}

#[derive(Clone, Debug)]
pub struct Compactification {
    pub glued: Glued,
    pub immersion: ASchemeMor,
    /// `ZR ∖ closure(V₂ ∖ V₁)` and `ZR ∖ closure(V₁ ∖ V₂)`.
    pub w: [ZROpen; 2],
    pub added_points: usize,
    pub proper: bool,
    /// Whether `W₁ ∩ W₂ = V₁ ∩ V₂` held on the place sample.
    pub w_equality: bool,
    pub report: Report,
}

fn centered_in(v: &Place, m: &ASchemeModel, s: PointSet) -> Result<bool> {
    Ok(match center(v, m)? {
        Center::Unique(x) => s.contains(x),
        Center::Multiple(xs) => xs.iter().any(|&x| s.contains(x)),
        Center::Absent => false,
    })
}

/// Closure inside the Zariski–Riemann space: the trivial place specializes
/// to every place, closed places only to themselves.
fn zr_closure(s: &BTreeSet<Place>, sample: &[Place]) -> BTreeSet<Place> {
    if s.contains(&Place::Trivial) {
        sample.iter().cloned().collect()
    } else {
        s.clone()
    }
}

fn complement(s: &BTreeSet<Place>) -> Result<ZROpen> {
    if s.contains(&Place::Trivial) {
        Ok(ZROpen::Empty)
    } else {
        ZROpen::excluding(s.iter().cloned())
    }
}

fn places_in(m: &ASchemeModel, s: PointSet, sample: &[Place]) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::new();
    for v in sample {
        if centered_in(v, m, s)? {
            out.insert(v.clone());
        }
    }
    Ok(out)
}

/// Glues the two charts along the places they share after checking that
/// the closures of `V₂ ∖ V₁` and `V₁ ∖ V₂` in the Zariski–Riemann space are
/// disjoint, then verifies that `X → Y` is an open immersion and that `Y`
/// is proper.
pub fn compactify(input: &CompactifyInput) -> Result<Compactification> {
    let x = &input.x;
    let [v1, v2] = input.v;
    let mut rep = Report::new();
    let all = x.space().all();
    if x.open_index(v1).is_none() || x.open_index(v2).is_none() {
        return Err(Error::MalformedModel("the cover must consist of opens".into()));
    }
    if v1.union(v2) != all {
        return Err(Error::MalformedModel("the two opens do not cover the model".into()));
    }
    let [y1, y2] = &input.charts;
    let sample = place_sample(&[places_of_model(x), places_of_model(y1), places_of_model(y2)].concat());

    let c2 = zr_closure(&places_in(x, v2.difference(v1), &sample)?, &sample);
    let c1 = zr_closure(&places_in(x, v1.difference(v2), &sample)?, &sample);
    let clash: Vec<String> = c1.intersection(&c2).map(|v| v.to_string()).collect();
    if !clash.is_empty() {
        return Err(Error::NotSeparated(format!("closures meet in {}", clash.join(", "))));
    }
    rep.pass("closures.disjoint");
    let w = [complement(&c2)?, complement(&c1)?];
    let in_w = |i: usize, v: &Place| w[i].contains(v);
    rep.push("cover", sample.iter().all(|v| in_w(0, v) || in_w(1, v)), None);
    let img = [places_in(x, v1, &sample)?, places_in(x, v2, &sample)?];
    for i in 0..2 {
        let bad: Vec<String> = img[i].iter().filter(|v| !in_w(i, v)).map(|v| v.to_string()).collect();
        rep.push(format!("v{}.inside_w{}", i + 1, i + 1), bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));
    }
    let overlap: BTreeSet<Place> = img[0].intersection(&img[1]).cloned().collect();
    let w12: BTreeSet<Place> = sample.iter().filter(|v| in_w(0, v) && in_w(1, v)).cloned().collect();
    rep.push("overlap.inside", overlap.is_subset(&w12), None);
    let w_equality = overlap == w12;

    for (i, (vi, yi)) in [(v1, y1), (v2, y2)].into_iter().enumerate() {
        let (sub, _) = x.open_submodel(vi)?;
        let pm = place_point_map(&sub, yi)?;
        let f = ASchemeMor::from_fields(&sub, yi, pm, None)?;
        rep.merge(&format!("chart{}", i + 1), f.check());
    }

    let pieces = vec![y1.clone(), y2.clone()];
    let patch = place_patch(&pieces, 0, 1)?;
    let glued = glue(&pieces, &[patch])?;
    let y = &glued.model;
    rep.push("separated", glued.separated, None);
    let proper_rep = check_proper(y)?;
    let proper = proper_rep.ok();
    rep.merge("proper", proper_rep);

    let pm = place_point_map(x, y)?;
    let immersion = ASchemeMor::from_fields(x, y, pm.clone(), None)?;
    rep.merge("immersion", immersion.check());
    let image = PointSet::from_indices(pm.iter().copied());
    rep.push("immersion.injective", image.len() == x.npoints(), None);
    rep.push("immersion.open", y.open_index(image).is_some(), None);
    let mut bad = Vec::new();
    let k = y.field().ok_or_else(|| Error::MalformedModel("glued model has no function field".into()))?;
    for (u, &ou) in x.opens().iter().enumerate() {
        if ou.is_empty() {
            continue;
        }
        let fu = PointSet::from_indices(ou.iter().map(|p| pm[p]));
        if let Some(j) = y.open_index(fu) {
            if let (Some(a), Some(b)) = (&x.section(u).embedding, &y.section(j).embedding) {
                if !k.subring_eq(a, b) {
                    bad.push(x.space().labels_of(ou));
                }
            }
        }
    }
    rep.push("immersion.sections", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));
    let added_points = y.npoints() - image.len();
    Ok(Compactification { glued, immersion, w, added_points, proper, w_equality, report: rep })
}

/// `x^a y^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonomialFraction {
    pub a: i64,
    pub b: i64,
}

impl MonomialFraction {
    pub fn new(a: i64, b: i64) -> Self {
        MonomialFraction { a, b }
    }

    pub fn pairing(&self, w: (i64, i64)) -> i64 {
        w.0 * self.a + w.1 * self.b
    }

    /// The primitive ray of the quadrant on which the pairing vanishes, when
    /// it is not an axis.
    pub fn kernel_ray(&self) -> Option<(i64, i64)> {
        if (self.a > 0 && self.b < 0) || (self.a < 0 && self.b > 0) {
            let (x, y) = (self.b.abs(), self.a.abs());
            let g = gcd(x, y);
            Some((x / g, y / g))
        } else {
            None
        }
    }
}

impl fmt::Display for MonomialFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{}", self.a, self.b)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn cross(p: (i64, i64), q: (i64, i64)) -> i64 {
    p.0 * q.1 - p.1 * q.0
}

/// A complete fan of the positive quadrant: rays from `(1, 0)` to `(0, 1)`
/// by increasing angle, cones between consecutive rays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan2D {
    rays: Vec<(i64, i64)>,
}

impl Default for Fan2D {
    fn default() -> Self {
        Fan2D::trivial()
    }
}

impl Fan2D {
    pub fn trivial() -> Self {
        Fan2D { rays: vec![(1, 0), (0, 1)] }
    }

    pub fn from_rays(rays: &[(i64, i64)]) -> Result<Self> {
        let mut f = Fan2D::trivial();
        for &r in rays {
            f = star_subdivide(&f, r)?;
        }
        Ok(f)
    }

    pub fn rays(&self) -> &[(i64, i64)] {
        &self.rays
    }

    pub fn cones(&self) -> Vec<((i64, i64), (i64, i64))> {
        self.rays.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Cones containing `w`: one for an interior weight, two for an inner
    /// ray.
    pub fn cones_containing(&self, w: (i64, i64)) -> Vec<((i64, i64), (i64, i64))> {
        self.cones().into_iter().filter(|&(p, q)| cross(p, w) >= 0 && cross(w, q) >= 0).collect()
    }

    /// Every ray of `self` is a ray of `finer`.
    pub fn refined_by(&self, finer: &Fan2D) -> bool {
        self.rays.iter().all(|r| finer.rays.contains(r))
    }

    pub fn check(&self) -> Result<()> {
        if self.rays.first() != Some(&(1, 0)) || self.rays.last() != Some(&(0, 1)) {
            return Err(Error::InvalidFan("rays must run from (1, 0) to (0, 1)".into()));
        }
        for &r in &self.rays {
            check_ray(r)?;
        }
        if self.rays.windows(2).any(|w| cross(w[0], w[1]) <= 0) {
            return Err(Error::InvalidFan("rays are not strictly increasing in angle".into()));
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph fan {\n  node [shape=point];\n  origin [shape=circle, label=\"0\"];\n");
        for (i, r) in self.rays.iter().enumerate() {
            s.push_str(&format!("  r{i} [xlabel=\"({}, {})\", pos=\"{},{}!\"];\n", r.0, r.1, r.0, r.1));
        }
        for i in 0..self.rays.len() {
            s.push_str(&format!("  origin -- r{i};\n"));
        }
        for i in 1..self.rays.len() {
            s.push_str(&format!("  r{} -- r{i} [style=dashed, label=\"σ{i}\"];\n", i - 1));
        }
        s.push_str("}\n");
        s
    }
}

fn check_ray(r: (i64, i64)) -> Result<()> {
    if r.0 < 0 || r.1 < 0 || r == (0, 0) {
        return Err(Error::RayOutsideQuadrant(r));
    }
    if gcd(r.0, r.1) != 1 {
        return Err(Error::InvalidFan(format!("ray ({}, {}) is not primitive", r.0, r.1)));
    }
    Ok(())
}

/// Inserts a primitive ray into the cone containing it.
pub fn star_subdivide(f: &Fan2D, ray: (i64, i64)) -> Result<Fan2D> {
    check_ray(ray)?;
    if f.rays.contains(&ray) {
        return Ok(f.clone());
    }
    let pos = f.rays.iter().position(|&r| cross(r, ray) < 0).expect("(0, 1) lies after every ray");
    let mut rays = f.rays.clone();
    rays.insert(pos, ray);
    Ok(Fan2D { rays })
}

/// The pairing of `frac` with the two rays of the cone never changes sign.
pub fn sign_resolved(cone: ((i64, i64), (i64, i64)), frac: &MonomialFraction) -> bool {
    frac.pairing(cone.0).signum() * frac.pairing(cone.1).signum() >= 0
}

/// Subdivides `f` along the kernel ray of each fraction.
pub fn refine_by(f: &Fan2D, fracs: &[MonomialFraction]) -> Fan2D {
    let mut out = f.clone();
    for r in fracs.iter().filter_map(MonomialFraction::kernel_ray) {
        out = star_subdivide(&out, r).expect("kernel rays are primitive and inside the quadrant");
    }
    out
}

/// The coarsest fan on whose cones every fraction or its inverse is
/// regular.
pub fn resolve_fractions(fracs: &[MonomialFraction]) -> Fan2D {
    refine_by(&Fan2D::trivial(), fracs)
}

/// Per cone and fraction, whether the sign is constant.
pub fn check_resolution(f: &Fan2D, fracs: &[MonomialFraction]) -> Report {
    let mut rep = Report::new();
    for (p, q) in f.cones() {
        for fr in fracs {
            rep.push(format!("cone ⟨{p:?}, {q:?}⟩ on {fr}"), sign_resolved((p, q), fr), None);
        }
    }
    rep
}

/// Fans after each stage of fractions, starting from the trivial fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanTower {
    pub fans: Vec<Fan2D>,
    pub fractions: Vec<MonomialFraction>,
}

impl FanTower {
    /// First stage at which every cone containing `w` resolves every
    /// fraction of the tower.
    pub fn resolution_stage(&self, w: (i64, i64)) -> Option<usize> {
        self.fans.iter().position(|f| f.cones_containing(w).iter().all(|&c| self.fractions.iter().all(|fr| sign_resolved(c, fr))))
    }

    /// Stages refine one another and every primitive weight with
    /// coordinates up to `bound` is resolved at some stage.
    pub fn check(&self, bound: i64) -> Report {
        let mut rep = Report::new();
        rep.push("monotone", self.fans.windows(2).all(|w| w[0].refined_by(&w[1])), None);
        let mut missing = Vec::new();
        for a in 0..=bound {
            for b in 0..=bound {
                if (a, b) != (0, 0) && gcd(a, b) == 1 && self.resolution_stage((a, b)).is_none() {
                    missing.push(format!("({a}, {b})"));
                }
            }
        }
        rep.push("weights.resolved", missing.is_empty(), (!missing.is_empty()).then(|| missing.join(", ")));
        rep
    }
}

pub fn fan_tower(stages: &[Vec<MonomialFraction>]) -> FanTower {
    let mut fans = vec![Fan2D::trivial()];
    let mut fractions = Vec::new();
    for s in stages {
        fans.push(refine_by(fans.last().unwrap(), s));
        fractions.extend(s.iter().copied());
    }
    FanTower { fans, fractions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{affine_line_with, doubled_origin, projective_line};
    use crate::dlat::DEFAULT_CAP;
    use crate::poly::{FPAlgebra, Fraction};
    use crate::scheme::{affine, FunctionField};

    fn chart(var: &str, basics: &[&str], as_fraction: &str) -> ASchemeModel {
        let b = FPAlgebra::polynomial_ring(&[var]);
        let bs: Vec<_> = basics.iter().map(|s| b.poly(s).unwrap()).collect();
        let m = affine(&b, &bs, true, DEFAULT_CAP).unwrap();
        let k = FunctionField::new(crate::corpus::line_algebra());
        let f = Fraction::parse(&k.base, as_fraction).unwrap();
        m.reembed(k, &[f]).unwrap()
    }

    fn two_chart_line() -> CompactifyInput {
        let x = affine_line_with(&["t", "t - 1"]).unwrap();
        let t = x.global_ring().poly("t").unwrap();
        let t1 = x.global_ring().poly("t - 1").unwrap();
        let all = x.space().all();
        let v1 = all.difference(x.support_of(x.global(), &t));
        let v2 = all.difference(x.support_of(x.global(), &t1));
        let y1 = chart("s", &["s", "s - 1"], "1/t");
        let y2 = chart("r", &["r", "r + 1"], "1/(t - 1)");
        CompactifyInput { x, v: [v1, v2], charts: [y1, y2] }
    }

    #[test]
    fn two_chart_affine_line() {
        let c = compactify(&two_chart_line()).unwrap();
        assert!(c.report.ok(), "{:?}", c.report.failures().collect::<Vec<_>>());
        assert!(c.proper);
        assert_eq!(c.added_points, 1);
        assert!(!c.w_equality);
        assert_eq!(c.w[0], ZROpen::excluding([Place::parse("t").unwrap()]).unwrap());
    }

    #[test]
    fn proper_input_unchanged() {
        let p = projective_line().model;
        let all = p.space().all();
        let c = compactify(&CompactifyInput { x: p.clone(), v: [all, all], charts: [p.clone(), p.clone()] }).unwrap();
        assert!(c.report.ok(), "{:?}", c.report.failures().collect::<Vec<_>>());
        assert_eq!(c.added_points, 0);
        assert!(c.w_equality);
    }

    #[test]
    fn doubled_origin_rejected() {
        let d = doubled_origin();
        let v: Vec<PointSet> = d.inclusions.iter().map(|i| PointSet::from_indices(i.iter().copied())).collect();
        let a = crate::corpus::affine_line();
        let r = compactify(&CompactifyInput { x: d.model, v: [v[0], v[1]], charts: [a.clone(), a] });
        assert!(matches!(r, Err(Error::NotSeparated(_))), "{r:?}");
    }

    #[test]
    fn fans() {
        let t = Fan2D::trivial();
        let b = star_subdivide(&t, (1, 1)).unwrap();
        assert_eq!(b.rays(), &[(1, 0), (1, 1), (0, 1)]);
        assert_eq!(star_subdivide(&b, (1, 1)).unwrap(), b);
        assert_eq!(star_subdivide(&t, (2, 1)).unwrap().rays(), &[(1, 0), (2, 1), (0, 1)]);
        assert_eq!(star_subdivide(&t, (-1, 1)), Err(Error::RayOutsideQuadrant((-1, 1))));
        let xy = MonomialFraction::new(1, -1);
        let x2y = MonomialFraction::new(2, -1);
        let f = resolve_fractions(&[xy]);
        assert_eq!(f.rays(), &[(1, 0), (1, 1), (0, 1)]);
        assert!(check_resolution(&f, &[xy]).ok());
        assert_eq!(resolve_fractions(&[]), t);
        let f = resolve_fractions(&[xy, x2y]);
        assert_eq!(f.rays(), &[(1, 0), (1, 1), (1, 2), (0, 1)]);
        assert!(check_resolution(&f, &[xy, x2y]).ok());
        f.check().unwrap();
    }

    #[test]
    fn towers() {
        let xy = MonomialFraction::new(1, -1);
        let x2y = MonomialFraction::new(2, -1);
        let t = fan_tower(&[vec![xy], vec![x2y]]);
        assert_eq!(t.resolution_stage((1, 1)), Some(2));
        assert!(t.check(10).ok());
        let e = fan_tower(&[]);
        assert_eq!(e.resolution_stage((3, 7)), Some(0));
        let one = fan_tower(&[vec![xy]]);
        assert_eq!(one.resolution_stage((2, 1)), Some(1));
    }
}
