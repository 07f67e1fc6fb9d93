use std::collections::BTreeMap;

use super::model::{apply_hom, ASchemeModel};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poly::{Fraction, MPoly};
use crate::report::Report;

/// A morphism of models `X → Y`: a map of points and, for every open `V`
/// of `Y`, images of the generators of `𝒪_Y(V)` in `𝒪_X(f⁻¹V)`.
#[derive(Clone, Debug)]
pub struct ASchemeMor {
    pub source: ASchemeModel,
    pub target: ASchemeModel,
    pub point_map: Vec<usize>,
    pub ring_maps: BTreeMap<usize, Vec<MPoly>>,
}

impl ASchemeMor {
    pub fn identity(x: &ASchemeModel) -> Self {
        let ring_maps = (0..x.opens().len()).map(|u| (u, (0..x.ring(u).nvars()).map(|i| x.ring(u).var(i)).collect())).collect();
        ASchemeMor { source: x.clone(), target: x.clone(), point_map: (0..x.npoints()).collect(), ring_maps }
    }

    /// Ring maps induced by a map of function fields `K_Y → K_X`, given by
    /// the images of `K_Y`'s base variables (`None`: same base, identity).
    pub fn from_fields(source: &ASchemeModel, target: &ASchemeModel, point_map: Vec<usize>, field_map: Option<&[Fraction]>) -> Result<Self> {
        let kx = source.field().ok_or_else(|| Error::InvalidHom("source has no function field".into()))?;
        if target.field().is_none() {
            return Err(Error::InvalidHom("target has no function field".into()));
        }
        if point_map.len() != source.npoints() || point_map.iter().any(|&p| p >= target.npoints()) {
            return Err(Error::InvalidHom("point map has the wrong shape".into()));
        }
        let mut ring_maps = BTreeMap::new();
        for v in 0..target.opens().len() {
            let pre = preimage(&point_map, target.opens()[v], source.npoints());
            let u = source.open_index(pre).ok_or_else(|| Error::InvalidHom("point map is not continuous".into()))?;
            let ring_u = source.ring(u);
            let imgs = if pre.is_empty() {
                vec![ring_u.zero(); target.ring(v).nvars()]
            } else {
                let emb =
                    target.section(v).embedding.as_ref().ok_or_else(|| Error::InvalidHom(format!("open {v} of the target has no embedding")))?;
                emb.iter()
                    .map(|f| {
                        let g = match field_map {
                            Some(m) => kx.map_fraction(f, m),
                            None => f.clone(),
                        };
                        source
                            .from_fraction(u, &g)
                            .ok_or_else(|| Error::InvalidHom(format!("a generator of the target ring over open {v} is not regular on its preimage")))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            ring_maps.insert(v, imgs);
        }
        Ok(ASchemeMor { source: source.clone(), target: target.clone(), point_map, ring_maps })
    }

    pub fn preimage(&self, v: PointSet) -> PointSet {
        preimage(&self.point_map, v, self.source.npoints())
    }

    fn source_open(&self, v: usize) -> Option<usize> {
        self.source.open_index(self.preimage(self.target.opens()[v]))
    }

    /// `f♯(a)` for `a ∈ 𝒪_Y(V)`.
    pub fn pullback(&self, v: usize, a: &MPoly) -> Option<MPoly> {
        let u = self.source_open(v)?;
        Some(apply_hom(a, &self.ring_maps[&v], self.source.ring(u)))
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &ASchemeMor) -> Result<ASchemeMor> {
        let point_map: Vec<usize> = self.point_map.iter().map(|&p| g.point_map[p]).collect();
        let mut ring_maps = BTreeMap::new();
        for w in 0..g.target.opens().len() {
            let v = g.source_open(w).ok_or_else(|| Error::InvalidHom("second map is not continuous".into()))?;
            let imgs = g.ring_maps[&w]
                .iter()
                .map(|p| self.pullback(v, p).ok_or_else(|| Error::InvalidHom("first map is not continuous".into())))
                .collect::<Result<Vec<_>>>()?;
            ring_maps.insert(w, imgs);
        }
        Ok(ASchemeMor { source: self.source.clone(), target: g.target.clone(), point_map, ring_maps })
    }

    pub fn check(&self) -> Report {
        check_morphism(self)
    }
}

pub fn preimage(point_map: &[usize], v: PointSet, n: usize) -> PointSet {
    PointSet::from_indices((0..n).filter(|&x| v.contains(point_map[x])))
}

/// Continuity, ring maps, compatibility with restrictions, and the support
/// square `β_X(f♯a) = f⁻¹β_Y(a)` on listed generators.
pub fn check_morphism(f: &ASchemeMor) -> Report {
    let mut rep = Report::new();
    let (x, y) = (&f.source, &f.target);
    if f.point_map.len() != x.npoints() || f.point_map.iter().any(|&p| p >= y.npoints()) {
        rep.fail("points", "point map has the wrong shape");
        return rep;
    }
    let mut bad = Vec::new();
    for v in 0..y.opens().len() {
        if f.source_open(v).is_none() {
            bad.push(format!("preimage of open {v} is not open"));
        }
    }
    if !x.space().is_continuous(y.space(), &f.point_map) {
        bad.push("specializations are not preserved".into());
    }
    if !bad.is_empty() {
        rep.fail("continuity", bad.join("; "));
        return rep;
    }
    rep.pass("continuity");

    let mut bad = Vec::new();
    for v in 0..y.opens().len() {
        let u = f.source_open(v).unwrap();
        let Some(imgs) = f.ring_maps.get(&v) else {
            bad.push(format!("no ring map over open {v}"));
            continue;
        };
        if imgs.len() != y.ring(v).nvars() {
            bad.push(format!("ring map over open {v} has the wrong arity"));
            continue;
        }
        for r in y.ring(v).relations() {
            if !apply_hom(r, imgs, x.ring(u)).is_zero() {
                bad.push(format!("relation {} not respected over open {v}", y.ring(v).format(r)));
            }
        }
    }
    let arity_ok = bad.is_empty();
    record(&mut rep, "ring_hom", bad);
    if !arity_ok {
        return rep;
    }

    let mut bad = Vec::new();
    for v in 0..y.opens().len() {
        for w in 0..y.opens().len() {
            if v == w || !y.opens()[w].is_subset(y.opens()[v]) {
                continue;
            }
            let (u, u2) = (f.source_open(v).unwrap(), f.source_open(w).unwrap());
            for i in 0..y.ring(v).nvars() {
                let z = y.ring(v).var(i);
                let a = x.restrict(u, u2, &f.pullback(v, &z).unwrap());
                let b = f.pullback(w, &y.restrict(v, w, &z)).unwrap();
                if !x.ring(u2).equal(&a, &b) {
                    bad.push(format!("generator {} along {v}->{w}", y.ring(v).vars()[i]));
                }
            }
        }
    }
    record(&mut rep, "restriction", bad);

    let mut bad = Vec::new();
    for v in 0..y.opens().len() {
        let u = f.source_open(v).unwrap();
        for l in &y.section(v).listed {
            let lhs = x.support_of(u, &f.pullback(v, &l.elem).unwrap());
            let rhs = f.preimage(l.support);
            if lhs != rhs {
                bad.push(format!("β({}) over open {v}: source {:?}, preimage {:?}", y.ring(v).format(&l.elem), lhs, rhs));
            }
        }
    }
    record(&mut rep, "support_square", bad);
    rep
}

fn record(rep: &mut Report, name: &str, bad: Vec<String>) {
    if bad.is_empty() {
        rep.pass(name);
    } else {
        rep.fail(name, bad.join("; "));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{affine_line, projective_line};
    use crate::dlat::DEFAULT_CAP;
    use crate::poly::FPAlgebra;
    use crate::scheme::affine;

    #[test]
    fn identities_pass() {
        for m in [affine_line(), projective_line().model] {
            let r = ASchemeMor::identity(&m).check();
            assert!(r.ok(), "{r:?}");
        }
    }

    fn square_map() -> ASchemeMor {
        let x = affine_line();
        let b = FPAlgebra::polynomial_ring(&["u"]);
        let y = affine(&b, &[b.poly("u").unwrap()], true, DEFAULT_CAP).unwrap();
        let k = x.field().unwrap();
        let fm = vec![k.parse("t^2").unwrap()];
        let g = |m: &crate::scheme::ASchemeModel| m.space().generic_points()[0];
        let c = |m: &crate::scheme::ASchemeModel| m.space().closed_points()[0];
        let mut pm = vec![0; 2];
        pm[g(&x)] = g(&y);
        pm[c(&x)] = c(&y);
        ASchemeMor::from_fields(&x, &y, pm, Some(&fm)).unwrap()
    }

    #[test]
    fn squaring_map_passes_and_composes() {
        let f = square_map();
        let r = f.check();
        assert!(r.ok(), "{r:?}");
        let id = ASchemeMor::identity(&f.source);
        assert!(id.then(&f).unwrap().check().ok());
    }

    #[test]
    fn corrupted_support_detected() {
        let mut f = square_map();
        let top = f.target.global();
        f.target.set_support(top, 0, crate::pointset::PointSet::EMPTY);
        let r = f.check();
        assert!(r.has_failure("support_square"), "{r:?}");
    }
}
