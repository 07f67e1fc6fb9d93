//! Finite filtered diagrams of models, their inverse limits, and the
//! checks attached to limits: factorization through a stage, pushforward of
//! sections, refinement witnesses, and reduction of hypersurfaces.

use std::collections::BTreeMap;

use crate::dlat::FinPoset;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poly::{FPAlgebra, Fraction, MPoly};
use crate::report::Report;
use crate::scheme::{find_isomorphism, glue, ASchemeModel, ASchemeMor};
use crate::zr::{place_patch, place_point_map};

/// Stages indexed by a finite directed poset, with a transition
/// `X_j → X_i` for every `i < j` (key `(j, i)`). All stages share one
/// function field.
#[derive(Clone, Debug)]
pub struct FilteredDiagram {
    pub index: FinPoset,
    pub stages: Vec<ASchemeModel>,
    pub transitions: BTreeMap<(usize, usize), ASchemeMor>,
}

impl FilteredDiagram {
    /// Checks directedness, that a transition exists for every comparable
    /// pair, and that transitions compose on points and rings.
    pub fn new(index: FinPoset, stages: Vec<ASchemeModel>, transitions: BTreeMap<(usize, usize), ASchemeMor>) -> Result<Self> {
        let n = index.len();
        if n == 0 || stages.len() != n {
            return Err(Error::InvalidDiagram("one stage per index required".into()));
        }
        let le = index.relation().to_vec();
        for i in 0..n {
            for j in 0..n {
                if !(0..n).any(|k| le[i][k] && le[j][k]) {
                    return Err(Error::InvalidDiagram(format!("indices {i} and {j} have no upper bound")));
                }
                if i != j && le[i][j] {
                    let t = transitions.get(&(j, i)).ok_or_else(|| Error::InvalidDiagram(format!("missing transition {j} -> {i}")))?;
                    if t.source.npoints() != stages[j].npoints() || t.target.npoints() != stages[i].npoints() {
                        return Err(Error::InvalidDiagram(format!("transition {j} -> {i} has the wrong ends")));
                    }
                }
            }
        }
        let d = FilteredDiagram { index, stages, transitions };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || !le[i][j] || !le[j][k] {
                        continue;
                    }
                    let two = d.transitions[&(k, j)].then(&d.transitions[&(j, i)])?;
                    if !same_morphism(&two, &d.transitions[&(k, i)]) {
                        return Err(Error::InvalidDiagram(format!("transitions {k} -> {j} -> {i} and {k} -> {i} differ")));
                    }
                }
            }
        }
        Ok(d)
    }

    /// `X_0 ← X_1 ← …` from consecutive transitions `X_{k+1} → X_k`.
    pub fn chain(stages: Vec<ASchemeModel>, steps: Vec<ASchemeMor>) -> Result<Self> {
        let n = stages.len();
        if steps.len() + 1 != n {
            return Err(Error::InvalidDiagram("a chain of n stages needs n - 1 steps".into()));
        }
        let rels: Vec<(usize, usize)> = (1..n).map(|k| (k - 1, k)).collect();
        let index = FinPoset::from_relations((0..n).map(|k| k.to_string()).collect(), &rels)?;
        let mut transitions = BTreeMap::new();
        for j in 1..n {
            let mut t = steps[j - 1].clone();
            transitions.insert((j, j - 1), t.clone());
            for i in (0..j - 1).rev() {
                t = t.then(&steps[i])?;
                transitions.insert((j, i), t.clone());
            }
        }
        FilteredDiagram::new(index, stages, transitions)
    }

    pub fn constant(x: &ASchemeModel, n: usize) -> Result<Self> {
        let id = ASchemeMor::identity(x);
        FilteredDiagram::chain(vec![x.clone(); n], vec![id; n.saturating_sub(1)])
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// The greatest index, which exists since the index is finite and
    /// directed.
    pub fn top(&self) -> usize {
        let le = self.index.relation();
        (0..self.len()).find(|&m| (0..self.len()).all(|i| le[i][m])).expect("finite directed posets have a maximum")
    }

    /// Indices in an order compatible with the index poset.
    pub fn linear_order(&self) -> Vec<usize> {
        let le = self.index.relation();
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| (0..self.len()).filter(|&j| le[j][i]).count());
        idx
    }

    fn transition_points(&self, j: usize, i: usize) -> Vec<usize> {
        if i == j {
            (0..self.stages[i].npoints()).collect()
        } else {
            self.transitions[&(j, i)].point_map.clone()
        }
    }
}

fn same_morphism(a: &ASchemeMor, b: &ASchemeMor) -> bool {
    if a.point_map != b.point_map {
        return false;
    }
    let x = &a.source;
    a.ring_maps.iter().all(|(v, imgs)| {
        let Some(u) = x.open_index(a.preimage(a.target.opens()[*v])) else { return false };
        imgs.iter().zip(&b.ring_maps[v]).all(|(p, q)| x.ring(u).equal(p, q))
    })
}

/// An inverse limit with its cone.
#[derive(Clone, Debug)]
pub struct Limit {
    pub model: ASchemeModel,
    /// Compatible tuples, one per point of the limit.
    pub tuples: Vec<Vec<usize>>,
    pub cones: Vec<ASchemeMor>,
    pub report: Report,
}

/// Points are compatible tuples ordered componentwise; sections over an open
/// are the colimit of the stage sections over opens pulling back to it,
/// which the top stage already attains.
pub fn inverse_limit(d: &FilteredDiagram) -> Result<Limit> {
    let order = d.linear_order();
    let top = d.top();
    let le = d.index.relation();
    // compatible tuples by backtracking along the order
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![usize::MAX; d.len()];
    fn extend(d: &FilteredDiagram, order: &[usize], k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == order.len() {
            out.push(cur.clone());
            return;
        }
        let j = order[k];
        let le = d.index.relation();
        'p: for p in 0..d.stages[j].npoints() {
            for &i in &order[..k] {
                if le[i][j] && i != j && d.transitions[&(j, i)].point_map[p] != cur[i] {
                    continue 'p;
                }
            }
            cur[j] = p;
            extend(d, order, k + 1, cur, out);
        }
    }
    extend(d, &order, 0, &mut cur, &mut tuples);
    if tuples.is_empty() {
        return Err(Error::EmptyLimit("no compatible tuple of points".into()));
    }
    tuples.sort_by_key(|t| t[top]);
    let xm = &d.stages[top];
    if tuples.len() != xm.npoints() || tuples.iter().enumerate().any(|(p, t)| t[top] != p) {
        return Err(Error::InvalidDiagram("tuples do not match the top stage".into()));
    }
    let n = tuples.len();
    let mut rel = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            rel[a][b] = (0..d.len()).all(|i| d.stages[i].space().relation()[tuples[a][i]][tuples[b][i]]);
        }
    }
    let labels: Vec<String> = tuples.iter().map(|t| xm.space().labels()[t[top]].clone()).collect();
    let space = FinPoset::new(labels, rel)?;
    let mut rep = Report::new();
    rep.push("space.top_stage", space.relation() == xm.space().relation(), None);

    // sections: the union of stage generators over opens pulling back to W
    // generates the top stage's ring
    let model = xm.with_labels(space.labels().to_vec());
    let mut bad = Vec::new();
    if let Some(k) = model.field() {
        for (w, &ow) in model.opens().iter().enumerate() {
            if ow.is_empty() {
                continue;
            }
            let Some(mine) = model.section(w).embedding.clone() else { continue };
            let mut all = mine.clone();
            for i in 0..d.len() {
                let pm = d.transition_points(top, i);
                for (u, &ou) in d.stages[i].opens().iter().enumerate() {
                    let pre = PointSet::from_indices((0..n).filter(|&p| ou.contains(pm[p])));
                    if pre == ow {
                        if let Some(e) = &d.stages[i].section(u).embedding {
                            all.extend(e.iter().cloned());
                        }
                    }
                }
            }
            if !k.subring_le(&all, &mine) {
                bad.push(format!("{ow:?}"));
            }
        }
    }
    if bad.is_empty() {
        rep.pass("sections.colimit");
    } else {
        rep.fail("sections.colimit", format!("stage sections escape the top stage over {}", bad.join(", ")));
    }

    let id = ASchemeMor::identity(&model);
    let cones: Vec<ASchemeMor> = (0..d.len())
        .map(|i| {
            if i == top {
                Ok(id.clone())
            } else {
                let mut c = d.transitions[&(top, i)].clone();
                c.source = model.clone();
                Ok(c)
            }
        })
        .collect::<Result<_>>()?;
    let mut bad = Vec::new();
    for i in 0..d.len() {
        for j in 0..d.len() {
            if i == j || !le[i][j] {
                continue;
            }
            let via = cones[j].then(&d.transitions[&(j, i)])?;
            if !same_morphism(&via, &cones[i]) {
                bad.push(format!("{j} -> {i}"));
            }
        }
    }
    if bad.is_empty() {
        rep.pass("cone");
    } else {
        rep.fail("cone", bad.join(", "));
    }
    Ok(Limit { model, tuples, cones, report: rep })
}

/// A factorization of a map from the limit through a stage.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub index: usize,
    pub morphism: ASchemeMor,
}

/// The first stage (in index order) whose global sections contain the
/// images of all generators of `y`'s global ring, given as fractions in the
/// shared field (`images[i]` for variable `i`), and the factoring morphism
/// `X_λ → Y`.
pub fn factor_through(d: &FilteredDiagram, y: &ASchemeModel, images: &[Fraction]) -> Result<Factorization> {
    let gy = y.global();
    let emb = y.section(gy).embedding.clone().ok_or_else(|| Error::MalformedModel("target has no embedding".into()))?;
    for i in d.linear_order() {
        let x = &d.stages[i];
        let k = x.field().ok_or_else(|| Error::MalformedModel("stage has no function field".into()))?;
        let gx = x.global();
        let gens = x.section(gx).embedding.clone().unwrap_or_default();
        let ok = emb.iter().all(|f| k.contains(&gens, &k.map_fraction(f, images)));
        if ok {
            let pm = support_point_map(x, y, images)?;
            let morphism = ASchemeMor::from_fields(x, y, pm, Some(images))?;
            return Ok(Factorization { index: i, morphism });
        }
    }
    Err(Error::NoFactorization("no stage contains every generator image".into()))
}

/// Point map into a model whose points are told apart by the supports of
/// its global listed elements: `x` goes to the point where the same pulled
/// back elements vanish.
pub fn support_point_map(x: &ASchemeModel, y: &ASchemeModel, images: &[Fraction]) -> Result<Vec<usize>> {
    let k = x.field().ok_or_else(|| Error::MalformedModel("no function field".into()))?;
    let (gx, gy) = (x.global(), y.global());
    let mut pulled = Vec::new();
    for l in &y.section(gy).listed {
        let f = y.to_fraction(gy, &l.elem).ok_or_else(|| Error::MalformedModel("no embedding".into()))?;
        let e = x
            .from_fraction(gx, &k.map_fraction(&f, images))
            .ok_or_else(|| Error::NotInRing(format!("pullback of {} is not global", y.ring(gy).format(&l.elem))))?;
        pulled.push((x.support_of(gx, &e), l.support));
    }
    (0..x.npoints())
        .map(|p| {
            (0..y.npoints())
                .find(|&q| pulled.iter().all(|(sx, sy)| sx.contains(p) == sy.contains(q)))
                .ok_or_else(|| Error::InvalidHom(format!("point {} has no image", x.space().labels()[p])))
        })
        .collect()
}

/// `f_* 𝒪_X = 𝒪_Y`: sections of the source over `f⁻¹V` equal those of the
/// target over `V` for every open `V`, compared inside the source's field.
pub fn check_pushforward(f: &ASchemeMor, field_map: Option<&[Fraction]>) -> Result<Report> {
    let (x, y) = (&f.source, &f.target);
    let k = x.field().ok_or_else(|| Error::MalformedModel("source has no function field".into()))?;
    let mut rep = Report::new();
    for (v, &ov) in y.opens().iter().enumerate() {
        if ov.is_empty() {
            continue;
        }
        let u = x.open_index(f.preimage(ov)).ok_or_else(|| Error::InvalidHom("point map is not continuous".into()))?;
        let (Some(ex), Some(ey)) = (&x.section(u).embedding, &y.section(v).embedding) else {
            return Err(Error::MalformedModel("sections without embedding".into()));
        };
        let ey: Vec<Fraction> = match field_map {
            Some(m) => ey.iter().map(|g| k.map_fraction(g, m)).collect(),
            None => ey.clone(),
        };
        let name = format!("pushforward {}", y.space().labels_of(ov));
        if k.subring_eq(ex, &ey) {
            rep.pass(name);
        } else {
            rep.fail(name, "section rings differ");
        }
    }
    Ok(rep)
}

/// One member of a cover refinement: `V_ijk ⊆ V_i` with a claimed `f` such
/// that `𝒪(V_ijk) = 𝒪(V_i)[1/f]`.
#[derive(Clone, Debug)]
pub struct RefinementWitness {
    pub big: usize,
    pub small: usize,
    pub witness: MPoly,
}

/// Verifies every witness by two-sided membership; a failing witness is an
/// error (the cover does not establish the criterion).
pub fn check_refinement(x: &ASchemeModel, cover: &[RefinementWitness]) -> Result<Report> {
    let k = x.field().ok_or_else(|| Error::MalformedModel("model has no function field".into()))?;
    let mut rep = Report::new();
    for c in cover {
        let (ob, os) = (x.opens()[c.big], x.opens()[c.small]);
        if !os.is_subset(ob) {
            return Err(Error::RefinementWitness(format!("{os:?} is not inside {ob:?}")));
        }
        let eb = x.section(c.big).embedding.as_ref().ok_or_else(|| Error::MalformedModel("no embedding".into()))?;
        let es = x.section(c.small).embedding.as_ref().ok_or_else(|| Error::MalformedModel("no embedding".into()))?;
        let f = k.eval(&c.witness, eb);
        if k.is_zero(&f) {
            return Err(Error::RefinementWitness("witness is zero".into()));
        }
        let mut gens = eb.clone();
        gens.push(f.inv(&k.base)?);
        if !k.subring_eq(&gens, es) {
            return Err(Error::RefinementWitness(format!(
                "𝒪({})[1/{}] ≠ 𝒪({})",
                x.space().labels_of(ob),
                x.ring(c.big).format(&c.witness),
                x.space().labels_of(os)
            )));
        }
        rep.pass(format!("refinement {} ⊆ {}", x.space().labels_of(os), x.space().labels_of(ob)));
    }
    Ok(rep)
}

/// Stagewise gluing of two chains of curve models over the same index,
/// identifying points with equal places; transitions are induced by places.
pub fn glue_diagrams(left: &FilteredDiagram, right: &FilteredDiagram) -> Result<FilteredDiagram> {
    if left.index != right.index {
        return Err(Error::InvalidDiagram("diagrams have different indices".into()));
    }
    let mut stages = Vec::new();
    for (a, b) in left.stages.iter().zip(&right.stages) {
        let pieces = vec![a.clone(), b.clone()];
        let patch = place_patch(&pieces, 0, 1)?;
        stages.push(glue(&pieces, &[patch])?.model);
    }
    let mut transitions = BTreeMap::new();
    for &(j, i) in left.transitions.keys() {
        let pm = place_point_map(&stages[j], &stages[i])?;
        transitions.insert((j, i), ASchemeMor::from_fields(&stages[j], &stages[i], pm, None)?);
    }
    FilteredDiagram::new(left.index.clone(), stages, transitions)
}

/// Compares the limit of the stagewise gluing with the gluing of the two
/// limits.
pub fn limit_of_glue(left: &FilteredDiagram, right: &FilteredDiagram) -> Result<Report> {
    let mut rep = Report::new();
    let lg = inverse_limit(&glue_diagrams(left, right)?)?;
    rep.merge("limit", lg.report.clone());
    let (l, r) = (inverse_limit(left)?, inverse_limit(right)?);
    let pieces = vec![l.model, r.model];
    let patch = place_patch(&pieces, 0, 1)?;
    let gl = glue(&pieces, &[patch])?.model;
    rep.push("isomorphic", find_isomorphism(&lg.model, &gl, None).is_some(), None);
    Ok(rep)
}

/// `ℚ[vars]/(f) ↦ ℚ[vars]/(squarefree part of f)`.
pub fn reduce_hypersurface(a: &FPAlgebra) -> Result<FPAlgebra> {
    match a.relations() {
        [] => Ok(a.clone()),
        [f] => {
            let r = a.squarefree_part(f)?.make_monic();
            Ok(FPAlgebra::new(a.vars().to_vec(), vec![r]))
        }
        _ => Err(Error::OutOfScope("only principal relation ideals are reduced".into())),
    }
}
