use std::collections::BTreeMap;

use super::affine::fill_supports;
use super::field::FunctionField;
use super::model::{prime_in, ASchemeModel, Listed, PointData, Section};
use crate::dlat::FinPoset;
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// Identification of the open `left_open` of piece `left` with the open
/// `right_open` of piece `right`, pointwise by `point_map`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    pub left: usize,
    pub right: usize,
    pub left_open: PointSet,
    pub right_open: PointSet,
    pub point_map: Vec<(usize, usize)>,
}

impl Patch {
    /// Patch identifying points of the two opens with equal labels.
    pub fn by_labels(pieces: &[ASchemeModel], left: usize, right: usize, left_open: PointSet, right_open: PointSet) -> Result<Self> {
        let mut point_map = Vec::new();
        for x in left_open.iter() {
            let l = &pieces[left].space().labels()[x];
            let y = right_open
                .iter()
                .find(|&y| &pieces[right].space().labels()[y] == l)
                .ok_or_else(|| Error::IncompatiblePatch(format!("no point labelled {l} on the right")))?;
            point_map.push((x, y));
        }
        Ok(Patch { left, right, left_open, right_open, point_map })
    }
}

/// Degree bound for intersecting section rings of different pieces.
pub const INTERSECTION_DEGREE: u32 = 3;

#[derive(Clone, Debug)]
pub struct Glued {
    pub model: ASchemeModel,
    /// For every piece, the glued point of each of its points.
    pub inclusions: Vec<Vec<usize>>,
    pub separated: bool,
    /// Two points with the same local ring, when not separated.
    pub clash: Option<(usize, usize)>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Glues birational pieces (sharing one function field) along open
/// identifications. Sections over an open inside a single piece are taken
/// from the first such piece; otherwise they are the intersection of the
/// pieces' section rings inside the function field.
pub fn glue(pieces: &[ASchemeModel], patches: &[Patch]) -> Result<Glued> {
    if pieces.is_empty() {
        return Err(Error::IncompatiblePatch("nothing to glue".into()));
    }
    let field: FunctionField = match pieces[0].field() {
        Some(k) => k.clone(),
        None if pieces.len() == 1 => {
            let m = pieces[0].clone();
            let incl = vec![(0..m.npoints()).collect()];
            return Ok(Glued { separated: true, clash: None, model: m, inclusions: incl });
        }
        None => return Err(Error::IncompatiblePatch("gluing needs a shared function field".into())),
    };
    if pieces.iter().any(|p| p.field() != Some(&field)) {
        return Err(Error::IncompatiblePatch("pieces embed into different function fields".into()));
    }
    let offsets: Vec<usize> = pieces
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.npoints();
            Some(o)
        })
        .collect();
    let total: usize = pieces.iter().map(|p| p.npoints()).sum();
    let mut parent: Vec<usize> = (0..total).collect();

    for (pi, patch) in patches.iter().enumerate() {
        let (a, b) = (&pieces[patch.left], &pieces[patch.right]);
        let (ua, ub) = (
            a.open_index(patch.left_open).ok_or_else(|| Error::IncompatiblePatch(format!("patch {pi}: left set is not open")))?,
            b.open_index(patch.right_open).ok_or_else(|| Error::IncompatiblePatch(format!("patch {pi}: right set is not open")))?,
        );
        let dom = PointSet::from_indices(patch.point_map.iter().map(|p| p.0));
        let img = PointSet::from_indices(patch.point_map.iter().map(|p| p.1));
        if dom != patch.left_open || img != patch.right_open || patch.point_map.len() != dom.len() {
            return Err(Error::IncompatiblePatch(format!("patch {pi}: point map is not a bijection of the opens")));
        }
        for &(x, y) in &patch.point_map {
            for &(x2, y2) in &patch.point_map {
                if a.space().specializes(x, x2) != b.space().specializes(y, y2) {
                    return Err(Error::IncompatiblePatch(format!("patch {pi}: point map is not an order isomorphism")));
                }
            }
        }
        let (ea, eb) = (&a.section(ua).embedding, &b.section(ub).embedding);
        if let (Some(ea), Some(eb)) = (ea, eb) {
            if !field.subring_eq(ea, eb) {
                return Err(Error::IncompatiblePatch(format!("patch {pi}: section rings differ on the shared open")));
            }
        }
        for &(x, y) in &patch.point_map {
            if !prime_in(a, x, b, y) || !prime_in(b, y, a, x) {
                return Err(Error::IncompatiblePatch(format!(
                    "patch {pi}: points {} and {} have different primes",
                    a.space().labels()[x],
                    b.space().labels()[y]
                )));
            }
            let (rx, ry) = (find(&mut parent, offsets[patch.left] + x), find(&mut parent, offsets[patch.right] + y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }

    // glued points, in order of first occurrence
    let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut inclusions: Vec<Vec<usize>> = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let mut incl = Vec::new();
        for x in 0..p.npoints() {
            let r = find(&mut parent, offsets[i] + x);
            let n = class_of.len();
            let c = *class_of.entry(r).or_insert_with(|| {
                reps.push((i, x));
                n
            });
            incl.push(c);
        }
        inclusions.push(incl);
    }
    let n = reps.len();
    let mut rels = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        for x in 0..p.npoints() {
            for y in 0..p.npoints() {
                if x != y && p.space().specializes(x, y) {
                    rels.push((inclusions[i][x], inclusions[i][y]));
                }
            }
        }
    }
    let mut labels: Vec<String> = reps.iter().map(|&(i, x)| pieces[i].space().labels()[x].clone()).collect();
    for c in 0..n {
        if labels[..c].contains(&labels[c]) {
            labels[c] = format!("{}#{}", labels[c], reps[c].0);
        }
    }
    let space = FinPoset::from_relations(labels, &rels).map_err(|e| Error::IncompatiblePatch(format!("glued order is not a partial order: {e}")))?;
    let images: Vec<PointSet> = inclusions.iter().map(|incl| PointSet::from_indices(incl.iter().copied())).collect();
    for (i, &im) in images.iter().enumerate() {
        if !space.is_open(im) {
            return Err(Error::IncompatiblePatch(format!("piece {i} is not open in the glued space")));
        }
    }

    let opens = space.open_sets();
    let local = |i: usize, w: PointSet| -> usize {
        let pre = PointSet::from_indices((0..pieces[i].npoints()).filter(|&x| w.contains(inclusions[i][x])));
        pieces[i].open_index(pre).expect("preimage of an open is open")
    };
    let mut sections = Vec::with_capacity(opens.len());
    for &w in &opens {
        if w.is_empty() {
            sections.push(Section::zero_ring());
            continue;
        }
        if let Some(i) = (0..pieces.len()).find(|&i| w.is_subset(images[i])) {
            sections.push(pieces[i].section(local(i, w)).clone());
            continue;
        }
        let mut gens: Option<Vec<crate::poly::Fraction>> = None;
        for i in 0..pieces.len() {
            let u = local(i, w);
            if pieces[i].opens()[u].is_empty() {
                continue;
            }
            let e = pieces[i].section(u).embedding.clone().ok_or_else(|| Error::IncompatiblePatch("missing embedding".into()))?;
            gens = Some(match gens {
                None => field.minimize_generators(&e),
                Some(g) => field.intersect(&g, &e, INTERSECTION_DEGREE),
            });
        }
        let gens = gens.unwrap_or_default();
        let names: Vec<String> = (0..gens.len()).map(|j| format!("z{j}")).collect();
        let ring = field.presentation(&gens, &names);
        let mut section = Section { ring, listed: vec![], embedding: Some(gens) };
        // listed elements of the pieces that are global here
        for i in 0..pieces.len() {
            let u = local(i, w);
            for l in &pieces[i].section(u).listed {
                let f = pieces[i].to_fraction(u, &l.elem).unwrap();
                let e = section.embedding.as_ref().unwrap();
                if let Some(p) = field.express(e, &f) {
                    let r = &section.ring;
                    let p = super::model::apply_hom(&p, &(0..r.nvars()).map(|j| r.var(j)).collect::<Vec<_>>(), r);
                    if !section.listed.iter().any(|m| m.elem == p) && !p.is_constant() {
                        section.listed.push(Listed { elem: p, support: PointSet::EMPTY });
                    }
                }
            }
        }
        sections.push(section);
    }

    let points: Vec<PointData> = (0..n)
        .map(|c| {
            let umin = space.generalization(PointSet::singleton(c));
            let j = (0..pieces.len()).find(|&j| umin.is_subset(images[j])).unwrap();
            let y = inclusions[j].iter().position(|&d| d == c).unwrap();
            PointData { prime: pieces[j].prime(y).clone() }
        })
        .collect();

    let mut model = ASchemeModel::from_parts(space, sections, BTreeMap::new(), points, Some(field))?;
    fill_supports(&mut model);
    let clash = model.separation_clash();
    Ok(Glued { separated: clash.is_none(), clash, model, inclusions })
}
