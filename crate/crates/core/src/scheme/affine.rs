use std::collections::BTreeMap;

use super::field::FunctionField;
use super::model::{ASchemeModel, Listed, PointData, Section};
use crate::dlat::FinPoset;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poly::{FPAlgebra, Fraction, MPoly};
use crate::reticulation::principal_fragment;

/// Finite model of `Spec A` seen through the basic opens `D(f)`.
///
/// The space is the spectrum of the reticulation fragment generated by the
/// principal classes of `basics`. Over an open `U` the ring is `A` with
/// every basic `f` such that `U ⊆ D(f)` inverted; `U` must then be the
/// open of the product of those `f`. When `integral` is set, the model
/// carries the embedding into `Frac(A)`.
pub fn affine(alg: &FPAlgebra, basics: &[MPoly], integral: bool, cap: usize) -> Result<ASchemeModel> {
    let frag = principal_fragment(alg, basics, cap)?;
    let (space, ji) = frag.lattice.spec();
    let d: Vec<PointSet> = frag.gen_index.iter().map(|&g| frag.lattice.birkhoff(&ji, g)).collect();
    let embedding = integral.then(|| {
        let vars = (0..alg.nvars()).map(|j| Fraction::from_element(alg, &alg.var(j))).collect();
        (FunctionField::new(alg.clone()), vars)
    });
    principal_model(alg, basics, space, &d, embedding)
}

/// Model on a finite space where `basics[i]` is invertible exactly on the
/// open `d[i]`. Every nonempty open must be an intersection of some `d[i]`.
/// `embedding` gives the field and the fractions of `alg`'s variables.
pub fn principal_model(
    alg: &FPAlgebra,
    basics: &[MPoly],
    space: FinPoset,
    d: &[PointSet],
    embedding: Option<(FunctionField, Vec<Fraction>)>,
) -> Result<ASchemeModel> {
    let n = alg.nvars();
    let vanishing: Vec<Vec<usize>> = (0..space.len()).map(|p| (0..basics.len()).filter(|&i| !d[i].contains(p)).collect()).collect();
    let labels: Vec<String> = vanishing
        .iter()
        .map(|v| {
            let mut g: Vec<String> = v.iter().map(|&i| alg.format(&alg.reduce(&basics[i]))).collect();
            g.dedup();
            if g.is_empty() {
                "(0)".to_string()
            } else {
                format!("({})", g.join(", "))
            }
        })
        .collect();
    let space = space.with_labels(labels);
    let opens = space.open_sets();
    let all = space.all();

    let mut sections = Vec::with_capacity(opens.len());
    let mut inverted: Vec<Vec<usize>> = Vec::with_capacity(opens.len());
    for &u in &opens {
        if u.is_empty() {
            sections.push(Section::zero_ring());
            inverted.push(vec![]);
            continue;
        }
        let mut s: Vec<usize> = Vec::new();
        for i in 0..basics.len() {
            if u.is_subset(d[i]) && !s.iter().any(|&j| alg.equal(&basics[j], &basics[i])) {
                s.push(i);
            }
        }
        let cut = s.iter().fold(all, |acc, &i| acc.intersection(d[i]));
        if cut != u {
            return Err(Error::NonPrincipalOpen(format!("{:?}", u)));
        }
        let mut ring = alg.clone();
        for &i in &s {
            let name = ring.fresh_name("s");
            let f = ring.embed(&basics[i]);
            ring = ring.localize(&f, &name);
        }
        let emb = embedding.as_ref().map(|(k, vars)| {
            let mut e = vars.clone();
            for &i in &s {
                let b = k.eval(&basics[i], vars);
                e.push(Fraction { num: b.den, den: b.num });
            }
            e
        });
        let listed = basics.iter().map(|b| Listed { elem: ring.reduce(&ring.embed(b)), support: PointSet::EMPTY }).collect();
        sections.push(Section { ring, listed, embedding: emb });
        inverted.push(s);
    }

    let mut restrictions = BTreeMap::new();
    for (u, &ou) in opens.iter().enumerate() {
        for (v, &ov) in opens.iter().enumerate() {
            if u == v || !ov.is_subset(ou) {
                continue;
            }
            let target = &sections[v].ring;
            let imgs: Vec<MPoly> = if ov.is_empty() {
                vec![target.zero(); sections[u].ring.nvars()]
            } else {
                let mut imgs: Vec<MPoly> = (0..n).map(|j| target.var(j)).collect();
                for &i in &inverted[u] {
                    let k = inverted[v].iter().position(|&x| x == i).expect("inverted sets grow on smaller opens");
                    imgs.push(target.var(n + k));
                }
                imgs
            };
            restrictions.insert((u, v), imgs);
        }
    }

    let points = (0..space.len())
        .map(|p| {
            let m = opens.iter().position(|&o| o == space.generalization(PointSet::singleton(p))).unwrap();
            let ring = &sections[m].ring;
            PointData { prime: ring.ideal(vanishing[p].iter().map(|&i| ring.embed(&basics[i])).collect()) }
        })
        .collect();

    let field = embedding.map(|e| e.0);
    let mut model = ASchemeModel::from_parts(space, sections, restrictions, points, field)?;
    fill_supports(&mut model);
    Ok(model)
}

/// Recomputes the stored support of every listed element from the primes.
pub fn fill_supports(model: &mut ASchemeModel) {
    for u in 0..model.opens().len() {
        for i in 0..model.section(u).listed.len() {
            let s = model.support_of(u, &model.section(u).listed[i].elem);
            model.set_support(u, i, s);
        }
    }
}
