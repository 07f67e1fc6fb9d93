//! JSON descriptions of models: affine charts over finitely presented
//! algebras, optionally reembedded into a shared function field and glued.

use serde::{Deserialize, Serialize};

use crate::dlat::DEFAULT_CAP;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poly::{AlgebraDoc, FPAlgebra, Fraction};
use crate::scheme::{affine, glue, ASchemeModel, FunctionField, Glued, Patch};
use crate::zr::place_patch;

fn yes() -> bool {
    true
}

/// `Spec` of an algebra seen through the basic opens `D(b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub algebra: AlgebraDoc,
    pub basics: Vec<String>,
    #[serde(default = "yes")]
    pub integral: bool,
    /// Images of the algebra's variables in the model's function field.
    #[serde(default)]
    pub embedding: Option<Vec<String>>,
    /// Replacement labels, keyed by the generated ones.
    #[serde(default)]
    pub relabel: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueMode {
    /// Points with the same valuation are identified (models of `ℚ(t)`).
    #[default]
    Places,
    /// Only the generic points are identified.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    /// Function field shared by all charts, as the fraction field of this
    /// algebra; required when a chart has an embedding.
    #[serde(default)]
    pub field: Option<AlgebraDoc>,
    pub charts: Vec<ChartDoc>,
    #[serde(default)]
    pub glue: GlueMode,
}

impl ChartDoc {
    pub fn build(&self, field: Option<&FunctionField>, cap: usize) -> Result<ASchemeModel> {
        let a = FPAlgebra::from_doc(&self.algebra)?;
        let basics = self.basics.iter().map(|b| a.poly(b)).collect::<Result<Vec<_>>>()?;
        let mut m = affine(&a, &basics, self.integral, cap)?;
        if let Some(emb) = &self.embedding {
            let k = field.ok_or_else(|| Error::MalformedModel("an embedding needs a field".into()))?;
            let images = emb.iter().map(|s| Fraction::parse(&k.base, s)).collect::<Result<Vec<_>>>()?;
            m = m.reembed(k.clone(), &images)?;
        }
        if !self.relabel.is_empty() {
            let labels = m
                .space()
                .labels()
                .iter()
                .map(|l| self.relabel.iter().find(|(from, _)| from == l).map(|p| p.1.clone()).unwrap_or_else(|| l.clone()))
                .collect();
            m = m.with_labels(labels);
        }
        Ok(m)
    }
}

impl ModelDoc {
    pub fn field(&self) -> Result<Option<FunctionField>> {
        self.field.as_ref().map(|d| Ok(FunctionField::new(FPAlgebra::from_doc(d)?))).transpose()
    }

    pub fn build_glued(&self, cap: usize) -> Result<Glued> {
        if self.charts.is_empty() {
            return Err(Error::MalformedModel("a model needs at least one chart".into()));
        }
        let k = self.field()?;
        let pieces = self.charts.iter().map(|c| c.build(k.as_ref(), cap)).collect::<Result<Vec<_>>>()?;
        let mut patches = Vec::new();
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let p = match self.glue {
                    GlueMode::Places => place_patch(&pieces, i, j)?,
                    GlueMode::Generic => {
                        let gi = PointSet::from_indices(pieces[i].space().generic_points());
                        let gj = PointSet::from_indices(pieces[j].space().generic_points());
                        Patch::by_labels(&pieces, i, j, gi, gj)?
                    }
                };
                if !p.point_map.is_empty() {
                    patches.push(p);
                }
            }
        }
        glue(&pieces, &patches)
    }

    pub fn build(&self, cap: usize) -> Result<ASchemeModel> {
        Ok(self.build_glued(cap)?.model)
    }

    pub fn build_default(&self) -> Result<ASchemeModel> {
        self.build(DEFAULT_CAP)
    }
}

/// Points of `m` named by `labels`.
pub fn points_by_label(m: &ASchemeModel, labels: &[String]) -> Result<PointSet> {
    labels
        .iter()
        .map(|l| m.space().labels().iter().position(|x| x == l).ok_or_else(|| Error::MalformedModel(format!("no point labelled {l}"))))
        .collect::<Result<Vec<_>>>()
        .map(PointSet::from_indices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointOut {
    pub label: String,
    pub prime: Vec<String>,
}

/// A listed element with its support `β(a) = V(a)`, a closed subset of the
/// open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListedOut {
    pub elem: String,
    pub beta: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenOut {
    pub points: Vec<String>,
    pub ring: AlgebraDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<String>>,
    pub listed: Vec<ListedOut>,
}

/// JSON rendering of a finite model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelOut {
    /// Always `"closed"`: supports are reported as closed sets.
    pub beta_convention: String,
    pub points: Vec<PointOut>,
    /// Pairs `[x, y]` with `y` a proper specialization of `x`.
    pub specializations: Vec<[String; 2]>,
    pub opens: Vec<OpenOut>,
}

impl ModelOut {
    pub fn new(m: &ASchemeModel) -> Self {
        let labels = m.space().labels();
        let points = (0..m.npoints())
            .map(|x| {
                let r = m.ring(m.umin(x));
                PointOut { label: labels[x].clone(), prime: m.prime(x).gens().iter().map(|g| r.format(g)).collect() }
            })
            .collect();
        let mut specializations = Vec::new();
        for x in 0..m.npoints() {
            for y in 0..m.npoints() {
                if x != y && m.space().specializes(x, y) {
                    specializations.push([labels[x].clone(), labels[y].clone()]);
                }
            }
        }
        let opens = m
            .opens()
            .iter()
            .enumerate()
            .map(|(u, &ou)| OpenOut {
                points: ou.iter().map(|p| labels[p].clone()).collect(),
                ring: m.ring(u).to_doc(),
                embedding: match (m.field(), &m.section(u).embedding) {
                    (Some(k), Some(e)) => Some(e.iter().map(|f| k.format(f)).collect()),
                    _ => None,
                },
                listed: m
                    .section(u)
                    .listed
                    .iter()
                    .map(|l| ListedOut { elem: m.ring(u).format(&l.elem), beta: l.support.iter().map(|p| labels[p].clone()).collect() })
                    .collect(),
            })
            .collect();
        ModelOut { beta_convention: "closed".into(), points, specializations, opens }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_chart(var: &str, basics: &[&str], emb: &str) -> ChartDoc {
        ChartDoc {
            algebra: AlgebraDoc { vars: vec![var.into()], relations: vec![] },
            basics: basics.iter().map(|s| s.to_string()).collect(),
            integral: true,
            embedding: Some(vec![emb.into()]),
            relabel: vec![],
        }
    }

    #[test]
    fn projective_line_from_json() {
        let doc = ModelDoc {
            field: Some(AlgebraDoc { vars: vec!["t".into()], relations: vec![] }),
            charts: vec![line_chart("t", &["t"], "t"), line_chart("u", &["u"], "1/t")],
            glue: GlueMode::Places,
        };
        let s = serde_json::to_string(&doc).unwrap();
        let back: ModelDoc = serde_json::from_str(&s).unwrap();
        let m = back.build_default().unwrap();
        assert_eq!(m.npoints(), 3);
        assert!(crate::scheme::find_isomorphism(&m, &crate::corpus::projective_line().model, None).is_some());
        let out = ModelOut::new(&m);
        assert_eq!(out.specializations.len(), 2);
        let g = ModelDoc { glue: GlueMode::Generic, ..back };
        assert_eq!(g.build_default().unwrap().npoints(), 3);
    }
}
