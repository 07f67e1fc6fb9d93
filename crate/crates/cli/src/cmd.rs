use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use aschemes::dlat::{posets_isomorphic, LatticeDoc, PosetDoc};
use aschemes::doc::{points_by_label, ChartDoc, ModelDoc, ModelOut};
use aschemes::limits::{check_refinement, factor_through, inverse_limit, support_point_map, FilteredDiagram, RefinementWitness};
use aschemes::nagata::{check_resolution, compactify, fan_tower, resolve_fractions, CompactifyInput, MonomialFraction};
use aschemes::normalization::{check_counit, normalize_affine, renormalize, Closure, ClosureData, ClosureDoc};
use aschemes::poly::AlgebraDoc;
use aschemes::report::Report;
use aschemes::reticulation::principal_fragment;
use aschemes::scheme::{ASchemeModel, ASchemeMor};
use aschemes::zr::{
    center, check_proper, domain, in_sections, line_field, place_point_map, place_sample, places_dot, places_of_model, sections, zr_immersion,
    Center, FactoredElem, Place, ZROpen,
};
use aschemes::{Error, FPAlgebra, MPoly};

/// What a subcommand produces: a JSON result, its verdicts, and a DOT
/// rendering.
pub struct Output {
    pub result: Value,
    pub verdicts: Report,
    pub dot: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragIn {
    pub algebra: AlgebraDoc,
    pub gens: Vec<String>,
}

pub fn frag(input: FragIn, cap: usize) -> aschemes::Result<Output> {
    let a = FPAlgebra::from_doc(&input.algebra)?;
    let gens = input.gens.iter().map(|g| a.poly(g)).collect::<aschemes::Result<Vec<_>>>()?;
    let f = principal_fragment(&a, &gens, cap)?;
    let (spec, _) = f.lattice.spec();
    let mut verdicts = Report::new();
    verdicts.push("spec.prime_filters", posets_isomorphic(&spec, &f.lattice.spec_by_filters()), None);
    let dot = f.lattice.to_dot();
    let result = json!({
        "size": f.len(),
        "lattice": LatticeDoc::from(f.lattice.clone()),
        "generators": f.gen_index,
        "spec": PosetDoc::from(spec.clone()),
        "points": spec.len(),
    });
    Ok(Output { result, verdicts, dot })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizeIn {
    pub model: ChartDoc,
    #[serde(default)]
    pub closure: ClosureDoc,
    /// Fractions `α` paired with the whole model.
    #[serde(default)]
    pub pairs: Vec<String>,
}

pub fn normalize(input: NormalizeIn, cap: usize) -> aschemes::Result<Output> {
    let x = input.model.build(None, cap)?;
    let k = x.field().ok_or_else(|| Error::MalformedModel("normalization needs an integral model".into()))?.clone();
    let cd = ClosureData::from_doc(&k, &input.closure)?;
    let c = Closure::new(&x, &cd)?;
    let pairs = input.pairs.iter().map(|p| c.pair_str(x.global(), p)).collect::<aschemes::Result<Vec<_>>>()?;
    let n = normalize_affine(&x, &cd, &pairs, cap)?;
    let mut verdicts = Report::new();
    verdicts.merge("counit", check_counit(&n.projection));
    verdicts.merge("projection", n.projection.check());
    verdicts.merge("axiom", n.model.check_axiom());
    let (_, iso) = renormalize(&n, cap)?;
    verdicts.push("renormalize.isomorphic", iso, None);
    let labels = x.space().labels();
    let result = json!({
        "model": ModelOut::new(&n.model),
        "projection": n.projection.point_map.iter().map(|&p| labels[p].clone()).collect::<Vec<_>>(),
        "fragment_size": n.fragment_size,
    });
    Ok(Output { result, verdicts, dot: n.model.to_dot() })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZrIn {
    #[serde(default)]
    pub model: Option<ModelDoc>,
    /// Elements of `ℚ(t)`, factored on input.
    #[serde(default)]
    pub elements: Vec<String>,
}

fn element_table(src: &str, verdicts: &mut Report) -> aschemes::Result<(Value, Vec<Place>)> {
    let a = FactoredElem::parse(src)?;
    let k = line_field();
    let d = domain(&a);
    let mut marked: Vec<Place> = a.poles().into_iter().chain(a.zeros()).collect();
    marked.sort();
    let sample = place_sample(&marked);
    let values: serde_json::Map<String, Value> = sample.iter().map(|v| (v.to_string(), json!(v.valuate(&a)))).collect();
    verdicts.push(format!("{src}.in_domain_sections"), in_sections(&d, &a), None);
    verdicts.push(format!("{src}.domains_cover"), d.union(&domain(&a.inv())) == ZROpen::whole(), None);
    let row = json!({
        "element": src,
        "factored": a.to_string(),
        "domain": d.to_string(),
        "sections": sections(&d)?.iter().map(|f| k.format(f)).collect::<Vec<_>>(),
        "valuations": values,
    });
    Ok((row, marked))
}

pub fn zr(input: ZrIn, cap: usize) -> aschemes::Result<Output> {
    let mut verdicts = Report::new();
    let mut rows = Vec::new();
    let mut marked = Vec::new();
    for e in &input.elements {
        let (row, ps) = element_table(e, &mut verdicts)?;
        rows.push(row);
        marked.extend(ps);
    }
    let mut result = json!({ "elements": rows });
    let mut dot_places = place_sample(&marked);
    if let Some(md) = &input.model {
        let m = md.build(cap)?;
        let imm = zr_immersion(&m)?;
        let proper = check_proper(&m)?;
        let labels = m.space().labels();
        let mut centers = serde_json::Map::new();
        for v in place_sample(&[places_of_model(&m), marked.clone()].concat()) {
            let c = match center(&v, &m)? {
                Center::Unique(x) => json!(labels[x]),
                Center::Absent => Value::Null,
                Center::Multiple(xs) => json!(xs.iter().map(|&x| labels[x].clone()).collect::<Vec<_>>()),
            };
            centers.insert(v.to_string(), c);
        }
        dot_places = imm.point_places.iter().flatten().cloned().collect();
        result["model"] = json!({
            "image": imm.image.to_string(),
            "opens": imm.opens.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "point_places": imm.point_places.iter().map(|p| p.as_ref().map(|v| v.to_string())).collect::<Vec<_>>(),
            "centers": centers,
            "proper": proper.ok(),
            "uncentered": proper.failures().map(|c| c.name.trim_start_matches("center ").to_string()).collect::<Vec<_>>(),
        });
        verdicts.merge("immersion", imm.report);
    }
    Ok(Output { result, verdicts, dot: places_dot(&dot_places) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorIn {
    pub target: ModelDoc,
    pub images: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitIn {
    /// Stages of a chain `X_0 ← X_1 ← …`, sharing one function field.
    pub stages: Vec<ModelDoc>,
    #[serde(default)]
    pub factor: Option<FactorIn>,
}

fn transition(src: &ASchemeModel, tgt: &ASchemeModel) -> aschemes::Result<ASchemeMor> {
    let pm = match place_point_map(src, tgt) {
        Ok(pm) => pm,
        Err(_) => {
            let k = src.field().ok_or_else(|| Error::MalformedModel("stages need a function field".into()))?;
            let ids: Vec<_> = k.base.vars().iter().map(|v| k.parse(v)).collect::<aschemes::Result<_>>()?;
            support_point_map(src, tgt, &ids)?
        }
    };
    ASchemeMor::from_fields(src, tgt, pm, None)
}

pub fn limit(input: LimitIn, cap: usize) -> aschemes::Result<Output> {
    let stages = input.stages.iter().map(|s| s.build(cap)).collect::<aschemes::Result<Vec<_>>>()?;
    let steps = stages.windows(2).map(|w| transition(&w[1], &w[0])).collect::<aschemes::Result<Vec<_>>>()?;
    let d = FilteredDiagram::chain(stages, steps)?;
    let l = inverse_limit(&d)?;
    let mut verdicts = l.report.clone();
    let mut factor = Value::Null;
    if let Some(fi) = &input.factor {
        let y = fi.target.build(cap)?;
        let k = d.stages[0].field().ok_or_else(|| Error::MalformedModel("stages need a function field".into()))?;
        let images = fi.images.iter().map(|s| k.parse(s)).collect::<aschemes::Result<Vec<_>>>()?;
        let f = factor_through(&d, &y, &images)?;
        verdicts.merge("factor", f.morphism.check());
        factor = json!({ "index": f.index });
    }
    let result = json!({
        "model": ModelOut::new(&l.model),
        "tuples": l.tuples,
        "factor": factor,
    });
    Ok(Output { result, verdicts, dot: l.model.to_dot() })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactifyIn {
    pub model: ModelDoc,
    pub v1: Vec<String>,
    pub v2: Vec<String>,
    pub charts: [ModelDoc; 2],
}

pub fn compactify_cmd(input: CompactifyIn, cap: usize) -> aschemes::Result<Output> {
    let x = input.model.build(cap)?;
    let v = [points_by_label(&x, &input.v1)?, points_by_label(&x, &input.v2)?];
    let charts = [input.charts[0].build(cap)?, input.charts[1].build(cap)?];
    let c = compactify(&CompactifyInput { x: x.clone(), v, charts })?;
    let y = &c.glued.model;
    let labels = y.space().labels();
    let result = json!({
        "model": ModelOut::new(y),
        "proper": c.proper,
        "added_points": c.added_points,
        "immersion": c.immersion.point_map.iter().map(|&p| labels[p].clone()).collect::<Vec<_>>(),
        "w": [c.w[0].to_string(), c.w[1].to_string()],
        "w_equality": c.w_equality,
    });
    Ok(Output { result, verdicts: c.report, dot: y.to_dot() })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanIn {
    /// Exponent pairs `[a, b]` for `x^a y^b`.
    #[serde(default)]
    pub fractions: Vec<[i64; 2]>,
    /// Optional staged arrival of further fractions.
    #[serde(default)]
    pub stages: Vec<Vec<[i64; 2]>>,
    #[serde(default = "default_bound")]
    pub bound: i64,
}

fn default_bound() -> i64 {
    10
}

fn fracs(v: &[[i64; 2]]) -> Vec<MonomialFraction> {
    v.iter().map(|p| MonomialFraction::new(p[0], p[1])).collect()
}

#[derive(Serialize)]
struct FanOut {
    rays: Vec<(i64, i64)>,
    cones: Vec<((i64, i64), (i64, i64))>,
}

pub fn fan(input: FanIn) -> aschemes::Result<Output> {
    let mut stages: Vec<Vec<MonomialFraction>> = Vec::new();
    if !input.fractions.is_empty() {
        stages.push(fracs(&input.fractions));
    }
    stages.extend(input.stages.iter().map(|s| fracs(s)));
    let all: Vec<MonomialFraction> = stages.concat();
    let f = resolve_fractions(&all);
    f.check()?;
    let mut verdicts = Report::new();
    verdicts.merge("resolution", check_resolution(&f, &all));
    let tower = fan_tower(&stages);
    verdicts.merge("tower", tower.check(input.bound));
    let result = json!({
        "fan": FanOut { rays: f.rays().to_vec(), cones: f.cones() },
        "tower": tower.fans.iter().map(|s| s.rays().to_vec()).collect::<Vec<_>>(),
    });
    Ok(Output { result, verdicts, dot: f.to_dot() })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinementIn {
    pub big: Vec<String>,
    pub small: Vec<String>,
    pub witness: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckIn {
    pub model: ModelDoc,
    #[serde(default)]
    pub refinement: Vec<RefinementIn>,
    /// Random products of listed elements on which supports are checked.
    #[serde(default)]
    pub samples: usize,
}

pub fn check(input: CheckIn, cap: usize, seed: u64) -> aschemes::Result<Output> {
    let m = input.model.build(cap)?;
    let mut verdicts = Report::new();
    verdicts.merge("axiom", m.check_axiom());
    let mut items = Vec::new();
    for r in &input.refinement {
        let open = |l: &[String]| -> aschemes::Result<usize> {
            let s = points_by_label(&m, l)?;
            m.open_index(s).ok_or_else(|| Error::MalformedModel(format!("{l:?} is not open")))
        };
        let big = open(&r.big)?;
        items.push(RefinementWitness { big, small: open(&r.small)?, witness: m.ring(big).poly(&r.witness)? });
    }
    if !items.is_empty() {
        verdicts.merge("refinement", check_refinement(&m, &items)?);
    }
    if input.samples > 0 {
        verdicts.merge("support", sample_supports(&m, input.samples, seed));
    }
    let proper = if m.field().is_some_and(|k| k.base.nvars() == 1 && k.base.relations().is_empty()) { Some(check_proper(&m)?.ok()) } else { None };
    let result = json!({
        "model": ModelOut::new(&m),
        "separated": m.is_separated(),
        "proper": proper,
    });
    Ok(Output { result, verdicts, dot: m.to_dot() })
}

/// Supports of products are unions of supports, on random products of the
/// listed elements over every open.
fn sample_supports(m: &ASchemeModel, n: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    let mut bad = Vec::new();
    let opens: Vec<usize> = (0..m.opens().len()).filter(|&u| !m.section(u).listed.is_empty()).collect();
    for _ in 0..n {
        if opens.is_empty() {
            break;
        }
        let u = opens[rng.random_range(0..opens.len())];
        let listed = &m.section(u).listed;
        let pick = |rng: &mut ChaCha8Rng| -> (MPoly, aschemes::PointSet) {
            let l = &listed[rng.random_range(0..listed.len())];
            (l.elem.clone(), l.support)
        };
        let ((f, sf), (g, sg)) = (pick(&mut rng), pick(&mut rng));
        let fg = f.mul(&g);
        if m.support_of(u, &fg) != sf.union(sg) {
            bad.push(format!("{} · {} over open {u}", m.ring(u).format(&f), m.ring(u).format(&g)));
        }
    }
    rep.push("multiplicative", bad.is_empty(), (!bad.is_empty()).then(|| bad.join("; ")));
    rep
}
