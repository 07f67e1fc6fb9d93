//! Standard small models used throughout: lines, the projective line,
//! the doubled origin, and plane cubics.

use crate::dlat::DEFAULT_CAP;
use crate::error::Result;
use crate::pointset::PointSet;
use crate::poly::{FPAlgebra, Fraction};
use crate::scheme::{affine, glue, ASchemeModel, FunctionField, Glued, Patch};

/// `ℚ[t]`.
pub fn line_algebra() -> FPAlgebra {
    FPAlgebra::polynomial_ring(&["t"])
}

/// Affine line seen through `D(f)` for the given basic elements.
pub fn affine_line_with(basics: &[&str]) -> Result<ASchemeModel> {
    let a = line_algebra();
    let b = basics.iter().map(|s| a.poly(s)).collect::<Result<Vec<_>>>()?;
    affine(&a, &b, true, DEFAULT_CAP)
}

/// Affine line with opens `∅, D(t), X`.
pub fn affine_line() -> ASchemeModel {
    affine_line_with(&["t"]).expect("affine line")
}

/// The chart `Spec ℚ[u]` placed in `ℚ(t)` by `u = 1/t`.
pub fn chart_at_infinity() -> ASchemeModel {
    let b = FPAlgebra::polynomial_ring(&["u"]);
    let m = affine(&b, &[b.poly("u").unwrap()], true, DEFAULT_CAP).expect("chart");
    let k = FunctionField::new(line_algebra());
    let inv_t = Fraction::parse(&k.base, "1/t").unwrap();
    let m = m.reembed(k, &[inv_t]).expect("u = 1/t");
    let labels = m.space().labels().iter().map(|l| if l == "(u)" { "∞".to_string() } else { l.clone() }).collect();
    m.with_labels(labels)
}

/// The generic point of a model, as an open.
pub fn generic_open(m: &ASchemeModel) -> PointSet {
    PointSet::from_indices(m.space().generic_points())
}

/// Projective line glued from `ℚ[t]` and `ℚ[1/t]` along `D(t)`.
pub fn projective_line() -> Glued {
    let a = affine_line();
    let b = chart_at_infinity();
    let (ga, gb) = (generic_open(&a), generic_open(&b));
    let pieces = vec![a, b];
    let patch = Patch::by_labels(&pieces, 0, 1, ga, gb).expect("generic points match");
    glue(&pieces, &[patch]).expect("projective line")
}

/// Two affine lines glued along `D(t)` by the identity.
pub fn doubled_origin() -> Glued {
    let a = affine_line();
    let g = generic_open(&a);
    let pieces = vec![a.clone(), a];
    let patch = Patch::by_labels(&pieces, 0, 1, g, g).expect("generic points match");
    glue(&pieces, &[patch]).expect("doubled origin")
}

/// Cuspidal cubic `y² = x³`.
pub fn cusp_algebra() -> FPAlgebra {
    FPAlgebra::parse(&["x", "y"], &["y^2 - x^3"]).unwrap()
}

/// Nodal cubic `y² = x²(x + 1)`.
pub fn node_algebra() -> FPAlgebra {
    FPAlgebra::parse(&["x", "y"], &["y^2 - x^2*(x + 1)"]).unwrap()
}
