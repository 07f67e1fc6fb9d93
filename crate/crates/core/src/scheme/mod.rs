//! Finite models of 𝒜-schemes.

pub mod affine;
pub mod field;
pub mod glue;
pub mod iso;
pub mod model;
pub mod morphism;

pub use affine::{affine, fill_supports, principal_model};
pub use field::FunctionField;
pub use glue::{glue, Glued, Patch};
pub use iso::find_isomorphism;
pub use model::{apply_hom, ASchemeModel, Listed, PointData, Section, Stalk};
pub use morphism::{check_morphism, ASchemeMor};
