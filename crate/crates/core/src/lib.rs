//! Finite computational models of point-free schemes over ℚ.

pub mod corpus;
pub mod dlat;
pub mod doc;
pub mod error;
pub mod limits;
pub mod nagata;
pub mod normalization;
pub mod pointset;
pub mod poly;
pub mod report;
pub mod reticulation;
pub mod scheme;
pub mod zr;

pub use error::{Error, Result};
pub use pointset::PointSet;
pub use poly::{FPAlgebra, Fraction, IdealFG, MPoly, MonicWitness, MonomialOrder, UniPoly, Q};
