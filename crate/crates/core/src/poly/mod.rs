//! Exact polynomial arithmetic over ℚ and Gröbner-basis computations.

pub mod algebra;
pub mod elim;
pub mod fraction;
pub mod groebner;
pub mod linalg;
pub mod mpoly;
pub mod order;
pub mod parse;
pub mod univariate;

pub use algebra::{AlgebraDoc, FPAlgebra, IdealDoc, IdealFG};
pub use fraction::{Fraction, MonicWitness};
pub use mpoly::{q, q_frac, MPoly, Q};
pub use order::MonomialOrder;
pub use univariate::UniPoly;
