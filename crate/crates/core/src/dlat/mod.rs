//! Bounded distributive lattices and their finite spectra.

pub mod hom;
pub mod iso;
pub mod lattice;
pub mod oracle;
pub mod poset;
pub mod term;

pub use hom::LatHom;
pub use iso::{all_order_isomorphisms, all_posets, order_isomorphism, posets_isomorphic};
pub use lattice::{FinDLat, LatticeDoc};
pub use oracle::{materialize, Fragment, FreeLat, OracleLat, DEFAULT_CAP};
pub use poset::{FinPoset, PosetDoc};
pub use term::{leq_free, normal_form, LatExpr, LatTerm};
