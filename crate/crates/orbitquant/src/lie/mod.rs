//! Exact Lie algebra layer: structure constants, BCH product, coadjoint action,
//! dilations and left-invariant vector fields.

pub mod algebra;
pub mod bch;
pub mod group;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use algebra::{Defect, GroupFile, LieAlgebraSpec};
pub use bch::{DynkinTable, DEFAULT_BCH_DEPTH};
pub use group::{apply_field, apply_multi, Group};
pub use poly::Poly;
pub use scalar::{parse_rat, rat, rint, Rat, Ring};
