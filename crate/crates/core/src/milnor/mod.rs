//! Milnor K-theory of finite fields and of rational function fields over them.

mod field;
mod kelement;
mod ops;

pub use field::{FieldMap, FieldRef, Place, PlaceKind};
pub use kelement::{natural_modulus, CoordKey, KElement};
pub use ops::{
    cor, local_residue, log_minus_one, presentation, product, res, residue, residue_with_uniformizer, specialize,
    symbol, tame_symbol, Unit,
};
