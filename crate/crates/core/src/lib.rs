//! Exact computations with Milnor K-theory, cycle premodules and cycle
//! complexes over finite fields and rational function fields.

pub mod cli;
pub mod cycles;
pub mod error;
pub mod exactfield;
pub mod milnor;
pub mod premodule;
pub mod schemes;

pub use error::{Error, Result};
