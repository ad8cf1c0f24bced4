//! The cycle complex of a scheme model with coefficients in a premodule
//! instance, its differential and low-degree cohomology.

mod checks;
mod chow;
mod class;
mod differential;
pub mod lattice;
mod maps;

pub use checks::{c_trial, check_c, check_fd, fd_trial, formal_sum, random_scheme, sample_class};
pub use chow::{a0_membership, cohomology_window, GroupPresentation};
pub use class::{formal_residue, Coord, CycleClass, FormalSum, FormalSymbol, FormalUnit};
pub use differential::{differential, differential_window, residue_pair, support_degree, support_places, PlaceSource};
pub use maps::{
    divisor_pullback, evaluate_unit, flat_pullback, place_below, pushforward_finite, reciprocity_defect, trace,
    Morphism, MorphismKind, MAX_SUBSTITUTION_DEGREE,
};
