//! Cycle premodules: data (D1)-(D4) and their relations.

mod instance;
pub mod sample;
mod suite;

pub use instance::{milnor_instance, mod_instance, mutant_instance, parse_instance, twist_instance, Mutant, PremoduleInstance};
pub use suite::{
    check_relation, compositum_points, replay, run_relation_suite, trial_rng, unit_of, Failure, RelationReport,
    SuiteConfig, Trial, CATALOGUE,
};
