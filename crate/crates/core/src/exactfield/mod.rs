//! Exact arithmetic for the field universe: finite fields, univariate
//! polynomials and their factorization, rational functions.

pub mod factor;
pub mod ff;
pub mod parse;
pub mod poly;
pub mod ratfunc;

pub use factor::{factor_poly, roots};
pub use ff::{
    is_prime, make_field, make_field_capped, mod_inv, norm_ff, prime_power, FFElem, FfEmbedding, FiniteField, DEFAULT_FIELD_CAP,
};
pub use poly::{irreducibles_of_degree, monic_of_degree, Poly};
pub use ratfunc::{unit_factor, FactoredUnit, RationalFunction};
