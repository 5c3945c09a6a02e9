//! Exact coefficients, sparse polynomials, parsing and printing.

mod coeff;
mod matrix;
mod parse;
mod poly;
mod scalar;

pub use coeff::{Coeff, FieldSpec};
pub use matrix::{
    compose_map, dot, evaluate_vec, format_vec, identity_map, vec_add, vec_is_zero, vec_sub, vec_to_float, Mat,
    PolyMatrix, PolyVec,
};
pub use parse::{monomial_term, parse, parse_constant, parse_in, parse_point};
pub use poly::{Monomial, Poly, Vars, DEFAULT_DEGREE_CAP};
pub use scalar::Scalar;
