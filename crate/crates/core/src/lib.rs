//! Exact algebra for polynomial Hamiltonians with flows linear in time.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod factorize;
pub mod hamalg;
pub mod linalg;
pub mod normalform;
pub mod polycore;
pub mod sampling;

pub use error::{Error, Result};
