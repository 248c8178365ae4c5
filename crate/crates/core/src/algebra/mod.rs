//! Exact arithmetic shared by every other module.

mod bernoulli;
mod forms;
pub(crate) mod group;
mod hom;
mod matrix;
mod snf;

pub use bernoulli::{bernoulli, bernoulli_classical};
pub use forms::{arf_invariant, e8_form, hyperbolic_form, signature, QuadraticRefinement};
pub use group::FGAbelianGroup;
pub use hom::{integer_kernel, subgroup_generated, Homomorphism};
pub use matrix::IntMatrix;
pub use snf::{group_from_presentation, smith_normal_form, SmithForm};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is degenerate (determinant 0)")]
    Degenerate,
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("no cyclic direct summand of order {0}")]
    NotASummand(BigUint),
    #[error("matrix does not define a homomorphism: {0}")]
    IllDefinedHomomorphism(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
