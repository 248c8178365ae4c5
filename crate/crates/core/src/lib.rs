//! Exact-arithmetic toolkit for the decision theory of immersions and
//! embeddings of manifolds in Euclidean space.
//!
//! The crate is organised by subsystem:
//!
//! - [`algebra`]: big integers and rationals, Bernoulli numbers, Smith normal
//!   form, finitely generated abelian groups and their homomorphisms, and
//!   integer quadratic-form invariants (signature, Arf invariant).
//! - [`tables`]: bundled reference data for homotopy groups of spheres,
//!   Whitehead squares, image-of-J orders and exotic-sphere orders.
//! - [`gn`]: homotopy groups of the monoid `G_n` of self-equivalences of
//!   `S^(n-1)`, assembled from the evaluation fibration.
//! - [`diophantine`]: quadratic Diophantine systems and a bounded,
//!   budgeted semi-decision solver with modular filters.
//! - [`bridge`]: the compiler between quadratic systems and
//!   Whitehead-product lifting instances, plus thickening metadata.
//! - [`obstruction`]: characteristic-class data and rational obstruction
//!   tests.
//! - [`classify`]: decidability classification of immersion and embedding
//!   problems by dimension range.
//! - [`exotic`]: Kervaire–Milnor arithmetic for groups of homotopy spheres.
//! - [`schema`]: versioned JSON envelopes shared by the command-line tool.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod bridge;
pub mod classify;
pub mod diophantine;
pub mod exotic;
pub mod gn;
pub mod obstruction;
pub mod schema;
pub mod tables;

pub use algebra::{FGAbelianGroup, IntMatrix};
pub use diophantine::{QuadSystem, SolveOutcome};
pub use tables::SphereTables;
