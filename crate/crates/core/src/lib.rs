//! Desk-scale toolkit for finite etale groupoids and their twisted
//! convolution algebras.
//!
//! The crate is organised around one pipeline: build a finite groupoid
//! ([`groupoid`]), put a normalized 2-cocycle on it ([`cocycle`]), form the
//! twisted convolution algebra with its diagonal subalgebra ([`algebra`]),
//! and reconstruct the groupoid and twist back from the algebraic data
//! ([`weyl`]). The [`symbolic`] module covers the graph-dynamical side
//! (cycle conditions, essential freeness of the shift, germ analysis) and
//! [`corpus`] generates the exhaustive and randomized test families the
//! whole crate is validated against.
//!
//! Everything is a pure function over immutable values; all enumeration
//! orders are canonical (units then arrows, sorted lexicographically by id),
//! so every result is deterministic and reports are byte-stable.

pub mod algebra;
pub mod cmatrix;
pub mod cocycle;
pub mod corpus;
pub mod groupoid;
pub mod io;
pub mod symbolic;
pub mod util;
pub mod weyl;

pub use num_complex::Complex64;
