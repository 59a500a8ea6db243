#![no_std]

//! Exact computations with derived representation schemes.
//!
//! Starting from an almost free DG resolution `R -> A` of a finitely generated
//! algebra, this crate builds the matrix-reduced algebra and its
//! abelianization `R_V` for `V = k^d`, computes weight-truncated homology with
//! exact rational arithmetic, and evaluates the trace maps from cyclic
//! homology, the periodicity bicomplexes and derived tangent complexes.
//!
//! Everything is pure and allocation-based; there is no IO here. The `drep`
//! crate carries the text formats and the command line.

extern crate alloc;

pub mod ainfty;
pub mod cyclic;
mod error;
pub mod forms;
pub mod homology;
pub mod linalg;
pub mod poly;
pub mod repfun;
pub mod traces;

pub use error::{Error, Limits, Result};
pub use poly::{
    CommMonomial, CommPoly, DgPresentation, Derivation, Flavor, GenKind, Generator, Monomial,
    NcPoly, Poly, Q, Var, Word,
};
