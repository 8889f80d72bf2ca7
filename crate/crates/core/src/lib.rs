//! Exact mod-n computations for smooth representations of SL₂ and GL₂ over a
//! p-adic field, and the character bookkeeping for gluing functors between the
//! two lowest Harder–Narasimhan strata of Bun₂.
//!
//! The layers build on each other:
//! [`lambda`] (linear algebra over Z/n), [`padic`] (truncated O_E and the
//! finite-level projective line), [`rep`] (finite-level representation models),
//! [`sl2`] (tree and SL₂ cohomology), [`chars`] (symbolic character engine).

pub mod chars;
pub mod error;
pub mod lambda;
pub mod padic;
pub mod rep;
pub mod repspec;
pub mod sl2;
pub mod verify;

pub use error::{Error, Result};
