//! Spectral analysis of self-affine measures generated by Hadamard triples.

pub mod error;
pub mod lattice;
pub mod dynamics;
pub mod measure;
pub mod presets;
pub mod spectrum;
pub mod triple;
pub mod verify;

pub use error::{Error, Result};
pub use triple::{conjugate, factor_along, validate_hadamard, ConjugationMatrix, FactoredTriple, HadamardReport, HadamardTriple};
