//! Spectral, cut, infinity-to-one and Grothendieck norms of Cayley graphs, vertex-transitive
//! matrices and general matrices, with Fourier analysis on finite groups.

pub mod cayley;
pub mod constructions;
pub mod error;
pub mod fourier;
pub mod group;
pub mod io;
pub mod matrix;
pub mod norms;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
