//! Representations, the Fourier transform on finite groups, and singular-vector witnesses.

pub mod irrep;
pub mod transform;
pub mod witness;

pub use irrep::{
    build_irrep_table, dimension_profile, parse_irreps, serialize_irreps, validate_irrep_table, Irrep, IrrepIssue,
    IrrepTable,
};
pub use transform::{
    abelian_character_norm, fourier_inverse, fourier_transform, schur_average, spectral_via_irreps, CharacterNorm,
    FourierCoefficients,
};
pub use witness::{svd_witness, top_complex_singular_triple, ComplexSingularTriple, SvdWitness};
