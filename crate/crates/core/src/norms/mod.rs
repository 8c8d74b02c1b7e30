//! Spectral, cut, infinity-to-one and Grothendieck norms, with cross-checks.

pub mod cut;
pub mod grothendieck;
pub mod group;
pub mod report;
pub mod spectral;
pub mod verify;

pub use cut::{cut_norm_exact, infty_one_exact, CutWitness, SignWitness, DEFAULT_EXACT_LIMIT};
pub use grothendieck::{
    default_rank, grothendieck_bm, grothendieck_bounds, BmConfig, BmResult, GrothendieckBracket, VectorAssignment,
    GROTHENDIECK_CONSTANT,
};
pub use group::{group_spectral, translate_witness, TranslateWitness};
pub use report::{compute_report, NormReport, ReportOptions};
pub use spectral::{spectral_norm, symmetric_spectrum, top_singular_triple, SingularTriple, SymmetricEigen};
pub use verify::{
    eigenvalue_bound_check, epsilon_uniformity, mixing_lemma_check, verify_sandwich, Check, EigenvalueBoundCheck,
    MixingCheck, Uniformity,
};
