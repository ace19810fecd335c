//! Computational toolkit for the braid group Bₙ as a crossed module
//! over itself: free-group words, presentations, integer Smith normal
//! form, crossed modules, identity sequences among relations, coset
//! enumeration with the Schur double cover of Sₙ, the braid word
//! problem via handle reduction, and augmented racks.

pub mod braidwp;
pub mod cayley;
pub mod cosets;
pub mod error;
pub mod idseq;
pub mod intlin;
pub mod present;
pub mod racks;
pub mod words;
pub mod xmod;

pub use braidwp::BraidWord;
pub use cayley::CayleyTable;
pub use cosets::{schur_double_cover, symmetric_quotient, todd_coxeter, DEFAULT_COSET_CAP};
pub use error::{Error, Result};
pub use idseq::{build, central_element, h2_braid, triple_class_matrix, verify_all, Family, IdentitySequence};
pub use intlin::{cokernel_invariants, smith_normal_form, IntMatrix, SmithNormalForm};
pub use present::{artin_presentation, relator_name, ArtinPresentation, Presentation};
pub use words::{Alphabet, Letter, Word};
pub use xmod::{
    central_extension_module, conjugation_module, inner_automorphism_module,
    normal_subgroup_module, FiniteCrossedModule, FreeBasis, FreeCrossedElement, GroupContext,
    NilpotentExtension,
};
