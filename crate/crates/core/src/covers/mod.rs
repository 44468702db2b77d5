//! Finite covers from permutation representations of the face-pairing
//! presentation.

mod cover;
mod lowindex;
mod perm;
mod regular;
mod search;

use thiserror::Error;

use crate::complex::ValidationReport;
use crate::presentation::PresentationError;

pub use cover::{build_cover, lift_spec, CoverComplex, LiftedVertices};
pub use lowindex::{enumerate_reps, for_each_rep};
pub use perm::{Permutation, PermutationRep};
pub use regular::{check_factors, common_cover, regularize, sample_words, verify_rep};
pub use search::{
    search_cover_killing_diagonals, Checkpoint, Exhaustion, ExhaustionReason, FoundCover,
    SearchConfig, SearchMode, SearchOutcome, SearchStats, CHECKPOINT_VERSION,
};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("rep has {found} generators, presentation has {expected}")]
    GeneratorCount { expected: usize, found: usize },
    #[error("relator {relator} does not act trivially")]
    RelatorViolated { relator: usize },
    #[error("representation is not transitive")]
    NotTransitive,
    #[error("regularization cap exceeded: image order is at least {at_least}, cap is {cap}")]
    CapExceeded { at_least: usize, cap: usize },
    #[error("cover does not factor through its input: word {word} fixes point 1 upstairs only")]
    NotFactoring { word: String },
    #[error("reps have different generator counts")]
    MixedGenerators,
    #[error("no reps given")]
    Empty,
    #[error("lifted complex is disconnected")]
    NotConnected,
    #[error("lifted complex is invalid: {0}")]
    Invalid(Box<ValidationReport>),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("complex has no returning diagonals; no cover is needed")]
    NoReturningDiagonals,
    #[error("bad checkpoint: {0}")]
    Checkpoint(String),
    #[error("cannot parse permutation: {0}")]
    Parse(String),
    #[error("cover verification failed: {0}")]
    Verification(String),
}
