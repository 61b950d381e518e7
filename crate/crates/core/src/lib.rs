//! Compositional substrates, budgeted hypothesis spaces with chunk
//! learning, Bayesian belief fixation, and the graded concept-possession
//! metric degree = T(c) - R(c).
//!
//! Modules:
//! - [`term`]: terms, bases, canonical serialization.
//! - [`sk`]: SK combinatory logic with leftmost-outermost reduction.
//! - [`ca`]: elementary cellular automata (Rule 110 and friends).
//! - [`space`]: budgeted compositional closures over a Boolean DSL.
//! - [`chunks`]: chunk extraction and expressive-power gain.
//! - [`inference`]: prior, likelihood, posterior, selection information.
//! - [`possession`]: information arithmetic and the possession metric.

pub mod ca;
pub mod chunks;
pub mod inference;
pub mod possession;
pub mod sk;
pub mod space;
pub mod term;

pub use ca::{ca_run, ca_step, Boundary, RuleTable, Tape};
pub use chunks::{extend_basis, expressive_gain, extract_chunks, ChunkCandidate, GainReport};
pub use inference::{
    fixation_curve, posterior, selection_info, Granularity, LikelihoodModel, PosteriorTable,
    PriorModel,
};
pub use possession::{
    degree_of_possession, log_factorial, required_info, stirling_log_factorial, term_total_info,
    text_info, InfoQuantity, PossessionReport, SelectionModel, Unit,
};
pub use sk::{
    sk_decode_bool, sk_encode, sk_normalize, sk_parse, sk_step, ReductionStatus, ReductionTrace,
    SkTerm, SkValue,
};
pub use space::{evaluate, parse_dataset, BudgetedSpace, FeatureObject, SemanticClass, TruthTable};
pub use term::{parse_term, Basis, Symbol, Term, TermError};
