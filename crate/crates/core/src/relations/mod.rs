//! Finite-precision search for K-linear relations among computed values.
//! Every result is evidence at a stated precision, never a proof.

pub mod expr;
pub mod linalg;
pub mod search;
pub mod suite;

pub use expr::Expr;
pub use search::{
    exhaustive_relations, find_linear_relations, kernel_matches_exhaustive, rational_reconstruct,
    rational_reconstruct_stable, Reconstruction, RelationBasis, RelationQuery, StableReconstruction, DEFAULT_SLACK,
};
pub use suite::{
    check_hypotheses, independence_report, is_even, known_relation_suite, HypothesisCheck, IndependenceConfig,
    IndependenceReport, SuiteConfig, SuiteReport,
};
