//! Context similarity over semantically weighted ontology trees.
//!
//! Edges of a context ontology are weighted by the Normalized Similarity
//! Score of their endpoint labels, computed from co-occurrence hit counts.
//! Similarity between two contexts then follows from the weights on the
//! unique path joining them, and a seller's trust in an unseen context is
//! predicted by scaling the rate known in another context.
//!
//! The crate is `no_std` (it needs `alloc`). Reading files, talking to
//! search engines and the command line live in the `ctxtrust` crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod dataset;
pub mod evaluation;
pub mod ontology;
pub mod semantic;
pub mod similarity;
pub mod trust;

mod float;

pub use dataset::{build_profiles, filter_profiles, ContextRatings, Rate, Review, TrustProfile};
pub use evaluation::{
    error_percentage, pearson, rate_difference, run_comparison, ComparisonReport, ErrorPct,
    EvaluationRecord, MeasureSummary, PairSpec,
};
pub use ontology::{EdgeAnnotation, EdgeRef, NodeId, NodePath, OntologyTree, Weighing};
pub use semantic::{ngd, nss, CountSource, Epsilon, HitCounts, Ngd, PairKey};
pub use similarity::{ContextDescriptors, KeywordContext, Measure, PathMode, TaskContext};
pub use trust::{predict_for_pair, predict_trust, TrustPrediction};
