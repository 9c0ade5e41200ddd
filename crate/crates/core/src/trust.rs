//! Trust transfer between contexts: the rate known in one context, scaled
//! by the similarity of that context to the one being asked about.

use alloc::string::{String, ToString};

use thiserror::Error;

use crate::dataset::TrustProfile;
use crate::float;
use crate::ontology::OntologyTree;
use crate::similarity::{ContextDescriptors, Measure, SimilarityError};

/// Ceiling of the rating scale.
pub const MAX_RATE: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrustError {
    #[error("similarity must be positive, got {0}")]
    NonPositiveSimilarity(f64),
    #[error("known rate {0} is outside [1, 5]")]
    RateOutOfRange(f64),
    #[error("seller '{seller}' has no ratings in context '{context}'")]
    MissingContext { seller: String, context: String },
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
}

/// `known_rate * similarity`, clamped into `[0, 5]`.
pub fn predict_trust(known_rate: f64, similarity: f64) -> Result<f64, TrustError> {
    if !(1.0..=MAX_RATE).contains(&known_rate) {
        return Err(TrustError::RateOutOfRange(known_rate));
    }
    if similarity.is_nan() || similarity <= 0.0 {
        return Err(TrustError::NonPositiveSimilarity(similarity));
    }
    Ok(float::clamp(known_rate * similarity, 0.0, MAX_RATE))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrustPrediction {
    pub seller: String,
    pub known_context: String,
    pub unknown_context: String,
    pub similarity: f64,
    pub known_rate: f64,
    pub predicted_rate: f64,
}

/// Predicts `unknown` from the seller's aggregate rate in `known`.
///
/// Tree measures require both contexts to be nodes of `tree`; `unknown`
/// need not appear in the profile.
pub fn predict_for_pair(
    profile: &TrustProfile,
    tree: &OntologyTree,
    descriptors: &ContextDescriptors,
    measure: Measure,
    known: &str,
    unknown: &str,
) -> Result<TrustPrediction, TrustError> {
    let known_rate = profile
        .aggregate(known)
        .ok_or_else(|| TrustError::MissingContext {
            seller: profile.seller.clone(),
            context: known.to_string(),
        })?;
    let similarity = measure.similarity(tree, descriptors, known, unknown)?;
    let predicted_rate = predict_trust(known_rate, similarity)?;
    Ok(TrustPrediction {
        seller: profile.seller.clone(),
        known_context: known.to_string(),
        unknown_context: unknown.to_string(),
        similarity,
        known_rate,
        predicted_rate,
    })
}
