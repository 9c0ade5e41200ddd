//! Reviews and per-seller trust profiles.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReviewError {
    #[error("rate '{0}' is not an integer between 1 and 5")]
    Rate(String),
    #[error("context is empty")]
    EmptyContext,
}

/// A star rating, 1 to 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rate(u8);

impl Rate {
    pub fn new(value: u8) -> Result<Self, ReviewError> {
        if (1..=5).contains(&value) {
            Ok(Rate(value))
        } else {
            Err(ReviewError::Rate(value.to_string()))
        }
    }

    pub fn parse(text: &str) -> Result<Self, ReviewError> {
        text.trim()
            .parse::<u8>()
            .map_err(|_| ReviewError::Rate(text.to_string()))
            .and_then(|v| Rate::new(v).map_err(|_| ReviewError::Rate(text.to_string())))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One collected rating. Date and link are kept exactly as collected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Review {
    pub context: String,
    pub rate: Rate,
    pub date: String,
    pub description: String,
    pub link: String,
}

impl Review {
    pub fn new(
        context: impl Into<String>,
        rate: Rate,
        date: impl Into<String>,
        description: impl Into<String>,
        link: impl Into<String>,
    ) -> Result<Self, ReviewError> {
        let context: String = context.into();
        if context.trim().is_empty() {
            return Err(ReviewError::EmptyContext);
        }
        Ok(Review {
            context,
            rate,
            date: date.into(),
            description: description.into(),
            link: link.into(),
        })
    }
}

/// Reviews of one seller in one context together with their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextRatings {
    reviews: Vec<Review>,
    aggregate: f64,
}

impl ContextRatings {
    fn from_reviews(reviews: Vec<Review>) -> Self {
        debug_assert!(!reviews.is_empty());
        let sum: u32 = reviews.iter().map(|r| u32::from(r.rate.get())).sum();
        let aggregate = f64::from(sum) / reviews.len() as f64;
        ContextRatings { reviews, aggregate }
    }

    pub fn reviews(&self) -> &[Review] {
        &self.reviews
    }

    pub fn len(&self) -> usize {
        self.reviews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reviews.is_empty()
    }

    /// Arithmetic mean of the rates.
    pub fn aggregate(&self) -> f64 {
        self.aggregate
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrustProfile {
    pub seller: String,
    contexts: BTreeMap<String, ContextRatings>,
}

impl TrustProfile {
    pub fn contexts(&self) -> &BTreeMap<String, ContextRatings> {
        &self.contexts
    }

    pub fn context(&self, name: &str) -> Option<&ContextRatings> {
        self.contexts.get(name)
    }

    pub fn aggregate(&self, name: &str) -> Option<f64> {
        self.context(name).map(ContextRatings::aggregate)
    }
}

/// Groups reviews by seller, then by context. Output is sorted by seller.
pub fn build_profiles<I, S>(reviews: I) -> Vec<TrustProfile>
where
    I: IntoIterator<Item = (S, Vec<Review>)>,
    S: Into<String>,
{
    let mut grouped: BTreeMap<String, BTreeMap<String, Vec<Review>>> = BTreeMap::new();
    for (seller, list) in reviews {
        let by_context = grouped.entry(seller.into()).or_default();
        for review in list {
            by_context
                .entry(review.context.clone())
                .or_default()
                .push(review);
        }
    }
    grouped
        .into_iter()
        .filter(|(_, contexts)| !contexts.is_empty())
        .map(|(seller, contexts)| TrustProfile {
            seller,
            contexts: contexts
                .into_iter()
                .map(|(c, list)| (c, ContextRatings::from_reviews(list)))
                .collect(),
        })
        .collect()
}

/// Drops contexts with fewer than `min_ratings` reviews, then sellers left
/// with fewer than `min_contexts` contexts.
pub fn filter_profiles(
    profiles: &[TrustProfile],
    min_contexts: usize,
    min_ratings: usize,
) -> Vec<TrustProfile> {
    profiles
        .iter()
        .filter_map(|p| {
            let contexts: BTreeMap<String, ContextRatings> = p
                .contexts
                .iter()
                .filter(|(_, r)| r.len() >= min_ratings)
                .map(|(c, r)| (c.clone(), r.clone()))
                .collect();
            (contexts.len() >= min_contexts && !contexts.is_empty()).then(|| TrustProfile {
                seller: p.seller.clone(),
                contexts,
            })
        })
        .collect()
}
