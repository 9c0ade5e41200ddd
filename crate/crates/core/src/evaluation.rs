//! Prediction error, rate differences and measure comparison.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::dataset::TrustProfile;
use crate::float;
use crate::ontology::OntologyTree;
use crate::similarity::{ContextDescriptors, Measure};
use crate::trust::{self, TrustError, MAX_RATE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvaluationError {
    #[error("sequences have lengths {0} and {1}")]
    Arity(usize, usize),
    #[error("need at least two observations, got {0}")]
    TooFew(usize),
    #[error("a sequence has zero variance")]
    ZeroVariance,
    #[error("seller '{seller}' has no ratings in context '{context}'")]
    MissingContext { seller: String, context: String },
    #[error("pair {pair}: unknown seller (not loaded or filtered out)")]
    UnknownSeller { pair: Box<PairSpec> },
    #[error("pair {pair}, measure {measure}: {source}")]
    Pair {
        pair: Box<PairSpec>,
        measure: &'static str,
        source: Box<TrustError>,
    },
}

/// Signed and absolute prediction error on the 5-point scale, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPct {
    pub signed: f64,
    pub abs: f64,
}

/// `(predicted - real) / 5 * 100`.
pub fn error_percentage(predicted: f64, real_rate: f64) -> ErrorPct {
    let signed = (predicted - real_rate) / MAX_RATE * 100.0;
    ErrorPct {
        signed,
        abs: float::abs(signed),
    }
}

/// `|aggregate(c1) - aggregate(c2)|` for one seller.
pub fn rate_difference(profile: &TrustProfile, c1: &str, c2: &str) -> Result<f64, EvaluationError> {
    let get = |c: &str| {
        profile
            .aggregate(c)
            .ok_or_else(|| EvaluationError::MissingContext {
                seller: profile.seller.clone(),
                context: c.to_string(),
            })
    };
    Ok(float::abs(get(c1)? - get(c2)?))
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, EvaluationError> {
    if xs.len() != ys.len() {
        return Err(EvaluationError::Arity(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(EvaluationError::TooFew(xs.len()));
    }
    let constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if constant(xs) || constant(ys) {
        return Err(EvaluationError::ZeroVariance);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EvaluationError::ZeroVariance);
    }
    // The (n - 1) factors cancel.
    Ok(float::clamp(sxy / float::sqrt(sxx * syy), -1.0, 1.0))
}

/// A seller with a known and an unknown context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSpec {
    pub seller: String,
    pub known: String,
    pub unknown: String,
}

impl PairSpec {
    pub fn new(
        seller: impl Into<String>,
        known: impl Into<String>,
        unknown: impl Into<String>,
    ) -> Self {
        PairSpec {
            seller: seller.into(),
            known: known.into(),
            unknown: unknown.into(),
        }
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.seller, self.known, self.unknown)
    }
}

/// One prediction trial scored against the real aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord {
    pub seller: String,
    pub known_context: String,
    pub unknown_context: String,
    pub measure: Measure,
    pub similarity: f64,
    pub predicted_rate: f64,
    pub real_rate: f64,
    pub signed_error_pct: f64,
    pub abs_error_pct: f64,
    pub rate_difference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSummary {
    pub measure: Measure,
    pub rows: usize,
    pub mean_abs_error_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    /// Ordered by pair, then by measure, as given.
    pub records: Vec<EvaluationRecord>,
    pub summary: Vec<MeasureSummary>,
    /// Correlation between rate difference and the absolute error of the
    /// first weighted measure; absent when undefined.
    pub pearson_rate_difference: Option<f64>,
}

impl ComparisonReport {
    pub fn mean_abs_error(&self, measure: Measure) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.measure == measure)
            .map(|s| s.mean_abs_error_pct)
    }
}

/// Predicts every pair with every measure and scores it against the
/// seller's real aggregate in the unknown context.
pub fn run_comparison(
    profiles: &[TrustProfile],
    tree: &OntologyTree,
    descriptors: &ContextDescriptors,
    measures: &[Measure],
    pairs: &[PairSpec],
) -> Result<ComparisonReport, EvaluationError> {
    let mut records = Vec::with_capacity(pairs.len() * measures.len());
    for pair in pairs {
        let profile = profiles
            .iter()
            .find(|p| p.seller == pair.seller)
            .ok_or_else(|| EvaluationError::UnknownSeller {
                pair: Box::new(pair.clone()),
            })?;
        let real_rate = profile
            .aggregate(&pair.unknown)
            .ok_or_else(|| EvaluationError::Pair {
                pair: Box::new(pair.clone()),
                measure: "real rate",
                source: Box::new(TrustError::MissingContext {
                    seller: pair.seller.clone(),
                    context: pair.unknown.clone(),
                }),
            })?;
        let difference = rate_difference(profile, &pair.known, &pair.unknown).map_err(|_| {
            EvaluationError::Pair {
                pair: Box::new(pair.clone()),
                measure: "rate difference",
                source: Box::new(TrustError::MissingContext {
                    seller: pair.seller.clone(),
                    context: pair.known.clone(),
                }),
            }
        })?;
        for &measure in measures {
            let prediction = trust::predict_for_pair(
                profile,
                tree,
                descriptors,
                measure,
                &pair.known,
                &pair.unknown,
            )
            .map_err(|source| EvaluationError::Pair {
                pair: Box::new(pair.clone()),
                measure: measure.name(),
                source: Box::new(source),
            })?;
            let err = error_percentage(prediction.predicted_rate, real_rate);
            records.push(EvaluationRecord {
                seller: pair.seller.clone(),
                known_context: pair.known.clone(),
                unknown_context: pair.unknown.clone(),
                measure,
                similarity: prediction.similarity,
                predicted_rate: prediction.predicted_rate,
                real_rate,
                signed_error_pct: err.signed,
                abs_error_pct: err.abs,
                rate_difference: difference,
            });
        }
    }

    let summary = measures
        .iter()
        .map(|&measure| {
            let errors: Vec<f64> = records
                .iter()
                .filter(|r| r.measure == measure)
                .map(|r| r.abs_error_pct)
                .collect();
            let mean = if errors.is_empty() {
                0.0
            } else {
                errors.iter().sum::<f64>() / errors.len() as f64
            };
            MeasureSummary {
                measure,
                rows: errors.len(),
                mean_abs_error_pct: mean,
            }
        })
        .collect();

    let pearson_rate_difference = measures
        .iter()
        .find(|m| matches!(m, Measure::Weighted(_)))
        .and_then(|&weighted| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = records
                .iter()
                .filter(|r| r.measure == weighted)
                .map(|r| (r.rate_difference, r.abs_error_pct))
                .unzip();
            pearson(&xs, &ys).ok()
        });

    Ok(ComparisonReport {
        records,
        summary,
        pearson_rate_difference,
    })
}
