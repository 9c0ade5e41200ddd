//! Normalized Google Distance and Normalized Similarity Score.
//!
//! Both are computed from four hit counts: pages containing `x`, pages
//! containing `y`, pages containing both, and the size of the index. The
//! logarithm base cancels in the ratio, so natural logs are used.

use alloc::string::String;
use core::fmt;

use thiserror::Error;

use crate::float;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticError {
    #[error("invalid hit counts (fx={fx}, fy={fy}, fxy={fxy}, m={m}): {reason}")]
    InvalidCounts {
        fx: u64,
        fy: u64,
        fxy: u64,
        m: u64,
        reason: &'static str,
    },
    #[error("term has no hits, distance is undefined")]
    UndefinedTerm,
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),
}

/// Hit counts for a term pair: `f(x)`, `f(y)`, `f(x,y)` and the index size `M`.
///
/// Always valid once constructed: `m > 0`, every count is at most `m`
/// and `fxy <= min(fx, fy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HitCounts {
    fx: u64,
    fy: u64,
    fxy: u64,
    m: u64,
}

impl HitCounts {
    pub fn new(fx: u64, fy: u64, fxy: u64, m: u64) -> Result<Self, SemanticError> {
        let invalid = |reason| SemanticError::InvalidCounts {
            fx,
            fy,
            fxy,
            m,
            reason,
        };
        if m == 0 {
            return Err(invalid("m must be positive"));
        }
        if fx > m || fy > m {
            return Err(invalid("single-term count exceeds m"));
        }
        if fxy > fx.min(fy) {
            return Err(invalid("joint count exceeds a single-term count"));
        }
        Ok(HitCounts { fx, fy, fxy, m })
    }

    pub fn fx(&self) -> u64 {
        self.fx
    }

    pub fn fy(&self) -> u64 {
        self.fy
    }

    pub fn fxy(&self) -> u64 {
        self.fxy
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The same counts seen from `(y, x)`.
    pub fn swapped(self) -> Self {
        HitCounts {
            fx: self.fy,
            fy: self.fx,
            ..self
        }
    }
}

/// Result of the distance computation; terms that never co-occur are
/// infinitely far apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ngd {
    Finite(f64),
    Infinite,
}

impl Ngd {
    pub fn value(self) -> f64 {
        match self {
            Ngd::Finite(v) => v,
            Ngd::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Ngd::Infinite)
    }
}

impl fmt::Display for Ngd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ngd::Finite(v) => write!(f, "{v:.6}"),
            Ngd::Infinite => f.write_str("inf"),
        }
    }
}

/// Normalized Google Distance with natural logarithms.
pub fn ngd(counts: &HitCounts) -> Result<Ngd, SemanticError> {
    ngd_with_log(counts, float::ln)
}

/// Normalized Google Distance using the supplied logarithm.
///
/// Any base gives the same answer up to rounding.
pub fn ngd_with_log(counts: &HitCounts, log: impl Fn(f64) -> f64) -> Result<Ngd, SemanticError> {
    if counts.fx == 0 || counts.fy == 0 {
        return Err(SemanticError::UndefinedTerm);
    }
    if counts.fxy == 0 {
        return Ok(Ngd::Infinite);
    }
    let lx = log(counts.fx as f64);
    let ly = log(counts.fy as f64);
    let lxy = log(counts.fxy as f64);
    let lm = log(counts.m as f64);

    // Integer comparisons decide the degenerate cases exactly.
    let numerator_zero = counts.fxy == counts.fx.max(counts.fy);
    let denominator_zero = counts.fx.min(counts.fy) == counts.m;
    if numerator_zero {
        return Ok(Ngd::Finite(0.0));
    }
    if denominator_zero {
        return Ok(Ngd::Infinite);
    }
    let numerator = lx.max(ly) - lxy;
    let denominator = lm - lx.min(ly);
    Ok(Ngd::Finite(numerator / denominator))
}

/// Lower bound applied to similarity scores and edge weights.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Epsilon(f64);

impl Epsilon {
    pub const DEFAULT: Epsilon = Epsilon(0.01);

    pub fn new(value: f64) -> Result<Self, SemanticError> {
        if value > 0.0 && value <= 1.0 {
            Ok(Epsilon(value))
        } else {
            Err(SemanticError::InvalidEpsilon(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon::DEFAULT
    }
}

/// Why a score was pushed down to the epsilon floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// `f(x,y) = 0`.
    NoCooccurrence,
    /// One of the terms has no hits at all.
    UndefinedTerm,
    /// `1 - NGD` fell below epsilon.
    BelowFloor,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Degeneracy::NoCooccurrence => "terms never co-occur",
            Degeneracy::UndefinedTerm => "a term has no hits",
            Degeneracy::BelowFloor => "distance at or beyond 1",
        })
    }
}

/// Normalized Similarity Score, `1 - NGD`, clamped into `[epsilon, 1]`.
pub fn nss(counts: &HitCounts, epsilon: Epsilon) -> Result<f64, SemanticError> {
    let distance = ngd(counts)?;
    Ok(score_from_distance(distance, epsilon).0)
}

/// Like [`nss`] but total: undefined terms also land on the floor, and the
/// reason for any flooring is reported.
pub fn nss_or_floor(counts: &HitCounts, epsilon: Epsilon) -> (f64, Option<Degeneracy>) {
    match ngd(counts) {
        Ok(distance) => score_from_distance(distance, epsilon),
        Err(_) => (epsilon.get(), Some(Degeneracy::UndefinedTerm)),
    }
}

fn score_from_distance(distance: Ngd, epsilon: Epsilon) -> (f64, Option<Degeneracy>) {
    match distance {
        Ngd::Infinite => (epsilon.get(), Some(Degeneracy::NoCooccurrence)),
        Ngd::Finite(d) => {
            let raw = 1.0 - d;
            if raw < epsilon.get() {
                (epsilon.get(), Some(Degeneracy::BelowFloor))
            } else {
                (float::clamp(raw, epsilon.get(), 1.0), None)
            }
        }
    }
}

/// Cache key for a term pair: lowercased, trimmed and ordered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairKey {
    a: String,
    b: String,
}

impl PairKey {
    /// Normalizes `(x, y)`. The flag is true when the terms were swapped to
    /// put them in order, in which case counts for `(x, y)` must be
    /// [`HitCounts::swapped`] before being stored under this key.
    pub fn normalize(x: &str, y: &str) -> (PairKey, bool) {
        let x = x.trim().to_lowercase();
        let y = y.trim().to_lowercase();
        if x <= y {
            (PairKey { a: x, b: y }, false)
        } else {
            (PairKey { a: y, b: x }, true)
        }
    }

    pub fn new(x: &str, y: &str) -> PairKey {
        Self::normalize(x, y).0
    }

    pub fn first(&self) -> &str {
        &self.a
    }

    pub fn second(&self) -> &str {
        &self.b
    }
}

/// Anything able to answer hit counts for a pair of terms.
pub trait CountSource {
    type Error;

    /// Counts oriented as `(x, y)`: `fx` belongs to `x`.
    fn hit_counts(&mut self, x: &str, y: &str) -> Result<HitCounts, Self::Error>;
}

impl<F, E> CountSource for F
where
    F: FnMut(&str, &str) -> Result<HitCounts, E>,
{
    type Error = E;

    fn hit_counts(&mut self, x: &str, y: &str) -> Result<HitCounts, E> {
        self(x, y)
    }
}
