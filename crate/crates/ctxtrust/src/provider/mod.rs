//! Sources of hit counts.
//!
//! Three providers sit behind [`HitCountProvider`]: a static table, an
//! offline document corpus, and a remote search engine. [`CachedProvider`]
//! puts a [`PairCache`] in front of any of them and implements the core
//! [`CountSource`] trait used for tree weighting.

mod cache;
mod config;
mod corpus;
mod remote;
mod table;

use std::io;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use ctxtrust_core::semantic::{CountSource, HitCounts, SemanticError};
use thiserror::Error;

pub use cache::{format_counts_tsv, parse_counts_tsv, PairCache};
pub use config::{Extraction, ProviderConfig, RemoteConfig, DEFAULT_CREDENTIAL_ENV};
pub use corpus::{tokenize, Corpus};
pub use remote::RemoteProvider;
pub use table::StaticTable;

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("no counts for pair ({x}, {y})")]
    MissingPair { x: String, y: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}, line {line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("corpus directory {0} contains no documents")]
    EmptyCorpus(PathBuf),
    #[error("{path} is not valid UTF-8 text")]
    NotUtf8 { path: PathBuf },
    #[error("query '{query}' failed after {attempts} attempts: {message}")]
    Remote {
        query: String,
        attempts: u32,
        message: String,
    },
    #[error("counts for ({x}, {y}) are inconsistent: {source}")]
    Inconsistent {
        x: String,
        y: String,
        source: SemanticError,
    },
    #[error("provider config: {0}")]
    Config(String),
}

/// Answers `(f(x), f(y), f(x,y), M)` for a term pair.
pub trait HitCountProvider {
    /// Counts oriented as `(x, y)`.
    fn counts(&self, x: &str, y: &str) -> Result<HitCounts, ProviderError>;
}

impl<P: HitCountProvider + ?Sized> HitCountProvider for Box<P> {
    fn counts(&self, x: &str, y: &str) -> Result<HitCounts, ProviderError> {
        (**self).counts(x, y)
    }
}

impl<P: HitCountProvider + ?Sized> HitCountProvider for &P {
    fn counts(&self, x: &str, y: &str) -> Result<HitCounts, ProviderError> {
        (**self).counts(x, y)
    }
}

/// Builds the provider a config describes.
pub fn open_provider(
    config: &ProviderConfig,
) -> Result<Box<dyn HitCountProvider + Send + Sync>, ProviderError> {
    Ok(match config {
        ProviderConfig::Static { table } => Box::new(StaticTable::load(table)?),
        ProviderConfig::Corpus { dir } => Box::new(Corpus::load(dir)?),
        ProviderConfig::Remote(remote) => Box::new(RemoteProvider::new(remote.clone())?),
    })
}

/// Cache-first lookup: cached counts are returned without touching
/// `provider`; otherwise the provider answers and the cache is filled.
pub fn fetch_counts<P: HitCountProvider + ?Sized>(
    provider: &P,
    cache: &PairCache,
    x: &str,
    y: &str,
) -> Result<HitCounts, ProviderError> {
    if let Some(hit) = cache.get(x, y) {
        return Ok(hit);
    }
    let counts = provider.counts(x, y)?;
    cache.insert(x, y, counts);
    Ok(counts)
}

/// A provider behind a pair cache, counting how often it had to go
/// upstream.
pub struct CachedProvider<P> {
    inner: P,
    cache: PairCache,
    upstream: AtomicUsize,
}

impl<P: HitCountProvider> CachedProvider<P> {
    pub fn new(inner: P, cache: PairCache) -> Self {
        CachedProvider {
            inner,
            cache,
            upstream: AtomicUsize::new(0),
        }
    }

    pub fn cache(&self) -> &PairCache {
        &self.cache
    }

    pub fn into_cache(self) -> PairCache {
        self.cache
    }

    /// Pairs that missed the cache and went to the inner provider.
    pub fn upstream_lookups(&self) -> usize {
        self.upstream.load(Ordering::Relaxed)
    }
}

impl<P: HitCountProvider> HitCountProvider for CachedProvider<P> {
    fn counts(&self, x: &str, y: &str) -> Result<HitCounts, ProviderError> {
        if let Some(hit) = self.cache.get(x, y) {
            return Ok(hit);
        }
        self.upstream.fetch_add(1, Ordering::Relaxed);
        let counts = self.inner.counts(x, y)?;
        self.cache.insert(x, y, counts);
        Ok(counts)
    }
}

impl<P: HitCountProvider> CountSource for CachedProvider<P> {
    type Error = ProviderError;

    fn hit_counts(&mut self, x: &str, y: &str) -> Result<HitCounts, ProviderError> {
        HitCountProvider::counts(self, x, y)
    }
}
