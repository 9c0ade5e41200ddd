use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use ctxtrust_core::semantic::{HitCounts, PairKey};

use super::{cache::parse_counts_tsv, HitCountProvider, ProviderError};

/// Fixed counts read from a table in the cache file format.
#[derive(Debug, Clone, Default)]
pub struct StaticTable {
    entries: BTreeMap<PairKey, HitCounts>,
}

impl StaticTable {
    pub fn load(path: &Path) -> Result<Self, ProviderError> {
        let text = fs::read_to_string(path).map_err(|source| ProviderError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(StaticTable {
            entries: parse_counts_tsv(&text, path)?,
        })
    }

    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, S, HitCounts)>,
        S: AsRef<str>,
    {
        let entries = entries
            .into_iter()
            .map(|(x, y, c)| {
                let (key, swapped) = PairKey::normalize(x.as_ref(), y.as_ref());
                (key, if swapped { c.swapped() } else { c })
            })
            .collect();
        StaticTable { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl HitCountProvider for StaticTable {
    fn counts(&self, x: &str, y: &str) -> Result<HitCounts, ProviderError> {
        let (key, swapped) = PairKey::normalize(x, y);
        self.entries
            .get(&key)
            .map(|&c| if swapped { c.swapped() } else { c })
            .ok_or_else(|| ProviderError::MissingPair {
                x: x.to_string(),
                y: y.to_string(),
            })
    }
}
