use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use ctxtrust_core::semantic::{HitCounts, PairKey};

use super::ProviderError;
use crate::fsutil;

/// Persistent map from normalized term pairs to hit counts.
///
/// Many readers, one writer at a time. Counts are stored oriented to the
/// key (`fx` belongs to the lexicographically smaller term) and re-oriented
/// on the way out.
#[derive(Debug, Default)]
pub struct PairCache {
    entries: RwLock<BTreeMap<PairKey, HitCounts>>,
}

impl PairCache {
    /// Loads a cache file; a missing file gives an empty cache.
    pub fn load(path: &Path) -> Result<Self, ProviderError> {
        match fs::read_to_string(path) {
            Ok(text) => Ok(PairCache {
                entries: RwLock::new(parse_counts_tsv(&text, path)?),
            }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(PairCache::default()),
            Err(source) => Err(ProviderError::Io {
                path: path.to_path_buf(),
                source,
            }),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), ProviderError> {
        let text = format_counts_tsv(&self.entries.read().expect("cache lock"));
        fsutil::write_atomic(path, text.as_bytes()).map_err(|source| ProviderError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Counts for `(x, y)`, oriented so `fx` belongs to `x`.
    pub fn get(&self, x: &str, y: &str) -> Option<HitCounts> {
        let (key, swapped) = PairKey::normalize(x, y);
        let entries = self.entries.read().expect("cache lock");
        entries
            .get(&key)
            .map(|&c| if swapped { c.swapped() } else { c })
    }

    /// Stores counts oriented as `(x, y)`.
    pub fn insert(&self, x: &str, y: &str, counts: HitCounts) {
        let (key, swapped) = PairKey::normalize(x, y);
        let stored = if swapped { counts.swapped() } else { counts };
        self.entries
            .write()
            .expect("cache lock")
            .insert(key, stored);
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_tsv(&self) -> String {
        format_counts_tsv(&self.entries.read().expect("cache lock"))
    }
}

/// Parses `term_a<TAB>term_b<TAB>fx<TAB>fy<TAB>fxy<TAB>m` lines. Pairs given
/// out of order or in mixed case are normalized. `#` lines are comments.
pub fn parse_counts_tsv(
    text: &str,
    path: &Path,
) -> Result<BTreeMap<PairKey, HitCounts>, ProviderError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let err = |message: String| ProviderError::Format {
            path: PathBuf::from(path),
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(err(format!(
                "expected 6 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let mut nums = [0u64; 4];
        for (slot, field) in nums.iter_mut().zip(&fields[2..]) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| err(format!("'{field}' is not a non-negative integer")))?;
        }
        let counts =
            HitCounts::new(nums[0], nums[1], nums[2], nums[3]).map_err(|e| err(e.to_string()))?;
        let (key, swapped) = PairKey::normalize(fields[0], fields[1]);
        if key.first().is_empty() || key.second().is_empty() {
            return Err(err("empty term".into()));
        }
        out.insert(key, if swapped { counts.swapped() } else { counts });
    }
    Ok(out)
}

pub fn format_counts_tsv(entries: &BTreeMap<PairKey, HitCounts>) -> String {
    let mut out = String::new();
    for (k, c) in entries {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            k.first(),
            k.second(),
            c.fx(),
            c.fy(),
            c.fxy(),
            c.m()
        )
        .unwrap();
    }
    out
}
