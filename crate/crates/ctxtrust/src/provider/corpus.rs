use std::fs;
use std::path::{Path, PathBuf};

use ctxtrust_core::semantic::HitCounts;

use super::{HitCountProvider, ProviderError};

/// Lowercased alphanumeric runs; everything else separates words.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// An offline document collection standing in for a search index. A
/// document "hits" a term when the term's words appear as a contiguous
/// run of its words, ignoring case.
#[derive(Debug, Clone)]
pub struct Corpus {
    docs: Vec<(PathBuf, Vec<String>)>,
}

impl Corpus {
    /// Reads every regular file directly inside `dir`, in name order.
    pub fn load(dir: &Path) -> Result<Self, ProviderError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| ProviderError::Io { path, source }
        };
        let mut paths = Vec::new();
        for entry in fs::read_dir(dir).map_err(io_err(dir))? {
            let path = entry.map_err(io_err(dir))?.path();
            if path.is_file() {
                paths.push(path);
            }
        }
        paths.sort();
        let mut docs = Vec::with_capacity(paths.len());
        for path in paths {
            let bytes = fs::read(&path).map_err(io_err(&path))?;
            let text = String::from_utf8(bytes)
                .map_err(|_| ProviderError::NotUtf8 { path: path.clone() })?;
            docs.push((path, tokenize(&text)));
        }
        if docs.is_empty() {
            return Err(ProviderError::EmptyCorpus(dir.to_path_buf()));
        }
        Ok(Corpus { docs })
    }

    pub fn from_texts<I, S>(texts: I) -> Result<Self, ProviderError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let docs: Vec<_> = texts
            .into_iter()
            .enumerate()
            .map(|(i, t)| (PathBuf::from(format!("<doc {i}>")), tokenize(t.as_ref())))
            .collect();
        if docs.is_empty() {
            return Err(ProviderError::EmptyCorpus(PathBuf::from("<memory>")));
        }
        Ok(Corpus { docs })
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    fn hits(words: &[String], phrase: &[String]) -> bool {
        !phrase.is_empty() && words.windows(phrase.len()).any(|w| w == phrase)
    }
}

impl HitCountProvider for Corpus {
    fn counts(&self, x: &str, y: &str) -> Result<HitCounts, ProviderError> {
        let (px, py) = (tokenize(x), tokenize(y));
        let (mut fx, mut fy, mut fxy) = (0u64, 0u64, 0u64);
        for (_, words) in &self.docs {
            let (hx, hy) = (Self::hits(words, &px), Self::hits(words, &py));
            fx += u64::from(hx);
            fy += u64::from(hy);
            fxy += u64::from(hx && hy);
        }
        HitCounts::new(fx, fy, fxy, self.docs.len() as u64).map_err(|source| {
            ProviderError::Inconsistent {
                x: x.to_string(),
                y: y.to_string(),
                source,
            }
        })
    }
}
