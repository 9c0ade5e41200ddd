use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::ProviderError;

/// Environment variable consulted for the remote credential when the
/// config does not name one.
pub const DEFAULT_CREDENTIAL_ENV: &str = "CTXTRUST_API_KEY";

/// Provider configuration, read from TOML:
///
/// ```toml
/// kind = "static"          # or "corpus" / "remote"
/// table = "counts.tsv"     # static: counts table
/// # dir = "corpus/"        # corpus: directory of text documents
/// ```
///
/// Relative paths resolve against the config file's directory.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProviderConfig {
    Static { table: PathBuf },
    Corpus { dir: PathBuf },
    Remote(RemoteConfig),
}

/// Settings for a search engine reached over HTTP.
///
/// `endpoint` must contain `{query}`; it may also contain `{key}`, which is
/// replaced by the credential. Both are percent-encoded.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemoteConfig {
    pub endpoint: String,
    /// Index size used as `M`.
    pub m: u64,
    /// Minimum pause between two requests.
    #[serde(default)]
    pub interval_ms: u64,
    /// Retries after the first failed attempt.
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    pub extract: Extraction,
    /// Credential in the file; the environment variable takes precedence.
    #[serde(default)]
    pub credential: Option<String>,
    #[serde(default)]
    pub credential_env: Option<String>,
    /// Send the credential in this header instead of (or as well as) `{key}`.
    #[serde(default)]
    pub credential_header: Option<String>,
}

fn default_retries() -> u32 {
    3
}

fn default_timeout_ms() -> u64 {
    10_000
}

/// How the total hit count is pulled out of a response body.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extraction {
    /// RFC 6901 pointer into a JSON body, e.g. `/webPages/totalEstimatedMatches`.
    JsonPointer(String),
    /// Regular expression whose first capture group holds the count;
    /// thousands separators are ignored.
    Regex(String),
}

impl ProviderConfig {
    pub fn load(path: &Path) -> Result<Self, ProviderError> {
        let text = fs::read_to_string(path).map_err(|source| ProviderError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, ProviderError> {
        let mut config: ProviderConfig =
            toml::from_str(text).map_err(|e| ProviderError::Config(e.to_string()))?;
        match &mut config {
            ProviderConfig::Static { table } => *table = base.join(&*table),
            ProviderConfig::Corpus { dir } => *dir = base.join(&*dir),
            ProviderConfig::Remote(remote) => remote.validate()?,
        }
        Ok(config)
    }
}

impl RemoteConfig {
    pub fn validate(&self) -> Result<(), ProviderError> {
        if !self.endpoint.contains("{query}") {
            return Err(ProviderError::Config(
                "endpoint must contain {query}".into(),
            ));
        }
        if self.m == 0 {
            return Err(ProviderError::Config("m must be positive".into()));
        }
        Ok(())
    }

    /// The environment variable wins over the file.
    pub fn resolve_credential(&self) -> Option<String> {
        let var = self
            .credential_env
            .as_deref()
            .unwrap_or(DEFAULT_CREDENTIAL_ENV);
        std::env::var(var)
            .ok()
            .filter(|v| !v.is_empty())
            .or_else(|| self.credential.clone())
    }
}
