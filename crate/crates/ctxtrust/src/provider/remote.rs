use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use ctxtrust_core::semantic::HitCounts;
use regex::Regex;
use url::form_urlencoded;

use super::{Extraction, HitCountProvider, ProviderError, RemoteConfig};

/// Hit counts from a search engine's reported result totals.
///
/// A pair costs three queries: `"x"`, `"y"` and `"x" AND "y"`. Requests
/// are serialized and spaced at least `interval_ms` apart.
pub struct RemoteProvider {
    config: RemoteConfig,
    credential: Option<String>,
    agent: ureq::Agent,
    pattern: Option<Regex>,
    last_request: Mutex<Option<Instant>>,
    requests: AtomicUsize,
}

impl RemoteProvider {
    pub fn new(config: RemoteConfig) -> Result<Self, ProviderError> {
        config.validate()?;
        let pattern = match &config.extract {
            Extraction::Regex(re) => Some(
                Regex::new(re)
                    .map_err(|e| ProviderError::Config(format!("extraction regex: {e}")))?,
            ),
            Extraction::JsonPointer(_) => None,
        };
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(config.timeout_ms)))
            .http_status_as_error(true)
            .build()
            .into();
        Ok(RemoteProvider {
            credential: config.resolve_credential(),
            config,
            agent,
            pattern,
            last_request: Mutex::new(None),
            requests: AtomicUsize::new(0),
        })
    }

    /// HTTP requests sent so far, retries included.
    pub fn requests_sent(&self) -> usize {
        self.requests.load(Ordering::Relaxed)
    }

    fn url_for(&self, query: &str) -> String {
        let encode = |s: &str| form_urlencoded::byte_serialize(s.as_bytes()).collect::<String>();
        let mut url = self.config.endpoint.replace("{query}", &encode(query));
        if url.contains("{key}") {
            url = url.replace("{key}", &encode(self.credential.as_deref().unwrap_or("")));
        }
        url
    }

    fn get(&self, url: &str) -> Result<String, String> {
        let mut request = self.agent.get(url);
        if let (Some(header), Some(key)) = (&self.config.credential_header, &self.credential) {
            request = request.header(header.as_str(), key.as_str());
        }
        let mut response = request.call().map_err(|e| e.to_string())?;
        response
            .body_mut()
            .read_to_string()
            .map_err(|e| e.to_string())
    }

    fn extract(&self, body: &str) -> Result<u64, String> {
        match &self.config.extract {
            Extraction::JsonPointer(pointer) => {
                let json: serde_json::Value =
                    serde_json::from_str(body).map_err(|e| format!("response is not JSON: {e}"))?;
                let value = json
                    .pointer(pointer)
                    .ok_or_else(|| format!("no value at {pointer}"))?;
                match value {
                    serde_json::Value::Number(n) => n
                        .as_u64()
                        .ok_or_else(|| format!("{n} is not a non-negative integer")),
                    serde_json::Value::String(s) => parse_count(s),
                    other => Err(format!("unexpected value {other} at {pointer}")),
                }
            }
            Extraction::Regex(_) => {
                let re = self.pattern.as_ref().expect("compiled with config");
                let caps = re
                    .captures(body)
                    .ok_or_else(|| "extraction pattern did not match".to_string())?;
                let group = caps
                    .get(1)
                    .ok_or_else(|| "extraction pattern has no capture group".to_string())?;
                parse_count(group.as_str())
            }
        }
    }

    fn throttle(&self) {
        let mut last = self.last_request.lock().expect("throttle lock");
        if let Some(at) = *last {
            let gap = Duration::from_millis(self.config.interval_ms);
            let elapsed = at.elapsed();
            if elapsed < gap {
                thread::sleep(gap - elapsed);
            }
        }
        *last = Some(Instant::now());
    }

    /// Total hits for one query, retrying transport and extraction failures.
    pub fn hits(&self, query: &str) -> Result<u64, ProviderError> {
        let url = self.url_for(query);
        let attempts = self.config.retries + 1;
        let mut last_error = String::new();
        for _ in 0..attempts {
            self.throttle();
            self.requests.fetch_add(1, Ordering::Relaxed);
            match self.get(&url).and_then(|body| self.extract(&body)) {
                Ok(n) => return Ok(n),
                Err(e) => last_error = e,
            }
        }
        Err(ProviderError::Remote {
            query: query.to_string(),
            attempts,
            message: last_error,
        })
    }
}

fn quote(term: &str) -> String {
    format!("\"{}\"", term.trim())
}

fn parse_count(text: &str) -> Result<u64, String> {
    let digits: String = text
        .chars()
        .filter(|c| !matches!(c, ',' | '.' | '_' | ' ' | '\u{a0}' | '\''))
        .collect();
    digits
        .parse()
        .map_err(|_| format!("'{text}' is not a count"))
}

impl HitCountProvider for RemoteProvider {
    fn counts(&self, x: &str, y: &str) -> Result<HitCounts, ProviderError> {
        let fx = self.hits(&quote(x))?;
        let fy = self.hits(&quote(y))?;
        let fxy = self.hits(&format!("{} AND {}", quote(x), quote(y)))?;
        HitCounts::new(fx, fy, fxy, self.config.m).map_err(|source| ProviderError::Inconsistent {
            x: x.to_string(),
            y: y.to_string(),
            source,
        })
    }
}
